"""Coefficient solvers for the Boettcher-coordinate functional equations.

Three unit series are computed, all in the variable x:

* ``a``: inverse Boettcher coordinate of f_c(z) = z^d - c, written as
  varphi_c(z) = z (1 + sum a_n z^(-nd)), solving
  ``(1 + sum a_n x^n)^d = 1 + c x + sum a_n x^(nd)``;
* ``b``: Boettcher coordinate phi_c(x) = x (1 + sum b_n x^n) of
  g_c(x) = x^d + c x^(d+1), solving
  ``(1 + sum b_n x^n)^d = 1 + c x + sum b_n x^(nd) (1 + c x)^(n+1)``;
* ``t``: candidate conjugacy between the basins of f_{c1} and f_{c2}, solving
  ``(1 + sum t_n x^n)^d = 1 + (w^-1 c2 - c1) x + sum t_n x^(nd) / (1 - c1 x)^(nd-1)``.

:func:`partition_sum_coefficient` recomputes ``a_n`` from the explicit partition sum and is
kept as an oracle that shares no code path with :func:`solve_a`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from .errors import HypothesisError, IntegrityError, ParameterError, ResourceError
from .padic import EisensteinNumber, as_eisenstein, require_prime
from .series import (
    TruncatedSeries,
    compose_normalized,
    dth_root,
    implicit_dth_root,
    int_pow,
    lagrange_invert,
    partitions,
    reindex_power,
    unit_reciprocal,
)

DEFAULT_TERMS = 64
PARTITION_SUM_LIMIT = 12

KINDS = ("a", "b", "t", "a_inv", "b_inv")


@dataclass(frozen=True)
class BoettcherParams:
    """(p, d, c) in the field Q[pi]/(pi^m - p); ``condition`` is filled by classification."""

    p: int
    d: int
    c: EisensteinNumber
    m: int = 1
    condition: Any = field(default=None, compare=False)

    def __post_init__(self):
        require_prime(self.p)
        if not isinstance(self.d, int) or self.d < 2:
            raise ParameterError(f"d = {self.d!r} must be an integer >= 2")
        object.__setattr__(self, "c", as_eisenstein(self.c, self.p, self.m))
        if self.c.is_zero():
            raise ParameterError("c must be nonzero")

    @property
    def N(self) -> int | None:
        return None if self.condition is None else self.condition.N

    @property
    def tag(self) -> str | None:
        return None if self.condition is None else self.condition.tag


def make_params(p: int, d: int, c, m: int | None = None) -> BoettcherParams:
    """Build parameters without classifying them; m defaults to that of c."""
    if m is None:
        m = c.m if isinstance(c, EisensteinNumber) else 1
    return BoettcherParams(p, d, as_eisenstein(c, p, m), m)


@dataclass(frozen=True)
class CoefficientTable:
    """Solved coefficients 1..T, stored as the unit series 1 + sum_n entry_n x^n.

    For kind ``t`` the params carry the effective c = w^-1 c2 - c1 and
    ``extra`` holds ``(c1, c2, omega)``.
    """

    kind: str
    series: TruncatedSeries
    params: BoettcherParams
    extra: tuple | None = None

    @property
    def T(self) -> int:
        return self.series.trunc

    @property
    def entries(self) -> tuple:
        return self.series.tail()

    def __getitem__(self, n: int) -> EisensteinNumber:
        if not 1 <= n <= self.T:
            raise IndexError(f"entry {n} outside 1..{self.T}")
        return self.series.coeffs[n]

    def with_entry(self, n: int, value) -> "CoefficientTable":
        """Copy with entry n replaced (fault injection in tests)."""
        coeffs = list(self.series.coeffs)
        coeffs[n] = as_eisenstein(value, self.params.p, self.params.m)
        return replace(self, series=TruncatedSeries(coeffs, self.T, self.params.p, self.params.m))


def _linear(params: BoettcherParams, T: int, slope) -> TruncatedSeries:
    return TruncatedSeries([1, slope], T, params.p, params.m)


def solve_a(params: BoettcherParams, T: int = DEFAULT_TERMS) -> CoefficientTable:
    """a_1..a_T by the fixed point u <- dth_root(1 + c x + reindex(u - 1, d)).

    The right side only sees u through degrees >= d, so each round extends the
    correct prefix by a factor of d; iteration stops once u is stable.
    """
    if T < 0:
        raise ParameterError("T must be >= 0")
    p, m, d = params.p, params.m, params.d
    u = TruncatedSeries.one(T, p, m)
    base = _linear(params, T, params.c)
    for _ in range(T + 2):
        shifted = u - TruncatedSeries.one(T, p, m)
        nxt = dth_root(base + reindex_power(shifted, d), d)
        if nxt == u:
            break
        u = nxt
    return CoefficientTable("a", u, params)


def _binomial_row(k: int) -> list:
    return [math.comb(k, j) for j in range(k + 1)]


def _scalar_powers(x: EisensteinNumber, n: int) -> list:
    out = [EisensteinNumber.one(x.p, x.m)]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def solve_b(params: BoettcherParams, T: int = DEFAULT_TERMS) -> CoefficientTable:
    """b_1..b_T degree by degree.

    Degree n of the right side is [n == 1] c + sum_{i d <= n} q(n, i) b_i c^(n - i d)
    with q(n, i) = binom(i + 1, n - i d); only b_i with i < n occur.
    """
    if T < 0:
        raise ParameterError("T must be >= 0")
    p, m, d, c = params.p, params.m, params.d, params.c
    cpow = _scalar_powers(c, T)
    rows = {i: _binomial_row(i + 1) for i in range(1, T // d + 1)}

    def target(n, b):
        acc = c if n == 1 else EisensteinNumber.zero(p, m)
        for i in range(1, n // d + 1):
            j = n - i * d
            if j <= i + 1 and b[i]:
                acc = acc + b[i] * cpow[j] * rows[i][j]
        return acc

    return CoefficientTable("b", implicit_dth_root(T, d, target, p, m), params)


def _check_omega(d: int, omega: int):
    if omega not in (1, -1):
        raise ParameterError("omega must be +1 or -1")
    if omega ** (d - 1) != 1:
        raise ParameterError(f"omega = {omega} does not satisfy omega^(d-1) = 1 for d = {d}")


def solve_t(
    p: int, d: int, c1, c2, omega: int = 1, T: int = DEFAULT_TERMS, m: int | None = None
) -> CoefficientTable:
    """t_1..t_T for the conjugacy series between the basins of f_{c1} and f_{c2}.

    The factors (1 - c1 x)^-(nd-1) are expanded with unit_reciprocal; their
    coefficients are q'(n, i) c1^(n - i d) with integral q'(n, i).
    """
    if m is None:
        m = next((x.m for x in (c1, c2) if isinstance(x, EisensteinNumber)), 1)
    c1, c2 = as_eisenstein(c1, p, m), as_eisenstein(c2, p, m)
    _check_omega(d, omega)
    if c1.valuation() < 0:
        raise HypothesisError(f"v_p(c1) = {c1.valuation()} < 0")
    if T < 0:
        raise ParameterError("T must be >= 0")
    # omega is +-1, so omega^-1 = omega
    c = c2 * omega - c1
    params = make_params(p, d, c, m)
    lin = TruncatedSeries([1, -c1], T, p, m)
    recips = {}
    for i in range(1, T // d + 1):
        order = T - i * d
        recips[i] = unit_reciprocal(int_pow(lin.truncate(order), i * d - 1))

    def target(n, t):
        acc = c if n == 1 else EisensteinNumber.zero(p, m)
        for i in range(1, n // d + 1):
            if t[i]:
                acc = acc + t[i] * recips[i].coeffs[n - i * d]
        return acc

    series = implicit_dth_root(T, d, target, p, m)
    return CoefficientTable("t", series, params, extra=(c1, c2, omega))


def invert_table(table: CoefficientTable) -> CoefficientTable:
    """Coefficients of the compositional inverse (kinds a_inv / b_inv)."""
    if table.kind not in ("a", "b"):
        raise ParameterError(f"cannot invert a table of kind {table.kind!r}")
    inv = lagrange_invert(table.series, table.params.d)
    return CoefficientTable(table.kind + "_inv", inv, table.params)


def solve(params: BoettcherParams, kind: str, T: int = DEFAULT_TERMS) -> CoefficientTable:
    if kind == "a":
        return solve_a(params, T)
    if kind == "b":
        return solve_b(params, T)
    if kind == "a_inv":
        return invert_table(solve_a(params, T))
    if kind == "b_inv":
        return invert_table(solve_b(params, T))
    raise ParameterError(f"unknown series kind {kind!r}")


def _binom_frac(top: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out = out * (top - j) / (j + 1)
    return out


def partition_sum_coefficient(params: BoettcherParams, n: int, limit: int = PARTITION_SUM_LIMIT) -> EisensteinNumber:
    """a_n from the explicit block-wise partition sum.

    For n < d this is binom(1/d, n) c^n.  For d^i <= n < d^(i+1) it sums
    alpha(n_0, n_1, ...) over tuples with n_0 + d sum_k k n_k = n, where

        alpha = c^n_0 / (d^n_0 n_0!) prod_k a_k^n_k / (d^n_k n_k!) prod_{j<S} (1 - j d)

    and S = n_0 + sum_k n_k.  Lower a_k come from the same formula.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if n > limit:
        raise ResourceError(f"partition-sum oracle is capped at n <= {limit}")
    d, c = params.d, params.c
    cache: dict[int, EisensteinNumber] = {}

    def a(k: int) -> EisensteinNumber:
        if k in cache:
            return cache[k]
        if k < d:
            val = c ** k * _binom_frac(Fraction(1, d), k)
        else:
            val = EisensteinNumber.zero(params.p, params.m)
            for j in range(k // d + 1):
                n0 = k - d * j
                for parts in partitions(j):
                    S = n0 + sum(parts.values())
                    weight = Fraction(1, d ** S * math.factorial(n0))
                    for i in range(S):
                        weight *= 1 - i * d
                    term = c ** n0
                    for part, mult in parts.items():
                        term = term * a(part) ** mult
                        weight /= math.factorial(mult)
                    val = val + term * weight
        cache[k] = val
        return val

    return a(n)


def _defining_rhs(table: CoefficientTable) -> TruncatedSeries:
    params, T = table.params, table.T
    p, m, d = params.p, params.m, params.d
    s = table.series
    if table.kind == "a":
        one = TruncatedSeries.one(T, p, m)
        return _linear(params, T, params.c) + reindex_power(s - one, d)
    if table.kind == "b":
        rhs = _linear(params, T, params.c)
        for i in range(1, T // d + 1):
            if not s[i]:
                continue
            factor = int_pow(_linear(params, T, params.c), i + 1)
            shifted = [0] * (i * d) + list(factor.coeffs[: T + 1 - i * d])
            rhs = rhs + TruncatedSeries(shifted, T, p, m).scale(s[i])
        return rhs
    if table.kind == "t":
        c1, _, _ = table.extra
        coeffs = [EisensteinNumber.one(p, m)] + [EisensteinNumber.zero(p, m)] * T
        if T >= 1:
            coeffs[1] = params.c
        c1pow = _scalar_powers(c1, T)
        for i in range(1, T // d + 1):
            for n in range(i * d, T + 1):
                # [x^j] (1 - c1 x)^-(id-1) = binom(id - 2 + j, j) c1^j
                j = n - i * d
                coeffs[n] = coeffs[n] + s[i] * c1pow[j] * math.comb(i * d - 2 + j, j)
        return TruncatedSeries(coeffs, T, p, m)
    raise ParameterError(f"no defining equation for kind {table.kind!r}")


def residual_check(table: CoefficientTable) -> int:
    """Re-substitute the table into its defining equation.

    Returns T when the residual vanishes identically; otherwise raises
    IntegrityError naming the first failing degree.  Inverse tables are
    checked by composing with a freshly solved forward table.
    """
    T = table.T
    if T == 0:
        return 0
    if table.kind in ("a_inv", "b_inv"):
        forward = solve(table.params, table.kind[0], T)
        comp = compose_normalized(forward.series, table.series, table.params.d)
        bad = next((n for n in range(1, T + 1) if comp[n]), None)
    else:
        lhs = int_pow(table.series, table.params.d)
        bad = lhs.first_difference(_defining_rhs(table))
    if bad is not None:
        raise IntegrityError(f"residual nonzero at degree {bad} (kind {table.kind})", degree=bad)
    return T
