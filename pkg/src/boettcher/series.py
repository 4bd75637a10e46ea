"""Dense truncated power series over Q[pi]/(pi^m - p).

A :class:`TruncatedSeries` stores coefficients 0..T and always knows its
truncation order T; binary operations combine orders with ``min``.

A *normalized tail series* is a unit series ``1 + sum_n t_n x^n`` standing for
the Laurent map ``z (1 + sum_n t_n z^(-n d))`` in the variable ``x = z^(-d)``.
:func:`lagrange_invert` and :func:`compose_normalized` work in that picture.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivergenceError, DomainError, ParameterError, ResourceError
from .padic import INF, EisensteinNumber, Valuation, as_eisenstein


class TruncatedSeries:
    __slots__ = ("coeffs", "p", "m")

    def __init__(self, coeffs: Iterable, trunc: int | None = None, p: int = 2, m: int = 1):
        coeffs = [as_eisenstein(c, p, m) for c in coeffs]
        if trunc is None:
            trunc = len(coeffs) - 1
        if trunc < 0:
            raise ParameterError("truncation order must be >= 0")
        zero = EisensteinNumber.zero(p, m)
        coeffs = coeffs[: trunc + 1] + [zero] * (trunc + 1 - len(coeffs))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "m", m)

    @classmethod
    def _make(cls, coeffs: tuple, p: int, m: int) -> "TruncatedSeries":
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "m", m)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def one(cls, trunc: int, p: int, m: int = 1) -> "TruncatedSeries":
        return cls([1], trunc, p, m)

    @classmethod
    def unit(cls, tail: Sequence, p: int, m: int = 1) -> "TruncatedSeries":
        """The unit series 1 + sum_{n>=1} tail[n-1] x^n, truncated at len(tail)."""
        return cls([1, *tail], len(tail), p, m)

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    @property
    def field(self) -> tuple:
        return (self.p, self.m)

    def tail(self) -> tuple:
        """Coefficients 1..T."""
        return self.coeffs[1:]

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def zero_scalar(self) -> EisensteinNumber:
        return EisensteinNumber.zero(self.p, self.m)

    def truncate(self, trunc: int) -> "TruncatedSeries":
        if trunc > self.trunc:
            raise ParameterError("cannot raise the truncation order of a series")
        return TruncatedSeries._make(self.coeffs[: trunc + 1], self.p, self.m)

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise ParameterError(f"expected a TruncatedSeries, got {type(other).__name__}")
        if other.field != self.field:
            raise ParameterError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        T = min(self.trunc, other.trunc)
        return TruncatedSeries._make(
            tuple(self.coeffs[i] + other.coeffs[i] for i in range(T + 1)), self.p, self.m
        )

    def __sub__(self, other):
        self._check(other)
        T = min(self.trunc, other.trunc)
        return TruncatedSeries._make(
            tuple(self.coeffs[i] - other.coeffs[i] for i in range(T + 1)), self.p, self.m
        )

    def __neg__(self):
        return TruncatedSeries._make(tuple(-c for c in self.coeffs), self.p, self.m)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(other)

    def scale(self, k) -> "TruncatedSeries":
        return TruncatedSeries._make(tuple(c * k for c in self.coeffs), self.p, self.m)

    def __pow__(self, k: int):
        return int_pow(self, k)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.m, self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries([{', '.join(map(str, self.coeffs))}], trunc={self.trunc}, p={self.p}, m={self.m})"

    def first_difference(self, other: "TruncatedSeries") -> int | None:
        """Smallest degree where the two series differ (up to the common order)."""
        self._check(other)
        for n in range(min(self.trunc, other.trunc) + 1):
            if self.coeffs[n] != other.coeffs[n]:
                return n
        return None


def _product_coeffs(a: Sequence, b: Sequence, T: int, zero) -> list:
    out = [zero] * (T + 1)
    # skip zero coefficients; sparse inputs (reindexed series) are common
    nz_b = [(j, y) for j, y in enumerate(b[: T + 1]) if y]
    for i, x in enumerate(a[: T + 1]):
        if not x:
            continue
        limit = T - i
        for j, y in nz_b:
            if j > limit:
                break
            out[i + j] = out[i + j] + x * y
    return out


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at min(T_a, T_b)."""
    a._check(b)
    T = min(a.trunc, b.trunc)
    return TruncatedSeries._make(
        tuple(_product_coeffs(a.coeffs, b.coeffs, T, a.zero_scalar())), a.p, a.m
    )


def _require_unit(s: TruncatedSeries, what: str):
    if s.coeffs[0] != 1:
        raise DomainError(f"{what} needs constant coefficient 1, got {s.coeffs[0]}")


def unit_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """1/a for a unit series; the recursion never divides (a_0 = 1)."""
    _require_unit(a, "unit_reciprocal")
    T = a.trunc
    out = [a.coeffs[0]]
    for n in range(1, T + 1):
        acc = a.zero_scalar()
        for k in range(1, n + 1):
            if a.coeffs[k]:
                acc = acc + a.coeffs[k] * out[n - k]
        out.append(-acc)
    return TruncatedSeries._make(tuple(out), a.p, a.m)


def int_pow(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """a**k by repeated squaring."""
    if not isinstance(k, int) or k < 0:
        raise ParameterError("int_pow needs a non-negative integer exponent")
    result = TruncatedSeries.one(a.trunc, a.p, a.m)
    base = a
    while k:
        if k & 1:
            result = series_mul(result, base)
        k >>= 1
        if k:
            base = series_mul(base, base)
    return result


def dth_root(s: TruncatedSeries, d: int) -> TruncatedSeries:
    """The unique u = 1 + O(x) with u**d = s up to x**T."""
    if d < 1:
        raise ParameterError("dth_root needs d >= 1")
    _require_unit(s, "dth_root")
    return implicit_dth_root(s.trunc, d, lambda n, u: s.coeffs[n], s.p, s.m)


def implicit_dth_root(T: int, d: int, target, p: int, m: int = 1) -> TruncatedSeries:
    """Solve u**d = S degree by degree where S_n = target(n, u[:n]) may depend on u_1..u_{n-1}.

    Tracks the partial powers u**j (j = 1..d).  In degree n each u**j has
    coefficient j*u_n + (terms in u_1..u_{n-1}), so u_n is obtained by one
    division by d.
    """
    zero = EisensteinNumber.zero(p, m)
    one = EisensteinNumber.one(p, m)
    u = [one]
    # powers[j][n] = [x^n] u^(j+1)
    powers = [[one] for _ in range(d)]
    for n in range(1, T + 1):
        rests = [zero]
        for j in range(1, d):
            prev = powers[j - 1]
            acc = zero
            # k = 0 and k = n terms are linear in u_n and are added after solving
            for k in range(1, n):
                if u[k]:
                    acc = acc + u[k] * prev[n - k]
            rests.append(acc + rests[j - 1])
        un = (as_eisenstein(target(n, u), p, m) - rests[d - 1]) / d
        u.append(un)
        for j in range(d):
            powers[j].append(rests[j] + un * (j + 1))
    return TruncatedSeries._make(tuple(u), p, m)


def reindex_power(s: TruncatedSeries, d: int) -> TruncatedSeries:
    """sum_n s_n x^(n d), truncated at the order of s."""
    if d < 1:
        raise ParameterError("reindex_power needs d >= 1")
    T, zero = s.trunc, s.zero_scalar()
    out = [zero] * (T + 1)
    for n in range(0, T // d + 1):
        out[n * d] = s.coeffs[n]
    return TruncatedSeries._make(tuple(out), s.p, s.m)


def substitute(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """outer(inner(x)) for inner with zero constant term (Horner scheme)."""
    outer._check(inner)
    if inner.coeffs[0]:
        raise DomainError("substitution needs an inner series without constant term")
    T = min(outer.trunc, inner.trunc)
    inner = inner.truncate(T)
    acc = TruncatedSeries([outer.coeffs[T]], T, outer.p, outer.m)
    for n in range(T - 1, -1, -1):
        acc = series_mul(acc, inner)
        acc = TruncatedSeries._make(
            (acc.coeffs[0] + outer.coeffs[n],) + acc.coeffs[1:], acc.p, acc.m
        )
    return acc


def _partitions(n: int, max_part: int | None = None):
    """Partitions of n as dicts {part: multiplicity}, largest part first."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield {}
        return
    for k in range(min(n, max_part), 0, -1):
        for mult in range(n // k, 0, -1):
            for rest in _partitions(n - k * mult, k - 1):
                out = {k: mult}
                out.update(rest)
                yield out


def partitions(n: int):
    """All partitions of n >= 0 as {part: multiplicity} dicts."""
    return _partitions(n)


def _falling_weight(n: int, d: int, parts: int) -> int:
    # prod_{j=2}^{parts} (n d - j); equals binom(nd-1, M) M! / (nd-1)
    w = 1
    for j in range(2, parts + 1):
        w *= n * d - j
    return w


def lagrange_invert(alpha: TruncatedSeries, d: int) -> TruncatedSeries:
    """Tail of F^(-1) for F(z) = z (1 + sum alpha_n z^(-n d)).

    Returns ``1 + sum beta_n x^n`` with

        beta_n = - sum_{sum k m_k = n} prod_{j=2}^{M} (n d - j) prod_k alpha_k^m_k / m_k!

    where M = sum m_k.  The partition terms are grouped by their number of
    parts M: the inner sum over partitions with M parts equals the x^n
    coefficient of A(x)^M / M! with A = alpha - 1 (multinomial theorem), so
    no explicit enumeration is needed.  :func:`lagrange_invert_enumerated`
    evaluates the same sum term by term.
    """
    if d == 0:
        raise ParameterError("lagrange_invert needs d != 0")
    _require_unit(alpha, "lagrange_invert")
    T, zero = alpha.trunc, alpha.zero_scalar()
    A = TruncatedSeries._make((zero,) + alpha.coeffs[1:], alpha.p, alpha.m)
    beta = [zero] * (T + 1)
    power = TruncatedSeries.one(T, alpha.p, alpha.m)
    factorial = 1
    for M in range(1, T + 1):
        power = series_mul(power, A)
        factorial *= M
        if not any(power.coeffs):
            break
        for n in range(M, T + 1):
            c = power.coeffs[n]
            if c:
                beta[n] = beta[n] - c * Fraction(_falling_weight(n, d, M), factorial)
    beta[0] = alpha.coeffs[0]
    return TruncatedSeries._make(tuple(beta), alpha.p, alpha.m)


def lagrange_invert_enumerated(alpha: TruncatedSeries, d: int, max_n: int = 24) -> TruncatedSeries:
    """Term-by-term evaluation of the partition sum (exponential in T)."""
    if d == 0:
        raise ParameterError("lagrange_invert needs d != 0")
    _require_unit(alpha, "lagrange_invert")
    T, zero = alpha.trunc, alpha.zero_scalar()
    if T > max_n:
        raise ResourceError(f"partition enumeration capped at n <= {max_n}")
    beta = [alpha.coeffs[0]]
    for n in range(1, T + 1):
        total = zero
        for parts in partitions(n):
            term = alpha.coeffs[0]
            denom = 1
            for k, mk in parts.items():
                term = term * alpha.coeffs[k] ** mk
                for i in range(2, mk + 1):
                    denom *= i
            if term:
                M = sum(parts.values())
                total = total + term * Fraction(_falling_weight(n, d, M), denom)
        beta.append(-total)
    return TruncatedSeries._make(tuple(beta), alpha.p, alpha.m)


def compose_normalized(F: TruncatedSeries, G: TruncatedSeries, d: int) -> TruncatedSeries:
    """Tail of F(G(z)) where both are normalized tails in x = z^(-d).

    With G(z) = z U(x):  G(z)^(-d) = x / U(x)^d, so
    F(G(z)) = z U(x) (1 + sum f_n (x / U^d)^n).
    """
    F._check(G)
    _require_unit(F, "compose_normalized")
    _require_unit(G, "compose_normalized")
    T = min(F.trunc, G.trunc)
    F, G = F.truncate(T), G.truncate(T)
    if T == 0:
        return F
    recip = unit_reciprocal(int_pow(G, d))
    shifted = TruncatedSeries._make(
        (G.zero_scalar(),) + recip.coeffs[:T], G.p, G.m
    )
    return series_mul(G, substitute(F, shifted))


def is_identity_tail(s: TruncatedSeries) -> bool:
    return s.coeffs[0] == 1 and not any(s.coeffs[1:])


def evaluate_series(s: TruncatedSeries, x, slope_bound) -> tuple:
    """Evaluate sum_{n<=T} s_n x^n with a certified bound on the omitted tail.

    ``slope_bound`` must be a proven lower bound for inf_n v(s_n)/n.  Every
    omitted term then has valuation >= (T+1) (v(x) + slope_bound); the second
    return value is that bound.  Raises DivergenceError unless
    v(x) + slope_bound > 0.
    """
    x = as_eisenstein(x, s.p, s.m)
    vx = x.valuation()
    slope_bound = Fraction(slope_bound)
    if vx == INF:
        return s.coeffs[0], INF
    margin = vx + slope_bound
    if margin <= 0:
        raise DivergenceError(
            f"v(x) + slope_bound = {margin} <= 0: point outside the certified disk"
        )
    value = s.zero_scalar()
    for c in reversed(s.coeffs):
        value = value * x + c
    bound: Valuation = (s.trunc + 1) * margin
    return value, bound
