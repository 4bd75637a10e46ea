"""Closed-form valuation predictions, convergence radii and their verification.

Parameters (p, d, c) fall into one of two regimes:

* tag ``A`` (N = 0): p | d and v_p(c) < v_p(d) + v_p((d-1)!)/(d-1);
* tag ``B`` (N >= 1): d a power of p and
  N v_p(d) + L < v_p(c) < (N+1) v_p(d) + L  with L = v_p((d-1)!)/(d-1).

Everything else, including parameters sitting exactly on a threshold, is
tag ``None`` and no prediction is made for it.  All radii are returned as
exact base-p logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import DomainError, HypothesisError, ParameterError, ResourceError
from .padic import (
    EisensteinNumber,
    Valuation,
    as_eisenstein,
    canonical_decompose,
    prime_power_exponent,
    vp_factorial,
    vp_int,
)
from .series import evaluate_series, partitions
from .solver import (
    BoettcherParams,
    CoefficientTable,
    make_params,
    residual_check,
    solve_t,
)

PARTITION_INEQUALITY_LIMIT = 20


@dataclass(frozen=True)
class ConditionReport:
    tag: str | None
    N: int | None
    vpc: Fraction
    lower_bound: Fraction | None
    upper_bound: Fraction | None
    reason: str = ""


def _factorial_term(p: int, d: int) -> Fraction:
    # v_p((d-1)!) / (d-1)
    return Fraction(vp_factorial(p, d - 1), d - 1)


def classify_condition(p: int, d: int, c, m: int | None = None) -> ConditionReport:
    params = make_params(p, d, c, m)
    vpc = params.c.valuation()
    vd = vp_int(p, d)
    L = _factorial_term(p, d)
    a_bound = vd + L
    if vd >= 1 and vpc < a_bound:
        return ConditionReport("A", 0, vpc, None, a_bound)
    if vd == 0:
        return ConditionReport(None, None, vpc, None, None, f"p = {p} does not divide d = {d}")
    if prime_power_exponent(p, d) is None:
        return ConditionReport(
            None, None, vpc, None, None,
            f"v_p(c) = {vpc} is not < v_p(d) + v_p((d-1)!)/(d-1) = {a_bound}, "
            f"and d = {d} is not a power of p = {p}",
        )
    q = (vpc - L) / vd
    N = math.floor(q)
    if q == N:
        return ConditionReport(
            None, None, vpc, None, None,
            f"v_p(c) = {vpc} equals the threshold {N}*v_p(d) + v_p((d-1)!)/(d-1) = {N * vd + L}; "
            "the defining inequalities are strict",
        )
    return ConditionReport("B", N, vpc, N * vd + L, (N + 1) * vd + L)


def classify(params: BoettcherParams) -> BoettcherParams:
    """Copy of params with the condition report filled in."""
    if params.condition is not None:
        return params
    return replace(params, condition=classify_condition(params.p, params.d, params.c, params.m))


def _require_condition(params: BoettcherParams) -> BoettcherParams:
    params = classify(params)
    if params.condition.tag is None:
        raise DomainError(
            f"(p, d, c) = ({params.p}, {params.d}, {params.c}) satisfies neither regime: "
            + params.condition.reason
        )
    return params


def e_term(n: int, params: BoettcherParams) -> Fraction:
    """sum_{k=1}^{N} ((d-1) v_p(c/d^k) - v_p((d-1)!)) floor(n / d^k)."""
    params = _require_condition(params)
    p, d, N = params.p, params.d, params.N
    vpc, vd = params.c.valuation(), vp_int(p, d)
    vfac = vp_factorial(p, d - 1)
    return sum(
        ((d - 1) * (vpc - k * vd) - vfac) * (n // d**k) for k in range(1, N + 1)
    ) + Fraction(0)


def predicted_vp(n: int, params: BoettcherParams) -> Fraction:
    """Closed-form v_p(a_n) = v_p(c^n / (d^n n!)) - e(n)."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    params = _require_condition(params)
    p = params.p
    return n * (params.c.valuation() - vp_int(p, params.d)) - vp_factorial(p, n) - e_term(n, params)


def predicted_vp_digits(n: int, params: BoettcherParams) -> Fraction:
    """v_p(a_n) as sum_k v_p(a_{d^k}^{n_k} / n_k!) over the canonical digits of n."""
    params = _require_condition(params)
    p, d = params.p, params.d
    vpc, vd = params.c.valuation(), vp_int(p, d)
    digits = canonical_decompose(n, d, params.N).digits
    return sum(nk * (vpc - (k + 1) * vd) - vp_factorial(p, nk) for k, nk in enumerate(digits))


def limit_slope(params: BoettcherParams) -> Fraction:
    """lim v_p(a_n)/n = inf v_p(a_n)/n = (v_p(c/d^(N+1)) - 1/(p-1)) / d^N."""
    params = _require_condition(params)
    p, d, N = params.p, params.d, params.N
    top = params.c.valuation() - (N + 1) * vp_int(p, d)
    return (top - Fraction(1, p - 1)) / d**N


@dataclass(frozen=True)
class RadiusReport:
    """Exact base-p logarithms of the convergence radii.

    ``r_N_log`` is log_p r_N > 0.  The series in x converge on
    D(0, p^phi_disk_log); the series in z converge on
    D(infinity, p^varphi_disk_log).
    """

    p: int
    d: int
    N: int
    tag: str
    slope: Fraction
    r_N_log: Fraction
    phi_disk_log: Fraction
    phi_inv_disk_log: Fraction
    varphi_disk_log: Fraction
    varphi_inv_disk_log: Fraction
    conjecture_r: int | None = None
    conjecture_exponent: Fraction | None = None
    conjecture_N: int | None = None

    @property
    def conjecture_holds(self) -> bool | None:
        if self.conjecture_r is None:
            return None
        return self.N == self.conjecture_N and self.phi_inv_disk_log == self.conjecture_exponent


def conjecture_params(p: int, r: int) -> BoettcherParams:
    """d = p^2, c = p^(r+2)."""
    if r < 0:
        raise ParameterError("r must be >= 0")
    return make_params(p, p * p, p ** (r + 2))


def radius_report(params: BoettcherParams, conjecture_r: int | None = None) -> RadiusReport:
    """Radii for the classified parameters; pass conjecture_r to compare against
    the exponent -p^(-r)/(p-1) expected for d = p^2, c = p^(r+2)."""
    params = classify(params)
    if conjecture_r is not None:
        expected = conjecture_params(params.p, conjecture_r)
        if (params.d, params.c, params.m) != (expected.d, expected.c, expected.m):
            raise ParameterError(
                f"conjecture mode needs d = p^2 and c = p^(r+2) with r = {conjecture_r}"
            )
    params = _require_condition(params)
    slope = limit_slope(params)
    r_log = -slope
    out = RadiusReport(
        p=params.p,
        d=params.d,
        N=params.N,
        tag=params.tag,
        slope=slope,
        r_N_log=r_log,
        phi_disk_log=-r_log,
        phi_inv_disk_log=-r_log,
        varphi_disk_log=r_log / params.d,
        varphi_inv_disk_log=r_log / params.d,
    )
    if conjecture_r is not None:
        p = params.p
        out = replace(
            out,
            conjecture_r=conjecture_r,
            conjecture_exponent=-Fraction(1, p**conjecture_r * (p - 1)),
            conjecture_N=(conjecture_r + 1) // 2,
        )
    return out


@dataclass(frozen=True)
class ProfileEntry:
    n: int
    actual: Valuation
    predicted: Valuation
    match: bool


@dataclass(frozen=True)
class ValuationProfile:
    kind: str
    params: BoettcherParams
    entries: tuple

    @property
    def all_match(self) -> bool:
        return all(e.match for e in self.entries)

    def mismatches(self) -> list:
        return [e.n for e in self.entries if not e.match]

    def actual(self) -> dict:
        return {e.n: e.actual for e in self.entries}


def verify_profile(table: CoefficientTable, params: BoettcherParams | None = None) -> ValuationProfile:
    """Compare v_p of each table entry with the closed-form prediction.

    Kinds a and b are predicted from (p, d, c); kind t from the effective
    c = w^-1 c2 - c1 stored in the table's params.
    """
    if table.kind not in ("a", "b", "t"):
        raise ParameterError(f"no valuation prediction for kind {table.kind!r}")
    if params is None:
        params = table.params
    elif params != table.params:
        raise ParameterError("table was solved for different parameters")
    params = _require_condition(params)
    entries = []
    for n in range(1, table.T + 1):
        actual = table[n].valuation()
        pred = predicted_vp(n, params)
        entries.append(ProfileEntry(n, actual, pred, actual == pred))
    return ValuationProfile(table.kind, params, tuple(entries))


def subadditivity_check(profile: ValuationProfile) -> bool:
    """v(a_{i+j}) <= v(a_i) + v(a_j) for all i + j <= T."""
    v = profile.actual()
    T = len(v)
    return all(
        v[i + j] <= v[i] + v[j] for i in range(1, T + 1) for j in range(i, T - i + 1)
    )


def check_partition_inequality(params: BoettcherParams, n: int, limit: int = PARTITION_INEQUALITY_LIMIT) -> bool:
    """v(a_n) <= sum_k v(a_k^m_k / m_k!) for every partition n = sum_k k m_k."""
    if n > limit:
        raise ResourceError(f"partition enumeration capped at n <= {limit}")
    params = _require_condition(params)
    p = params.p
    target = predicted_vp(n, params)
    pred = {k: predicted_vp(k, params) for k in range(1, n + 1)}
    for parts in partitions(n):
        bound = sum(mk * pred[k] - vp_factorial(p, mk) for k, mk in parts.items())
        if target > bound:
            return False
    return True


def check_dominance(table: CoefficientTable, params: BoettcherParams, n: int) -> bool:
    """(d | n  =>  v(d a_n) <= v(a_{n/d}))  and  v(d a_n) < v(a_i c^(n - i d)) for 1 <= i < n/d."""
    if table.kind != "a":
        raise ParameterError("check_dominance applies to tables of kind 'a'")
    params = _require_condition(params)
    p, d = params.p, params.d
    vpc = params.c.valuation()
    lhs = vp_int(p, d) + table[n].valuation()
    if n % d == 0 and not lhs <= table[n // d].valuation():
        return False
    return all(
        lhs < table[i].valuation() + (n - i * d) * vpc
        for i in range(1, -(-n // d))
    )


@dataclass(frozen=True)
class InverseBoundReport:
    kind: str
    rows: tuple  # (n, v(forward_n), v(inverse_n))
    bound_holds: bool
    equal_at_prime_powers: bool
    equal_indices: tuple


def inverse_valuation_report(table: CoefficientTable, inverse: CoefficientTable) -> InverseBoundReport:
    """Check v(inverse_n) >= v(forward_n), with equality at n = 1, p, p^2, ..."""
    p = table.params.p
    T = min(table.T, inverse.T)
    rows, equal = [], []
    ge, at_powers = True, True
    for n in range(1, T + 1):
        vf, vi = table[n].valuation(), inverse[n].valuation()
        rows.append((n, vf, vi))
        ge = ge and vi >= vf
        if vi == vf:
            equal.append(n)
        elif n == 1 or prime_power_exponent(p, n) is not None:
            at_powers = False
    return InverseBoundReport(inverse.kind, tuple(rows), ge, at_powers, tuple(equal))


@dataclass(frozen=True)
class IsometryResult:
    x: EisensteinNumber
    y: EisensteinNumber
    v_image_diff: Valuation
    v_diff: Valuation
    certified_bound: Valuation
    certified: bool

    @property
    def isometric(self) -> bool:
        return self.certified and self.v_image_diff == self.v_diff


def isometry_check(table: CoefficientTable, pairs) -> list:
    """Compare v(phi(x) - phi(y)) with v(x - y) for phi(x) = x (1 + sum t_n x^n).

    The tail bound comes from evaluate_series with the proven slope
    inf_n v(t_n)/n as the certified lower bound; a pair is certified only if
    the truncated difference has valuation strictly below the tail bound.
    """
    if table.kind not in ("b", "b_inv"):
        raise ParameterError("isometry_check evaluates the series of kind 'b' or 'b_inv'")
    params = _require_condition(table.params)
    slope = limit_slope(params)
    p, m = params.p, params.m
    out = []
    for x, y in pairs:
        x, y = as_eisenstein(x, p, m), as_eisenstein(y, p, m)
        ux, bx = evaluate_series(table.series, x, slope)
        uy, by = evaluate_series(table.series, y, slope)
        diff = x * ux - y * uy
        bound = min(x.valuation() + bx, y.valuation() + by)
        vdiff = diff.valuation()
        out.append(IsometryResult(x, y, vdiff, (x - y).valuation(), bound, vdiff < bound))
    return out


@dataclass(frozen=True)
class OmegaResult:
    omega: int
    c: EisensteinNumber
    tag: str | None
    N: int | None
    vc1_ge_vc: bool
    verified_order: int
    profile: ValuationProfile
    disk_log: Fraction

    @property
    def all_match(self) -> bool:
        return self.profile.all_match

    @property
    def strictly_inside_unit_basin(self) -> bool:
        return self.disk_log > 0


@dataclass(frozen=True)
class ConjugacyReport:
    p: int
    d: int
    c1: EisensteinNumber
    c2: EisensteinNumber
    T: int
    separation_lhs: Valuation
    separation_rhs: Valuation
    condition_c2: ConditionReport
    results: tuple

    @property
    def separation_holds(self) -> bool:
        return self.separation_lhs == self.separation_rhs

    @property
    def verified(self) -> bool:
        return self.separation_holds and all(
            r.all_match and r.strictly_inside_unit_basin for r in self.results
        )

    @property
    def conclusion(self) -> str:
        if not self.verified:
            return "evidence incomplete: see per-omega results"
        exps = ", ".join(f"omega={r.omega}: {r.disk_log}" for r in self.results)
        return (
            "every normalized candidate conjugacy converges exactly on |z|_p > p^e with "
            f"e > 0 ({exps}), a disk strictly inside the basin |z|_p > 1 of f_c1; "
            "the basins are not analytically conjugate"
        )


def conjugacy_report(p: int, d: int, c1, c2, T: int = 48, m: int | None = None) -> ConjugacyReport:
    """Evidence that the basins of infinity of f_{c1} and f_{c2} are not conjugate.

    Requires v_p(c1) >= 0, c2 in regime A or B, and
    v_p(c1^(d-1) - c2^(d-1)) = v_p(c2^(d-1)).  For each omega in {+1, -1}
    with omega^(d-1) = 1 the t-series is solved, re-substituted, and its
    valuations compared with the closed form for c = omega^-1 c2 - c1.
    """
    if m is None:
        m = next((x.m for x in (c1, c2) if isinstance(x, EisensteinNumber)), 1)
    c1, c2 = as_eisenstein(c1, p, m), as_eisenstein(c2, p, m)
    if c1.valuation() < 0:
        raise HypothesisError(f"v_p(c1) = {c1.valuation()} < 0: f_c1 lacks good reduction")
    cond2 = classify_condition(p, d, c2, m)
    if cond2.tag is None:
        raise HypothesisError(f"c2 satisfies neither regime: {cond2.reason}")
    lhs = (c1 ** (d - 1) - c2 ** (d - 1)).valuation()
    rhs = (c2 ** (d - 1)).valuation()
    if lhs != rhs:
        raise HypothesisError(
            f"v_p(c1^(d-1) - c2^(d-1)) = {lhs} differs from v_p(c2^(d-1)) = {rhs}"
        )
    results = []
    for omega in (1, -1):
        if omega ** (d - 1) != 1:
            continue
        table = solve_t(p, d, c1, c2, omega, T, m)
        params = classify(table.params)
        if params.tag is None:
            raise HypothesisError(
                f"c = omega^-1 c2 - c1 = {params.c} satisfies neither regime: "
                + params.condition.reason
            )
        table = replace(table, params=params)
        order = residual_check(table)
        profile = verify_profile(table)
        rep = radius_report(params)
        results.append(
            OmegaResult(
                omega=omega,
                c=params.c,
                tag=params.tag,
                N=params.N,
                vc1_ge_vc=c1.valuation() >= params.c.valuation(),
                verified_order=order,
                profile=profile,
                disk_log=rep.varphi_disk_log,
            )
        )
    return ConjugacyReport(p, d, c1, c2, T, lhs, rhs, cond2, tuple(results))
