"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch, 2 parameter / hypothesis /
domain error, 3 resource cap exceeded.  Data goes to stdout, diagnostics to
stderr; output is assembled completely before anything is written.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .analysis import (
    PARTITION_INEQUALITY_LIMIT,
    check_dominance,
    check_partition_inequality,
    classify,
    classify_condition,
    conjecture_params,
    conjugacy_report,
    predicted_vp,
    radius_report,
    verify_profile,
)
from .errors import BoettcherError, IntegrityError, ResourceError
from .padic import (
    EisensteinNumber,
    check_canonical_factorial,
    check_digit_exchange,
    check_factorial_divisibility,
    legendre_factorial_valuation,
    prime_power_exponent,
    rational_str,
    valuation_str,
    vp_int,
)
from .solver import make_params, solve, solve_a, solve_t

MAX_TERMS = 256

EXIT_OK, EXIT_MISMATCH, EXIT_PARAM, EXIT_RESOURCE = 0, 1, 2, 3

SERIES_CHOICES = ("a", "b", "t", "a-inv", "b-inv")

LEMMAS = (
    "factorial-divisibility",
    "digit-exchange",
    "canonical-factorial",
    "legendre",
    "partition-inequality",
    "dominance",
)


class UsageError(BoettcherError):
    pass


def _scalar(num, den, pi_exp, ram, p) -> EisensteinNumber:
    if den == 0:
        raise UsageError("denominator must be nonzero")
    if ram < 1:
        raise UsageError("--ram must be >= 1")
    return EisensteinNumber.pi_power(pi_exp, p, ram) * Fraction(num, den)


def _c_json(num, den, pi_exp, ram) -> dict:
    q = Fraction(num, den)
    return {"num": q.numerator, "den": q.denominator, "pi_exp": pi_exp, "ram": ram}


def _check_terms(args):
    if args.terms < 0:
        raise UsageError("--terms must be >= 0")
    if args.terms > MAX_TERMS:
        raise ResourceError(f"--terms {args.terms} exceeds the cap of {MAX_TERMS}")


def _params_from(args):
    if args.c_num is None:
        raise UsageError("--c-num is required")
    c = _scalar(args.c_num, args.c_den, args.c_pi_exp, args.ram, args.p)
    return make_params(args.p, args.d, c, args.ram)


def _pair_from(args):
    if args.c1_num is None or args.c2_num is None:
        raise UsageError("--c1-num and --c2-num are required")
    c1 = _scalar(args.c1_num, args.c1_den, args.c1_pi_exp, args.ram, args.p)
    c2 = _scalar(args.c2_num, args.c2_den, args.c2_pi_exp, args.ram, args.p)
    return c1, c2


def _table_for(args):
    kind = args.series.replace("-", "_")
    if kind == "t":
        c1, c2 = _pair_from(args)
        return solve_t(args.p, args.d, c1, c2, args.omega, args.terms, args.ram)
    return solve(_params_from(args), kind, args.terms)


def _params_json(args) -> dict:
    out = {"p": args.p, "d": args.d}
    if getattr(args, "series", None) == "t":
        out["c1"] = _c_json(args.c1_num, args.c1_den, args.c1_pi_exp, args.ram)
        out["c2"] = _c_json(args.c2_num, args.c2_den, args.c2_pi_exp, args.ram)
        out["omega"] = args.omega
    else:
        out["c"] = _c_json(args.c_num, args.c_den, args.c_pi_exp, args.ram)
    return out


def _coeff_csv(x: EisensteinNumber) -> str:
    if x.m == 1:
        return rational_str(x.coeffs[0])
    return ";".join(rational_str(a) for a in x.coeffs)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_coeffs(args):
    _check_terms(args)
    table = _table_for(args)
    entries = [(n, table[n]) for n in range(1, table.T + 1)]
    if args.format == "json":
        params = _params_json(args)
        params.update(series=args.series, terms=args.terms)
        doc = {
            "params": params,
            "entries": [
                {"n": n, "coeff": x.to_json(), "valuation": valuation_str(x.valuation())}
                for n, x in entries
            ],
        }
        return _json(doc), EXIT_OK
    rows = [(n, _coeff_csv(x), valuation_str(x.valuation())) for n, x in entries]
    return _csv(("n", "coeff", "valuation"), rows), EXIT_OK


def cmd_predict(args):
    _check_terms(args)
    params = classify(_params_from(args))
    rows = [(n, predicted_vp(n, params)) for n in range(1, args.terms + 1)]
    if args.format == "json":
        doc = {
            "params": _params_json(args),
            "condition": _condition_json(params.condition),
            "entries": [{"n": n, "predicted": rational_str(v)} for n, v in rows],
        }
        return _json(doc), EXIT_OK
    return _csv(("n", "predicted_v"), [(n, rational_str(v)) for n, v in rows]), EXIT_OK


def cmd_verify(args):
    _check_terms(args)
    if args.series not in ("a", "b", "t"):
        raise UsageError("verify supports --series a, b or t")
    table = _table_for(args)
    if args.perturb is not None:
        if not 1 <= args.perturb <= table.T:
            raise UsageError("--perturb index outside 1..terms")
        # scaling by p shifts the valuation by exactly 1; a zero entry becomes 1
        x = table[args.perturb]
        table = table.with_entry(args.perturb, x * args.p if x else 1)
    profile = verify_profile(table)
    code = EXIT_OK if profile.all_match else EXIT_MISMATCH
    if code:
        print(f"valuation mismatch at n = {profile.mismatches()}", file=sys.stderr)
    entries = [
        (e.n, valuation_str(e.actual), valuation_str(e.predicted), str(e.match).lower())
        for e in profile.entries
    ]
    if args.format == "json":
        doc = {
            "params": _params_json(args) | {"series": args.series, "terms": args.terms},
            "condition": _condition_json(profile.params.condition),
            "all_match": profile.all_match,
            "mismatches": profile.mismatches(),
            "entries": [
                {"n": n, "actual_v": a, "predicted_v": pr, "match": mt == "true"}
                for n, a, pr, mt in entries
            ],
        }
        return _json(doc), code
    return _csv(("n", "actual_v", "predicted_v", "match"), entries), code


def _condition_json(cond) -> dict:
    return {
        "tag": cond.tag,
        "N": cond.N,
        "vpc": rational_str(cond.vpc),
        "lower_bound": None if cond.lower_bound is None else rational_str(cond.lower_bound),
        "upper_bound": None if cond.upper_bound is None else rational_str(cond.upper_bound),
    }


_RADIUS_FIELDS = (
    "slope",
    "r_N_log",
    "phi_disk_log",
    "phi_inv_disk_log",
    "varphi_disk_log",
    "varphi_inv_disk_log",
)


def _radius_doc(rep, approx: bool) -> dict:
    doc = {"p": rep.p, "d": rep.d, "tag": rep.tag, "N": rep.N}
    for name in _RADIUS_FIELDS:
        doc[name] = rational_str(getattr(rep, name))
    doc["inv_radius_log_p"] = rational_str(rep.phi_inv_disk_log)
    if rep.conjecture_r is not None:
        doc["r"] = rep.conjecture_r
        doc["expected_N"] = rep.conjecture_N
        doc["expected_inv_radius_log_p"] = rational_str(rep.conjecture_exponent)
        doc["conjecture_holds"] = rep.conjecture_holds
    if approx:
        # display only; never used in comparisons
        doc["approx"] = {
            name: float(getattr(rep, name)) for name in _RADIUS_FIELDS
        }
    return doc


def cmd_radius(args):
    if args.conjecture:
        if args.r is None:
            raise UsageError("--conjecture needs --r")
        if args.r < 0:
            raise UsageError("--r must be >= 0")
        rep = radius_report(conjecture_params(args.p, args.r), conjecture_r=args.r)
        doc = _radius_doc(rep, args.approx)
        return _json(doc), EXIT_OK if rep.conjecture_holds else EXIT_MISMATCH
    if args.d is None:
        raise UsageError("--d is required without --conjecture")
    rep = radius_report(_params_from(args))
    return _json(_radius_doc(rep, args.approx)), EXIT_OK


def cmd_conjecture(args):
    if args.r_max < 0:
        raise UsageError("--r-max must be >= 0")
    rows = []
    for r in range(args.r_max + 1):
        rep = radius_report(conjecture_params(args.p, r), conjecture_r=r)
        rows.append(
            (r, rep.N, rep.conjecture_N, rational_str(rep.phi_inv_disk_log),
             rational_str(rep.conjecture_exponent), str(rep.conjecture_holds).lower())
        )
    code = EXIT_OK if all(row[-1] == "true" for row in rows) else EXIT_MISMATCH
    header = ("r", "N", "expected_N", "inv_radius_log_p", "expected_inv_radius_log_p", "match")
    if args.format == "json":
        return _json({"p": args.p, "rows": [dict(zip(header, row)) for row in rows]}), code
    return _csv(header, rows), code


def cmd_conjugacy(args):
    _check_terms(args)
    c1, c2 = _pair_from(args)
    rep = conjugacy_report(args.p, args.d, c1, c2, args.terms, args.ram)
    doc = {
        "params": {
            "p": args.p,
            "d": args.d,
            "c1": _c_json(args.c1_num, args.c1_den, args.c1_pi_exp, args.ram),
            "c2": _c_json(args.c2_num, args.c2_den, args.c2_pi_exp, args.ram),
            "terms": args.terms,
        },
        "separation_holds": rep.separation_holds,
        "separation": {
            "v_difference": valuation_str(rep.separation_lhs),
            "v_c2_power": valuation_str(rep.separation_rhs),
        },
        "c2_condition": _condition_json(rep.condition_c2),
        "omegas": [
            {
                "omega": r.omega,
                "c": r.c.to_json(),
                "tag": r.tag,
                "N": r.N,
                "vc1_ge_vc": r.vc1_ge_vc,
                "verified_order": r.verified_order,
                "profile_match": r.all_match,
                "mismatches": r.profile.mismatches(),
                "disk_log_p": rational_str(r.disk_log),
                "strictly_inside_unit_basin": r.strictly_inside_unit_basin,
            }
            for r in rep.results
        ],
        "verified": rep.verified,
        "conclusion": rep.conclusion,
    }
    return _json(doc), EXIT_OK if rep.verified else EXIT_MISMATCH


def _lemma_d_values(args, default):
    if args.d is None:
        return default
    return (args.d,)


def _prime_of(d: int) -> int:
    q = 2
    while d % q:
        q += 1
    return q


def _run_lemma(name, args):
    """Yield one boolean per checked instance."""
    max_n = args.max_n
    if name == "factorial-divisibility":
        top = 4 if max_n is None else max_n
        ds = _lemma_d_values(args, range(1, 7))
        for d in ds:
            for k in range(1, 7):
                for nk in range(0, top + 1):
                    yield check_factorial_divisibility(d, k, nk)
    elif name == "digit-exchange":
        top = 100 if max_n is None else max_n
        for d in _lemma_d_values(args, (2, 4, 8, 9)):
            p = _prime_of(d)
            if prime_power_exponent(p, d) is None:
                raise UsageError(f"d = {d} is not a prime power")
            for n in range(0, top + 1):
                n1, n0 = divmod(n, d)
                for m1 in range(n // d + 1):
                    yield check_digit_exchange(p, d, n0, n1, n - m1 * d, m1)
    elif name == "canonical-factorial":
        top = 2000 if max_n is None else max_n
        cases = ((2, 2, 3), (2, 4, 2), (3, 9, 2))
        if args.d is not None:
            p = _prime_of(args.d)
            if prime_power_exponent(p, args.d) is None:
                raise UsageError(f"d = {args.d} is not a prime power")
            cases = ((p, args.d, 2),)
        for p, d, N in cases:
            for n in range(1, top + 1):
                yield check_canonical_factorial(p, d, N, n)
    elif name == "legendre":
        top = 500 if max_n is None else max_n
        for p in (2, 3, 5, 7):
            fact = 1
            for n in range(0, top + 1):
                if n:
                    fact *= n
                yield legendre_factorial_valuation(p, n) == vp_int(p, fact)
    elif name == "partition-inequality":
        top = PARTITION_INEQUALITY_LIMIT if max_n is None else min(max_n, PARTITION_INEQUALITY_LIMIT)
        for params in _grid():
            for n in range(1, top + 1):
                yield check_partition_inequality(params, n)
    elif name == "dominance":
        top = 64 if max_n is None else max_n
        if top > MAX_TERMS:
            raise ResourceError(f"--max-n {top} exceeds the cap of {MAX_TERMS}")
        for params in _grid():
            table = solve_a(params, top)
            for n in range(1, top + 1):
                yield check_dominance(table, params, n)


def _grid():
    pi3 = EisensteinNumber.pi_power(3, 2, 2)
    for p, d, c, m in ((2, 4, 8, 1), (2, 4, 2, 1), (3, 9, 81, 1), (2, 2, pi3, 2), (2, 2, 1, 1)):
        yield classify(make_params(p, d, c, m))


def cmd_lemmas(args):
    if args.max_n is not None and args.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    names = LEMMAS if args.lemma == "all" else (args.lemma,)
    rows = []
    for name in names:
        results = list(_run_lemma(name, args))
        passed = sum(results)
        rows.append((name, len(results), passed, len(results) - passed))
    code = EXIT_OK if all(row[3] == 0 for row in rows) else EXIT_MISMATCH
    header = ("lemma", "checked", "passed", "failed")
    if args.format == "json":
        return _json({"results": [dict(zip(header, row)) for row in rows]}), code
    return _csv(header, rows), code


def cmd_scan(args):
    _check_terms(args)
    if args.c_min > args.c_max:
        raise UsageError("--c-min must not exceed --c-max")
    rows = []
    code = EXIT_OK
    for num in range(args.c_min, args.c_max + 1):
        if num == 0:
            continue
        c = _scalar(num, args.c_den, args.c_pi_exp, args.ram, args.p)
        cond = classify_condition(args.p, args.d, c, args.ram)
        row = [rational_str(Fraction(num, args.c_den)), rational_str(cond.vpc), cond.tag or "None",
               "" if cond.N is None else cond.N, "", "", "", ""]
        if cond.tag is not None:
            params = classify(make_params(args.p, args.d, c, args.ram))
            rep = radius_report(params)
            row[4], row[5] = rational_str(rep.slope), rational_str(rep.r_N_log)
            if args.terms:
                ok_a = verify_profile(solve(params, "a", args.terms)).all_match
                ok_b = verify_profile(solve(params, "b", args.terms)).all_match
                row[6], row[7] = str(ok_a).lower(), str(ok_b).lower()
                if not (ok_a and ok_b):
                    code = EXIT_MISMATCH
        rows.append(row)
    header = ("c", "vpc", "tag", "N", "slope", "r_N_log", "match_a", "match_b")
    if args.format == "json":
        return _json({"p": args.p, "d": args.d, "rows": [dict(zip(header, r)) for r in rows]}), code
    return _csv(header, rows), code


def _add_c_flags(sp, prefix="c", required=False):
    sp.add_argument(f"--{prefix}-num", type=int, default=None, required=required)
    sp.add_argument(f"--{prefix}-den", type=int, default=1)
    sp.add_argument(f"--{prefix}-pi-exp", type=int, default=0,
                    help="multiply by pi^J in the ramified field")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boettcher",
        description="Exact Boettcher-coordinate coefficients and p-adic valuation checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name, help_, fmt="csv", need_d=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--d", type=int, required=need_d, default=None)
        sp.add_argument("--ram", type=int, default=1, help="ramification index m of Q[pi]/(pi^m - p)")
        sp.add_argument("--format", choices=("csv", "json"), default=fmt)
        return sp

    sp = common("coeffs", "print a coefficient table")
    _add_c_flags(sp)
    _add_c_flags(sp, "c1")
    _add_c_flags(sp, "c2")
    sp.add_argument("--omega", type=int, default=1, choices=(1, -1))
    sp.add_argument("--series", choices=SERIES_CHOICES, default="a")
    sp.add_argument("--terms", type=int, default=64)
    sp.set_defaults(func=cmd_coeffs)

    sp = common("predict", "closed-form valuations")
    _add_c_flags(sp)
    sp.add_argument("--terms", type=int, default=64)
    sp.set_defaults(func=cmd_predict)

    sp = common("verify", "compare computed and predicted valuations")
    _add_c_flags(sp)
    _add_c_flags(sp, "c1")
    _add_c_flags(sp, "c2")
    sp.add_argument("--omega", type=int, default=1, choices=(1, -1))
    sp.add_argument("--series", choices=SERIES_CHOICES, default="a")
    sp.add_argument("--terms", type=int, default=64)
    sp.add_argument("--perturb", type=int, default=None,
                    help="multiply entry N by p before verifying (fault injection)")
    sp.set_defaults(func=cmd_verify)

    sp = common("radius", "exact convergence radii", fmt="json", need_d=False)
    _add_c_flags(sp)
    sp.add_argument("--conjecture", action="store_true",
                    help="use d = p^2, c = p^(r+2) and compare with -p^(-r)/(p-1)")
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--approx", action="store_true", help="add decimal renderings (display only)")
    sp.set_defaults(func=cmd_radius)

    sp = common("conjecture", "radius exponents for d = p^2, c = p^(r+2), r = 0..R", need_d=False)
    sp.add_argument("--r-max", type=int, default=4)
    sp.set_defaults(func=cmd_conjecture)

    sp = common("conjugacy", "evidence that two basins of infinity are not conjugate", fmt="json")
    _add_c_flags(sp, "c1", required=True)
    _add_c_flags(sp, "c2", required=True)
    sp.add_argument("--terms", type=int, default=48)
    sp.set_defaults(func=cmd_conjugacy)

    sp = sub.add_parser("lemmas", help="bounded exhaustive checks of the supporting inequalities")
    sp.add_argument("--lemma", choices=LEMMAS + ("all",), default="all")
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--max-n", type=int, default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_lemmas)

    sp = common("scan", "classify and verify a range of integer c")
    sp.add_argument("--c-min", type=int, required=True)
    sp.add_argument("--c-max", type=int, required=True)
    sp.add_argument("--c-den", type=int, default=1)
    sp.add_argument("--c-pi-exp", type=int, default=0)
    sp.add_argument("--terms", type=int, default=0, help="also verify profiles to this order")
    sp.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except IntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (BoettcherError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
