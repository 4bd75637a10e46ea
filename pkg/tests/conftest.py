from fractions import Fraction

import pytest

from boettcher import EisensteinNumber, classify, make_params

PI3 = EisensteinNumber.pi_power(3, 2, 2)

# (p, d, c, m)
GRID = [
    (2, 4, 8, 1),
    (2, 4, 2, 1),
    (3, 9, 81, 1),
    (2, 2, PI3, 2),
    (2, 2, 1, 1),
]
GRID_IDS = ["p2d4c8", "p2d4c2", "p3d9c81", "p2d2pi3", "p2d2c1"]


def grid_params():
    return [classify(make_params(p, d, c, m)) for p, d, c, m in GRID]


@pytest.fixture(params=range(len(GRID)), ids=GRID_IDS)
def gparams(request):
    p, d, c, m = GRID[request.param]
    return classify(make_params(p, d, c, m))


# -- plain Fraction polynomials, independent of boettcher.series -------------


def pmul(a, b, T):
    out = [Fraction(0)] * (T + 1)
    for i, x in enumerate(a[: T + 1]):
        if x:
            for j, y in enumerate(b[: T + 1 - i]):
                out[i + j] += x * y
    return out


def ppow(a, k, T):
    out = [Fraction(1)] + [Fraction(0)] * T
    for _ in range(k):
        out = pmul(out, a, T)
    return out


def pcompose(outer, inner, T):
    """outer(inner(x)) with inner(0) = 0, by summing powers."""
    out = [Fraction(0)] * (T + 1)
    power = [Fraction(1)] + [Fraction(0)] * T
    for k, ck in enumerate(outer[: T + 1]):
        if k:
            power = pmul(power, inner, T)
        for n in range(T + 1):
            out[n] += ck * power[n]
    return out


def pinv_unit(a, T):
    out = [Fraction(1)] + [Fraction(0)] * T
    for n in range(1, T + 1):
        out[n] = -sum(a[k] * out[n - k] for k in range(1, n + 1) if k < len(a))
    return out


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
