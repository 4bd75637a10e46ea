import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boettcher.errors import DivergenceError, DomainError, ParameterError, ResourceError
from boettcher.padic import INF, EisensteinNumber
from boettcher.series import (
    TruncatedSeries,
    compose_normalized,
    dth_root,
    evaluate_series,
    int_pow,
    is_identity_tail,
    lagrange_invert,
    lagrange_invert_enumerated,
    partitions,
    reindex_power,
    series_mul,
    substitute,
    unit_reciprocal,
)

from conftest import pcompose, pmul


def S(coeffs, T=None, p=2, m=1):
    return TruncatedSeries(coeffs, T, p, m)


def rand_series(rng, T, p=2, unit=False):
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(T + 1)]
    if unit:
        coeffs[0] = Fraction(1)
    return S(coeffs, T, p)


def rational_coeffs(s):
    return [c.rational() for c in s.coeffs]


# -- ring operations ----------------------------------------------------------


def test_mul_examples():
    assert series_mul(S([1]), S([1])) == S([1])
    assert series_mul(S([1, 1], 2), S([1, 1], 2)) == S([1, 2, 1])
    prod = series_mul(S([1, 1]), S([1, 1]))
    assert prod.trunc == 1
    assert prod == S([1, 2])


def test_truncation_is_min_combined():
    a, b = S([1, 1], 5), S([1, 1], 3)
    assert (a * b).trunc == 3
    assert (a + b).trunc == 3
    assert (a - b).trunc == 3


def test_field_mismatch():
    with pytest.raises(ParameterError):
        S([1], 2, p=2) * S([1], 2, p=3)
    with pytest.raises(ParameterError):
        S([1], 2, p=2, m=1) + S([1], 2, p=2, m=2)


def test_series_immutable():
    s = S([1, 1])
    with pytest.raises(AttributeError):
        s.coeffs = ()


def test_ring_axioms_random():
    rng = random.Random(1)
    for _ in range(1000):
        T = rng.randint(0, 6)
        a, b, c = (rand_series(rng, T) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a + b) - b == a


def test_mul_matches_plain_oracle():
    rng = random.Random(2)
    for _ in range(100):
        T = rng.randint(0, 8)
        a, b = rand_series(rng, T), rand_series(rng, T)
        assert rational_coeffs(a * b) == pmul(rational_coeffs(a), rational_coeffs(b), T)


# -- reciprocal, powers, roots ------------------------------------------------


def test_reciprocal_examples():
    assert unit_reciprocal(S([1], 4)) == S([1], 4)
    assert unit_reciprocal(S([1, 1], 5)) == S([1, -1, 1, -1, 1, -1])


def test_reciprocal_of_cube():
    c = Fraction(3, 2)
    T = 10
    cube = int_pow(S([1, -c], T), 3)
    recip = unit_reciprocal(cube)
    assert rational_coeffs(recip) == [comb(n + 2, 2) * c**n for n in range(T + 1)]
    assert series_mul(cube, recip) == S([1], T)


def test_reciprocal_needs_unit():
    with pytest.raises(DomainError):
        unit_reciprocal(S([2, 1]))
    with pytest.raises(DomainError):
        unit_reciprocal(S([0, 1]))


def test_reciprocal_identity_random():
    rng = random.Random(3)
    for _ in range(200):
        a = rand_series(rng, rng.randint(0, 10), unit=True)
        assert a * unit_reciprocal(a) == S([1], a.trunc)


def test_int_pow_examples():
    assert int_pow(S([1, 1], 3), 0) == S([1], 3)
    assert int_pow(S([1, 1], 2), 2) == S([1, 2, 1])
    assert int_pow(S([1, Fraction(1, 2), Fraction(-1, 8)]), 2) == S([1, 1], 2)
    with pytest.raises(ParameterError):
        int_pow(S([1, 1]), -1)


def test_dth_root_examples():
    assert dth_root(S([1], 5), 3) == S([1], 5)
    assert dth_root(S([1, 1], 2), 2) == S([1, Fraction(1, 2), Fraction(-1, 8)])
    assert dth_root(S([1, 3], 2), 3) == S([1, 1, -1])


def test_dth_root_needs_unit():
    with pytest.raises(DomainError):
        dth_root(S([4, 1]), 2)


@pytest.mark.parametrize("d", [2, 3, 4, 9])
def test_dth_root_round_trip(d):
    rng = random.Random(d)
    for _ in range(100):
        s = rand_series(rng, rng.randint(0, 8), unit=True)
        root = dth_root(s, d)
        assert root[0] == 1
        assert int_pow(root, d) == s


def test_dth_root_binomial_series():
    # (1 + c x)^(1/d) = sum binom(1/d, n) c^n x^n
    d, c, T = 3, Fraction(5, 2), 8

    def binom(top, n):
        out = Fraction(1)
        for j in range(n):
            out = out * (top - j) / (j + 1)
        return out

    root = dth_root(S([1, c], T), d)
    assert rational_coeffs(root) == [binom(Fraction(1, d), n) * c**n for n in range(T + 1)]


def test_dth_root_over_ramified_field():
    pi = EisensteinNumber.pi_power(1, 2, 2)
    s = S([1, pi * 3, 1], 6, p=2, m=2)
    assert int_pow(dth_root(s, 4), 4) == s


# -- reindex and substitution -------------------------------------------------


def test_reindex_examples():
    assert reindex_power(S([1, 1], 2), 2) == S([1, 0, 1])
    assert reindex_power(S([1], 6), 4) == S([1], 6)
    assert reindex_power(S([1, 1, 1], 7), 3) == S([1, 0, 0, 1, 0, 0, 1, 0])


def test_substitute_matches_plain_oracle():
    rng = random.Random(5)
    for _ in range(50):
        T = rng.randint(1, 7)
        outer = rand_series(rng, T)
        inner = rand_series(rng, T)
        inner = S([0] + rational_coeffs(inner)[1:], T)
        expected = pcompose(rational_coeffs(outer), rational_coeffs(inner), T)
        assert rational_coeffs(substitute(outer, inner)) == expected


def test_substitute_rejects_constant_term():
    with pytest.raises(DomainError):
        substitute(S([1, 1]), S([1, 1]))


# -- partitions and Lagrange inversion ----------------------------------------


def test_partition_counts():
    counts = [sum(1 for _ in partitions(n)) for n in range(12)]
    assert counts == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]
    for n in range(1, 10):
        for part in partitions(n):
            assert sum(k * mk for k, mk in part.items()) == n


def test_lagrange_catalan():
    beta = lagrange_invert(TruncatedSeries.unit([1, 0, 0, 0, 0, 0, 0], 2), 2)
    assert rational_coeffs(beta)[1:] == [-1, -1, -2, -5, -14, -42, -132]


def test_lagrange_zero_tail():
    assert is_identity_tail(lagrange_invert(S([1], 8), 3))


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6), st.integers(-5, 9).filter(bool))
def test_lagrange_first_coefficient(tail, d):
    beta = lagrange_invert(TruncatedSeries.unit(tail, 2), d)
    assert beta[1] == -tail[0]


def test_lagrange_grouped_matches_enumerated():
    rng = random.Random(6)
    for d in (2, 3, 4, -1):
        for _ in range(3):
            alpha = rand_series(rng, 16, unit=True)
            assert lagrange_invert(alpha, d) == lagrange_invert_enumerated(alpha, d)


def test_lagrange_enumerated_cap():
    with pytest.raises(ResourceError):
        lagrange_invert_enumerated(S([1], 30), 2)


def test_lagrange_rejects_zero_degree():
    with pytest.raises(ParameterError):
        lagrange_invert(S([1, 1]), 0)


# -- composition --------------------------------------------------------------


def test_compose_identity():
    one = S([1], 6)
    assert is_identity_tail(compose_normalized(one, one, 2))


def test_compose_first_order():
    F = S([1, Fraction(2, 3), 5], 4)
    G = S([1, Fraction(-7, 2), 1], 4)
    assert compose_normalized(F, G, 3)[1] == Fraction(2, 3) + Fraction(-7, 2)


def test_compose_chebyshev_round_trip():
    F = TruncatedSeries.unit([1] + [0] * 11, 2)
    G = lagrange_invert(F, 2)
    assert is_identity_tail(compose_normalized(F, G, 2))
    assert is_identity_tail(compose_normalized(G, F, 2))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_compose_inverse_round_trip_random(d):
    rng = random.Random(100 + d)
    for _ in range(50):
        F = rand_series(rng, rng.randint(1, 10), unit=True)
        G = lagrange_invert(F, d)
        assert is_identity_tail(compose_normalized(F, G, d))
        assert is_identity_tail(compose_normalized(G, F, d))


# -- evaluation ---------------------------------------------------------------


def test_evaluate_simple():
    pi = EisensteinNumber.pi_power(1, 2, 2)
    value, bound = evaluate_series(S([1, 1], p=2, m=2), pi, 0)
    assert value == EisensteinNumber([1, 1], 2, 2)
    assert bound == 2 * Fraction(1, 2)


def test_evaluate_bound_arithmetic():
    pi = EisensteinNumber.pi_power(3, 2, 2)
    s = S([1] * 9, p=2, m=2)
    _, bound = evaluate_series(s, pi, Fraction(-1, 2))
    assert bound == (s.trunc + 1) * 1


def test_evaluate_at_zero():
    value, bound = evaluate_series(S([3, 1, 1]), 0, -5)
    assert value == 3
    assert bound == INF


def test_evaluate_outside_disk():
    with pytest.raises(DivergenceError):
        evaluate_series(S([1, 1]), 2, -1)
    with pytest.raises(DivergenceError):
        evaluate_series(S([1, 1]), Fraction(1, 2), 0)


def test_evaluate_unit_keeps_valuation():
    rng = random.Random(9)
    for _ in range(50):
        # integral unit series, so slope 0 is a valid bound
        s = S([1] + [rng.randint(-20, 20) for _ in range(6)])
        x = 2 ** rng.randint(1, 4) * rng.choice([1, 3, 5, 7])
        value, _ = evaluate_series(s, x, 0)
        assert (value * x).valuation() == EisensteinNumber.from_rational(x, 2).valuation()
