from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pimeasure.exactkernel import (
    NEG_INF,
    GaussInt,
    GaussRational,
    InexactDivisionError,
    PoleError,
    Poly,
    TruncSeries,
    float_context,
    frac_str,
    intpoly_mul,
    intpoly_pow,
    is_prime,
    padic_order,
    series_binomial_recip,
    series_poly_power,
    taylor_shift,
    to_big,
)

small_ints = st.integers(min_value=-10**12, max_value=10**12)
nonzero = small_ints.filter(lambda x: x != 0)
rationals = st.builds(Fraction, small_ints, nonzero)
nonzero_rationals = st.builds(Fraction, nonzero, nonzero)


def test_rational_normalization():
    assert Fraction(2, 4) + 0 == Fraction(1, 2)
    r = Fraction(6, -4)
    assert (r.numerator, r.denominator) == (-3, 2)


@given(rationals)
def test_normalization_idempotent(r):
    once = Fraction(r.numerator, r.denominator)
    assert Fraction(once.numerator, once.denominator) == once
    assert once.denominator > 0


def test_gauss_basics():
    assert GaussInt(1, 1) ** 2 == GaussInt(0, 2)
    assert GaussInt(3, 4).norm() == 25
    assert GaussInt(2, -1).conj() == GaussInt(2, 1)
    q = GaussRational.of(GaussInt(1, 0)) / GaussInt(1, 1)
    assert q == GaussRational.make(1, -1, 2)
    assert q.den == 2
    assert str(GaussRational.make(4, 2, 4)) == "(2+1i)/2"


@given(small_ints, small_ints, small_ints, small_ints)
def test_gauss_division_roundtrip(a, b, c, d):
    x, y = GaussInt(a, b), GaussInt(c, d)
    if not y:
        return
    q = GaussRational.of(x) / y
    assert q * y == GaussRational.of(x)
    assert q.den > 0


def test_poly_shift_examples():
    p = Poly([0, 0, 1])
    assert p.shift_basis(5) == Poly([25, -10, 1], 5)
    w = Poly([25, 0, 6, 0, 1])
    assert w ** 1 == w
    assert Poly([-25, 0, 1]).exact_div(Poly([-5, 1])) == Poly([5, 1])
    with pytest.raises(InexactDivisionError):
        Poly([1, 0, 1]).exact_div(Poly([-5, 1]))


def test_zero_poly_sentinel():
    z = Poly([])
    assert z.degree == NEG_INF
    assert (z * Poly([1, 2])).degree == NEG_INF
    assert Poly([0, 0, 0]).degree == NEG_INF


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=201), st.integers(-9, 9))
def test_shift_basis_round_trip(coeffs, shift):
    p = Poly(coeffs)
    assert p.shift_basis(shift).shift_basis(0) == p


def test_shift_basis_round_trip_gaussian_degree_200():
    p = Poly([(-1) ** k * (k * k + 3) for k in range(201)])
    g = p.shift_basis(GaussInt(1, 2))
    assert g.shift_basis(0) == p


def test_taylor_shift_matches_binomial_expansion():
    coeffs = [3, -2, 0, 7]
    shifted = taylor_shift(coeffs, 2)
    # p(y - 2) re-expanded must give back the original coefficients
    back = [0] * 4
    for k, c in enumerate(shifted):
        for i in range(k + 1):
            back[i] += c * comb(k, i) * (-2) ** (k - i)
    assert back == coeffs


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=60),
    st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=60),
)
def test_kronecker_matches_schoolbook(a, b):
    expected = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            expected[i + j] += x * y
    got = intpoly_mul(a, b)
    got += [0] * (len(expected) - len(got))
    assert got[: len(expected)] == expected


def test_intpoly_pow_against_repeated_product():
    f = [25, 0, 6, 0, 1]
    acc = [1]
    for _ in range(7):
        acc = intpoly_mul(acc, f)
    assert intpoly_pow(f, 7) == acc
    assert intpoly_pow(f, 7, trunc=10) == acc[:10]


def test_series_examples():
    assert list(series_binomial_recip(10, 1, 3).coeffs) == [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]
    assert list(series_binomial_recip(10, 2, 2).coeffs) == [Fraction(1, 100), Fraction(2, 1000)]
    assert list(series_binomial_recip(1, 3, 3).coeffs) == [1, 3, 6]
    with pytest.raises(PoleError):
        series_binomial_recip(0, 2, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(-20, 20).filter(bool), st.integers(1, 12), st.integers(1, 25))
def test_series_inverse_identity(c, m, order):
    inv = series_binomial_recip(c, m, order)
    base = series_poly_power([c, -1], m, order)
    prod = inv * base
    assert prod == TruncSeries.from_coeffs([1], order)


def test_padic_examples():
    assert padic_order(12, 2) == 2
    assert padic_order(Fraction(3, 8), 2) == -3
    assert padic_order(comb(6, 3), 5) == 1
    assert padic_order(0, 7) == float("inf")
    with pytest.raises(ValueError):
        padic_order(12, 4)


@given(nonzero_rationals, nonzero_rationals, st.sampled_from([2, 3, 5, 7, 97]))
def test_padic_additive(x, y, p):
    assert padic_order(x * y, p) == padic_order(x, p) + padic_order(y, p)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)


def test_float_context_is_private():
    a = float_context(20)
    b = float_context(80)
    assert a.dps == 20 and b.dps == 80
    assert abs(to_big(b, Fraction(1, 3)) * 3 - 1) < b.mpf(10) ** -78


def test_frac_str_beyond_default_digit_limit():
    big = 10**6000 + 1
    s = frac_str(Fraction(big, 3))
    assert s.endswith("/3") and len(s) == 6003
