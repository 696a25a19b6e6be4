from fractions import Fraction

import mpmath
import pytest

from pimeasure.asymptotics import contour_integral
from pimeasure.construction import IntegrandParams
from pimeasure.exactkernel import IntegrityError
from pimeasure.linforms import (
    LinearForm,
    NotIntegralError,
    delta_empirical,
    form_from_params,
    linear_form,
    reduce_to_integers,
    scaled_form,
    verify_lemma,
    verify_prop1,
)

from .conftest import classic, classic_table


def test_n0_closed_form():
    f = linear_form(0)
    assert (f.a, f.b) == (0, Fraction(1, 4))


def test_n1_values():
    f = classic(1)
    assert (f.a, f.b) == (Fraction(-11272, 3), 1196)


@pytest.mark.parametrize("n", [1, 5])
def test_against_quadrature(n):
    q = contour_integral(IntegrandParams.classic(n), 64)
    assert abs(q.imag) < mpmath.mpf(10) ** -60
    assert abs(q.real - classic(n).value(80)) < mpmath.mpf(10) ** -50


@pytest.mark.parametrize("n", [1, 2, 3, 8, 13, 20])
def test_three_routes_agree(n):
    f = linear_form(n, ("gauss", "x5", "x"), classic_table(n))
    assert f == classic(n)


def test_route_validation():
    with pytest.raises(ValueError):
        linear_form(2, ("nope",))
    with pytest.raises(ValueError):
        form_from_params(IntegrandParams(3, 4, None))


def test_sign_of_b_follows_a0():
    for n in range(0, 41):
        t = classic_table(n)
        b = classic(n).b
        assert (b * (-1) ** n > 0) == (t[0] > 0)


def test_trivial_bound_and_pi_coefficient():
    ctx = mpmath.MPContext()
    ctx.dps = 60
    for n in range(0, 21):
        f = classic(n)
        val = f.value(60)
        assert abs(val) <= 1
    for n in (3, 9):
        f = classic(n)
        q = contour_integral(IntegrandParams.classic(n), 64)
        b_num = (q.real - ctx.mpf(f.a.numerator) / f.a.denominator) / ctx.pi
        assert abs(b_num - ctx.mpf(f.b.numerator) / f.b.denominator) < ctx.mpf(10) ** -40 * max(1, abs(b_num))


def test_scaled_form_n0():
    s = scaled_form(0)
    assert (s.a_int, s.b_int) == (0, 1)
    assert s.F >= 1


def test_scaled_form_raises_on_falsified_term():
    bad = LinearForm(3, classic(3).a + Fraction(1, 7), classic(3).b)
    with pytest.raises(NotIntegralError):
        scaled_form(3, bad)
    cert = verify_prop1(3, bad)
    assert not cert.passed and cert.counterexample["which"] == "a"


@pytest.mark.parametrize("n", [1, 7, 12])
def test_lemmas_pass(n):
    for lemma in (1, 2, 3, "prop1"):
        assert verify_lemma(lemma, n).passed, lemma


def test_lemma_examples():
    assert verify_lemma(1, 7).passed
    cert = verify_lemma(2, 10)
    assert cert.passed and cert.count > 0
    assert verify_lemma(3, 12).passed
    assert verify_lemma(4, 3).passed
    with pytest.raises(ValueError):
        verify_lemma(9, 3)


def test_lemma4_counterexample_is_reported_not_raised():
    cert = verify_lemma(4, 2)
    assert not cert.passed
    assert cert.counterexample["k"] == 0
    assert cert.counterexample["value"] == "(-2153925-104165i)/2"
    assert "FAIL" in cert.line()


def test_reduce_to_integers():
    p, q, factor = reduce_to_integers(Fraction(-2, 3), Fraction(4, 9))
    assert (p, q) == (-3, 2)
    assert factor * Fraction(4, 9) == 2


@pytest.mark.parametrize("c", [Fraction(7, 3), Fraction(-5), Fraction(1, 10**40)])
def test_delta_scale_invariance(c):
    f = classic(30)
    d0 = delta_empirical(f)
    d1 = delta_empirical(f.scale(c))
    assert d0.q == d1.q
    assert abs(d0.delta - d1.delta) < mpmath.mpf(10) ** -25


def test_delta_undefined_cases():
    assert delta_empirical(Fraction(1), Fraction(0)).delta is None
    assert delta_empirical(Fraction(0), Fraction(1, 4)).delta is None  # q = 1


def test_delta_mu_identity():
    d = delta_empirical(classic(40))
    assert abs(d.mu - (1 + 1 / d.delta)) < mpmath.mpf(10) ** -25


def test_integrity_error_on_route_disagreement(monkeypatch):
    import pimeasure.linforms as lf

    monkeypatch.setattr(lf, "poly_integral_x5", lambda coeffs: Fraction(1))
    with pytest.raises(IntegrityError):
        lf.linear_form(2, ("gauss", "x5"))
