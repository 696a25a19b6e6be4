import math

import mpmath
import pytest

from pimeasure.asymptotics import (
    INDICIAL,
    SADDLE_CUBIC,
    NotSquarefreeError,
    asymptotic_data,
    contour_integral,
    g_function,
    indicial_roots,
    measure_bounds,
    phi_limit,
    poly_roots,
    rates,
    root_certificates,
    saddle_data,
)
from pimeasure.construction import IntegrandParams
from pimeasure.exactkernel import float_context
from pimeasure.linforms import scaled_form

from .conftest import classic


def _digits_match(x, target: str, sig: int) -> bool:
    """``x`` agrees with the decimal string ``target`` to ``sig`` significant digits."""
    ctx = float_context(80)
    t = ctx.mpf(target)
    return abs(ctx.mpf(x) - t) <= abs(t) * ctx.mpf(10) ** (1 - sig) / 2


def test_roots_of_x2_plus_1():
    roots = poly_roots([1, 0, 1], 40)
    assert len(roots) == 2
    assert roots[0] == roots[1].conjugate()
    assert abs(abs(roots[0].imag) - 1) < mpmath.mpf(10) ** -38
    assert roots[0].real == 0


def test_indicial_roots():
    n1, n2, n3 = indicial_roots(64)
    assert n1 == n2.conjugate()
    assert n3.imag == 0
    assert _digits_match(n1.real, "0.02930189", 7)
    assert _digits_match(abs(n1.imag), "0.00303351", 6)
    assert _digits_match(n3.real, "21851.691396", 11)
    assert _digits_match(abs(n1), "0.029458495928", 11)


def test_saddle_cubic_roots():
    y1, y2, y3 = poly_roots(SADDLE_CUBIC, 64)
    assert _digits_match(y3.real, "66.33950152", 10)
    assert _digits_match(y1.real, "-1.91975076", 9)
    assert _digits_match(abs(y1.imag), "1.01250889", 9)


def test_root_certificates():
    roots = indicial_roots(64)
    certs = root_certificates(INDICIAL, roots, 64)
    assert all(c.ok for c in certs)


def test_not_squarefree():
    with pytest.raises(NotSquarefreeError):
        poly_roots([1, -2, 1], 40)
    with pytest.raises(ValueError):
        poly_roots([3], 40)


def test_random_real_polynomial_pairs():
    cs = [7, -3, 0, 11, 2, -5, 1]
    roots = poly_roots(cs, 50)
    nonreal = [z for z in roots if z.imag != 0]
    for z in nonreal:
        assert any(w == z.conjugate() for w in nonreal)


def test_saddle_values_match_indicial_roots():
    ys, gs = saddle_data(64)
    ns = indicial_roots(64)
    for g, n in zip(gs, ns):
        assert abs(g - n) <= mpmath.mpf(10) ** -20 * max(1, abs(n))
    ctx = float_context(64)
    assert abs(g_function(ctx, ys[0].conjugate()) - gs[0].conjugate()) < ctx.mpf(10) ** -50
    assert _digits_match(gs[2].real, "21851.691396", 11)
    assert _digits_match(abs(gs[0]), "0.029458495928", 11)


def test_saddle_needs_precision():
    with pytest.raises(ValueError):
        saddle_data(20)


def test_rates_and_bounds():
    rI, rb = rates(64)
    assert _digits_match(rI, "-1.90291648559998", 14)
    assert _digits_match(rb, "11.613890045331", 14)
    assert _digits_match(phi_limit(64), "0.64527561", 8)
    mu, crude = measure_bounds(64)
    assert _digits_match(mu, "7.10320533413700172750577342281", 30)
    assert _digits_match(crude, "10.747747465671804677", 20)
    assert mpmath.nstr(mu, 13) == "7.103205334137"
    assert abs(mu - (1 + 1 / (-rI / rb))) < mpmath.mpf(10) ** -50
    assert abs(mu - 7.1032) < 1e-4


def test_doubling_precision_keeps_digits():
    d64 = asymptotic_data(64)
    d128 = asymptotic_data(128)
    for name in ("rate_I", "rate_b", "mu_bound", "mu_crude", "phi_limit"):
        a, b = getattr(d64, name), getattr(d128, name)
        assert abs(a - b) <= abs(a) * mpmath.mpf(10) ** -55, name


def test_contour_integral_n0():
    ctx = float_context(64)
    q = contour_integral(IntegrandParams.classic(0), 64)
    assert abs(q - ctx.pi / 4) < ctx.mpf(10) ** -50


def test_contour_integral_matches_mpmath_quad():
    ctx = float_context(40)
    params = IntegrandParams.classic(4)
    s, v = params.s, params.v

    def R(t):
        x = ctx.mpc(-1, t)
        return 5 * x**s * (x**4 + 6 * x**2 + 25) ** s / (25 - x * x) ** v

    ref = -((-1) ** v) * ctx.quad(R, [-2, 0, 2])
    ours = contour_integral(params, 40)
    assert abs(ours - ref) < ctx.mpf(10) ** -30


def test_trivial_bound_on_quadrature():
    for n in (0, 7, 20):
        assert abs(contour_integral(IntegrandParams.classic(n), 40)) <= 1


def test_empirical_rates_at_200():
    rI, rb = rates(40)
    n = 200
    f = classic(n)
    s = scaled_form(n, f)
    scale = mpmath.mpf(s.b_int) / (mpmath.mpf(f.b.numerator) / f.b.denominator)
    assert abs(float(mpmath.log(abs(f.value(60) * scale)) / n) - float(rI)) < 0.1
    assert abs(math.log(abs(s.b_int)) / n - float(rb)) < 0.1


def test_unscaled_rate_windowed():
    # the conjugate pair N_1, N_2 can make single terms dip, so use a window maximum
    n1 = indicial_roots(40)[0]
    best = max(float(mpmath.log(abs(classic(n).value(60))) / n) for n in range(195, 201))
    assert abs(best - float(mpmath.log(abs(n1)))) < 0.05
