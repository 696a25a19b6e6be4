"""Certified roots, saddle-point data, growth rates, measure bounds and quadrature.

All functions take the working precision in decimal digits and build a
private mpmath context, so nothing here touches global precision state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .construction import IntegrandParams
from .exactkernel import IntegrityError, Poly, float_context

log = logging.getLogger(__name__)

GUARD_DIGITS = 20
INDICIAL = (-2048, 138304, -2359989, 108)  # ascending in N
SADDLE_CUBIC = (-625, -500, -125, 2)  # ascending in y


class NotSquarefreeError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    def __init__(self, estimate):
        super().__init__(f"quadrature did not converge (error estimate {estimate})")
        self.estimate = estimate


def _coeff_list(poly) -> list[Fraction]:
    cs = poly.coeffs if isinstance(poly, Poly) else poly
    out = [Fraction(c) for c in cs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        q = a[-1] / b[-1]
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= q * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_gcd_degree(a: Sequence, b: Sequence) -> int:
    """Degree of ``gcd(a, b)`` over Q (Euclid on exact rationals)."""
    a, b = _coeff_list(a), _coeff_list(b)
    while b:
        a, b = b, _rem(a, b)
    return len(a) - 1


def is_squarefree(coeffs: Sequence) -> bool:
    cs = _coeff_list(coeffs)
    deriv = [k * c for k, c in enumerate(cs)][1:]
    return poly_gcd_degree(cs, deriv) == 0


def _horner(ctx, cs, z):
    acc = ctx.mpc(0)
    for c in reversed(cs):
        acc = acc * z + c
    return acc


def _horner_with_deriv(ctx, cs, z):
    p = ctx.mpc(0)
    dp = ctx.mpc(0)
    for c in reversed(cs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


@dataclass(frozen=True)
class RootCertificate:
    root: object
    residual: object
    bound: object

    @property
    def ok(self) -> bool:
        return self.residual < self.bound


def poly_roots(poly, precision: int = 64, max_iter: int = 500) -> list:
    """All complex roots of an exact squarefree polynomial with a residual certificate.

    Aberth-Ehrlich iteration at ``precision + GUARD_DIGITS`` from a perturbed
    circle, Newton polishing, then the check
    ``|f(z)| < 10^-(precision-8) * max|c_k|``.  Roots of real polynomials
    are returned in exact conjugate pairs.  Sorted by modulus, then by
    imaginary part.
    """
    cs_exact = _coeff_list(poly)
    deg = len(cs_exact) - 1
    if deg < 1:
        raise ValueError("polynomial degree must be at least 1")
    if not is_squarefree(cs_exact):
        raise NotSquarefreeError("polynomial has repeated roots; deflate by gcd(f, f') first")
    ctx = float_context(precision + GUARD_DIGITS)
    cs = [ctx.mpf(c.numerator) / c.denominator for c in cs_exact]
    lead = cs[-1]
    monic = [c / lead for c in cs]
    # Fujiwara-type radius for the starting circle
    radius = 2 * max(abs(monic[deg - k]) ** (ctx.mpf(1) / k) for k in range(1, deg + 1))
    zs = [radius * ctx.expj(2 * ctx.pi * k / deg + ctx.mpf("0.4")) for k in range(deg)]
    tol = ctx.mpf(10) ** (-(precision + GUARD_DIGITS // 2))
    for _ in range(max_iter):
        moved = ctx.mpf(0)
        for i in range(deg):
            p, dp = _horner_with_deriv(ctx, monic, zs[i])
            if p == 0:
                continue
            ratio = p / dp
            s = sum(1 / (zs[i] - zs[j]) for j in range(deg) if j != i)
            step = ratio / (1 - ratio * s)
            zs[i] -= step
            moved = max(moved, abs(step) / max(1, abs(zs[i])))
        if moved < tol:
            break
    for i in range(deg):
        for _ in range(3):
            p, dp = _horner_with_deriv(ctx, monic, zs[i])
            if dp != 0:
                zs[i] -= p / dp
    if all(c.imag == 0 for c in [ctx.mpc(x) for x in cs]):
        zs = _pair_conjugates(ctx, zs, precision)
    out_ctx = float_context(precision)
    norm = max(abs(c) for c in cs)
    bound = ctx.mpf(10) ** (-(precision - 8)) * norm
    roots = []
    for z in zs:
        res = abs(_horner(ctx, cs, z))
        if not res < bound:
            raise IntegrityError(f"root {z} failed its residual certificate ({res} >= {bound})")
        roots.append(out_ctx.mpc(z))
    roots.sort(key=lambda z: (abs(z), z.imag))
    return roots


def _pair_conjugates(ctx, zs, precision):
    """Snap real roots onto the axis and make complex roots exact conjugate pairs."""
    eps = ctx.mpf(10) ** (-(precision // 2))
    out = []
    pending = sorted(zs, key=lambda z: (float(z.real), float(z.imag)))
    used = [False] * len(pending)
    for i, z in enumerate(pending):
        if used[i]:
            continue
        used[i] = True
        if abs(z.imag) <= eps * max(1, abs(z)):
            out.append(ctx.mpc(z.real, 0))
            continue
        best = None
        for j in range(len(pending)):
            if not used[j] and (best is None or abs(pending[j] - z.conjugate()) < abs(pending[best] - z.conjugate())):
                best = j
        if best is None:
            raise IntegrityError("unpaired complex root of a real polynomial")
        used[best] = True
        w = (z + pending[best].conjugate()) / 2
        out.extend([w, w.conjugate()])
    return out


def root_certificates(poly, roots, precision: int = 64) -> list[RootCertificate]:
    """Residual certificates for ``roots``, re-evaluated at ``precision + GUARD_DIGITS``."""
    ctx = float_context(precision + GUARD_DIGITS)
    cs = [ctx.mpf(c.numerator) / c.denominator for c in _coeff_list(poly)]
    bound = ctx.mpf(10) ** (-(precision - 8)) * max(abs(c) for c in cs)
    return [RootCertificate(z, abs(_horner(ctx, cs, ctx.mpc(z))), bound) for z in roots]


# ---------------------------------------------------------------------------
# Saddle points and rates


def g_function(ctx, y):
    """``y (y^2 + 6y + 25)^2 / (y - 25)^3``."""
    return y * (y * y + 6 * y + 25) ** 2 / (y - 25) ** 3


def indicial_roots(precision: int = 64) -> list:
    """``N_1, N_2`` (conjugate pair, small) and ``N_3`` (large real)."""
    return poly_roots(INDICIAL, precision)


def saddle_data(precision: int = 64) -> tuple[list, list]:
    """Saddle points ``y_j`` and values ``g(y_j)``, matched to ``N_1, N_2, N_3``.

    Raises IntegrityError if the multiset ``{g(y_j)}`` differs from the
    indicial roots beyond the precision budget.
    """
    if precision < 32:
        raise ValueError("precision must be at least 32")
    ys = poly_roots(SADDLE_CUBIC, precision + GUARD_DIGITS)
    ctx = float_context(precision + GUARD_DIGITS)
    gs = [g_function(ctx, ctx.mpc(y)) for y in ys]
    ns = indicial_roots(precision + GUARD_DIGITS)
    matched_y, matched_g = [], []
    remaining = list(range(len(gs)))
    tol = ctx.mpf(10) ** (-(precision - 8))
    out = float_context(precision)
    for N in ns:
        best = min(remaining, key=lambda k: abs(gs[k] - N))
        if abs(gs[best] - N) > tol * max(1, abs(N)):
            raise IntegrityError(f"saddle value {gs[best]} does not match indicial root {N}")
        remaining.remove(best)
        matched_y.append(out.mpc(ys[best]))
        matched_g.append(out.mpc(gs[best]))
    return matched_y, matched_g


def phi_limit(precision: int = 64):
    """``pi/(2 sqrt 3) - log(3 sqrt 3 / 4)``, the growth of ``log(Phi_n)/n``."""
    ctx = float_context(precision + GUARD_DIGITS)
    val = ctx.pi / (2 * ctx.sqrt(3)) - ctx.log(3 * ctx.sqrt(3) / 4)
    return float_context(precision).mpf(val)


def rates(precision: int = 64) -> tuple:
    """``(rate_I, rate_b)``: exponential rates of the scaled form and its pi-coefficient."""
    if precision < 32:
        raise ValueError("precision must be at least 32")
    ctx = float_context(precision + GUARD_DIGITS)
    ns = indicial_roots(precision + GUARD_DIGITS)
    common = -ctx.mpf(5) / 2 * ctx.log(2) + 4 - phi_limit(precision + GUARD_DIGITS)
    rate_I = ctx.log(abs(ns[0])) + common
    rate_b = ctx.log(abs(ns[2])) + common
    out = float_context(precision)
    return out.mpf(rate_I), out.mpf(rate_b)


def measure_bounds(precision: int = 64) -> tuple:
    """``(mu_bound, mu_crude)``; the crude bound drops the Phi saving from both rates."""
    ctx = float_context(precision + GUARD_DIGITS)
    rI, rb = rates(precision + GUARD_DIGITS)
    phi = phi_limit(precision + GUARD_DIGITS)
    mu = 1 + rb / (-rI)
    mu_crude = 1 + (rb + phi) / (-(rI + phi))
    out = float_context(precision)
    return out.mpf(mu), out.mpf(mu_crude)


@dataclass(frozen=True)
class AsymptoticData:
    precision: int
    N_roots: tuple
    y_roots: tuple
    g_values: tuple
    phi_limit: object
    rate_I: object
    rate_b: object
    mu_bound: object
    mu_crude: object

    def as_dict(self, digits: int | None = None) -> dict:
        digits = digits or self.precision
        ctx = float_context(self.precision)

        def fmt(x):
            return ctx.nstr(x, digits)

        return {
            "precision": self.precision,
            "N_roots": [fmt(z) for z in self.N_roots],
            "y_roots": [fmt(z) for z in self.y_roots],
            "g_values": [fmt(z) for z in self.g_values],
            "abs_N1": fmt(abs(self.N_roots[0])),
            "phi_limit": fmt(self.phi_limit),
            "rate_I": fmt(self.rate_I),
            "rate_b": fmt(self.rate_b),
            "mu_bound": fmt(self.mu_bound),
            "mu_crude": fmt(self.mu_crude),
        }


def asymptotic_data(precision: int = 64) -> AsymptoticData:
    ns = indicial_roots(precision)
    ys, gs = saddle_data(precision)
    rI, rb = rates(precision)
    mu, mu_crude = measure_bounds(precision)
    return AsymptoticData(precision, tuple(ns), tuple(ys), tuple(gs), phi_limit(precision), rI, rb, mu, mu_crude)


# ---------------------------------------------------------------------------
# Quadrature on the segment x = -1 + i t, -2 <= t <= 2


def _tanh_sinh(ctx, f, a, b, tol, max_level=14):
    """Doubling tanh-sinh rule on ``[a, b]``; returns ``(value, error estimate)``.

    The step halves at every level and only the new odd nodes are evaluated.
    The error estimate is the change between successive levels.
    """
    half = (b - a) / 2
    mid = (a + b) / 2
    pi2 = ctx.pi / 2
    # truncate the u-range once the weights underflow the working precision
    umax = ctx.mpf(1)
    while True:
        w = pi2 * ctx.cosh(umax) / ctx.cosh(pi2 * ctx.sinh(umax)) ** 2
        if w < ctx.eps ** 2:
            break
        umax += ctx.mpf(0.5)

    def node(u):
        sh = pi2 * ctx.sinh(u)
        ch = ctx.cosh(sh)
        x = ctx.tanh(sh)
        w = pi2 * ctx.cosh(u) / (ch * ch)
        return half * x + mid, half * w

    h = ctx.mpf(1)
    x0, w0 = node(ctx.mpf(0))
    total = w0 * f(x0)
    k = 1
    while k * h <= umax:
        for u in (k * h, -k * h):
            x, w = node(u)
            total += w * f(x)
        k += 1
    prev = total * h
    err = ctx.inf
    for _ in range(max_level):
        h /= 2
        k = 1
        while k * h <= umax:
            for u in (k * h, -k * h):
                x, w = node(u)
                total += w * f(x)
            k += 2
        cur = total * h
        err = abs(cur - prev)
        if err < tol * max(1, abs(cur)):
            return cur, err
        prev = cur
    raise QuadratureError(err)


def contour_integral(params: IntegrandParams, precision: int = 64):
    """``i (-1)^v`` times the integral of ``R`` from ``-1-2i`` to ``-1+2i``.

    With ``x = -1 + i t`` this is ``-(-1)^v`` times the real-line integral of
    ``R(-1+it)`` over ``[-2, 2]``.  Returned as an mpc at ``precision``
    digits; the absolute error estimate is below ``10^-(precision-10)``.
    """
    s, v = params.s, params.v
    ctx = float_context(precision + GUARD_DIGITS)

    def R(t):
        x = ctx.mpc(-1, t)
        x2 = x * x
        return 5 * x ** s * (x2 * x2 + 6 * x2 + 25) ** s / (25 - x2) ** v

    tol = ctx.mpf(10) ** (-(precision - 8))
    val, err = _tanh_sinh(ctx, R, ctx.mpf(-2), ctx.mpf(2), tol)
    if err > ctx.mpf(10) ** (-(precision - 10)):
        raise QuadratureError(err)
    sign = -1 if v % 2 == 0 else 1
    return float_context(precision).mpc(sign * val)
