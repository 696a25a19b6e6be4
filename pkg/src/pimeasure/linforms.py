"""Exact linear forms ``I = a + b*pi``, their integer scaling, and lemma certificates.

Sign convention: for exponents ``(s, v)`` the form is
``I = i (-1)^v * integral of R(x) dx`` over the segment from ``-1-2i`` to
``-1+2i``; for the classic exponents this is ``i (-1)^(n+1) * integral``.
The ``j = 0`` poles contribute ``pi*i/2``, so ``b = (-1)^(v+1) A_0 / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .construction import IntegrandParams, LaurentTable, laurent_coeffs, polypart_x
from .exactkernel import GaussInt, GaussRational, IntegrityError, float_context, frac_str, padic_order
from .numtheory import lcm_upto, prime_set_P

ROUTES = ("gauss", "x5", "x")


@dataclass(frozen=True)
class LinearForm:
    n: int
    a: Fraction
    b: Fraction
    route_tag: str = field(default="gauss+x5", compare=False)
    params: IntegrandParams | None = field(default=None, compare=False)

    def value(self, digits: int = 64):
        """``a + b*pi`` with enough working digits to survive the cancellation."""
        guard = _decimal_size(self.a) + _decimal_size(self.b)
        ctx = float_context(digits + guard + 20)
        val = ctx.mpf(self.a.numerator) / self.a.denominator + ctx.mpf(self.b.numerator) / self.b.denominator * ctx.pi
        out = float_context(digits)
        return out.mpf(val)

    def scale(self, c) -> "LinearForm":
        c = Fraction(c)
        return LinearForm(self.n, self.a * c, self.b * c, self.route_tag, self.params)


@dataclass(frozen=True)
class ScaledForm:
    n: int
    a_int: int
    b_int: int
    scale_log2: int
    L: int
    F: int


@dataclass
class Certificate:
    lemma: str
    n: int
    checked: str
    count: int
    passed: bool
    counterexample: dict | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = "" if self.passed else f" counterexample={self.counterexample}"
        return f"{status} {self.lemma} n={self.n} checked={self.count} ({self.checked}){tail}"


class NotIntegralError(ArithmeticError):
    def __init__(self, n: int, denominator: int, which: str):
        super().__init__(f"n={n}: scaled {which} has denominator {denominator}")
        self.n = n
        self.denominator = denominator
        self.which = which


def _decimal_size(x: Fraction) -> int:
    bits = max(abs(x.numerator).bit_length(), x.denominator.bit_length())
    return int(bits * 0.30103) + 2


# ---------------------------------------------------------------------------
# Pieces of the integral


def _gauss_pows(base: GaussInt, count: int) -> list[GaussInt]:
    out = [GaussInt(1, 0)]
    for _ in range(count - 1):
        out.append(out[-1] * base)
    return out


def pole_part(params: IntegrandParams, table: LaurentTable) -> Fraction:
    """``i * integral of sum_{j>=1} A_j ((5+x)^(-j-1) + (5-x)^(-j-1)) dx``.

    Each antiderivative difference is
    ``((4-2i)^-j - (4+2i)^-j - (6+2i)^-j + (6-2i)^-j) / j``; the sum is formed
    in Q(i) over one common denominator and its imaginary part must vanish.
    """
    v = params.v
    if v < 2:
        return Fraction(0)
    S = table.scaled
    top = v - 1
    L = lcm_upto(top)
    z = GaussInt(4, 2)
    w = GaussInt(6, 2)
    zp = zc = wp = wc = GaussInt(1, 0)
    re = im = 0
    for j in range(1, v):
        zp, zc = zp * z, zc * z.conj()
        wp, wc = wp * w, wc * w.conj()
        sj = S[j]
        if not sj:
            continue
        # 40^j * bracket = 2^j ((4+2i)^j - (4-2i)^j) - (6-2i)^j + (6+2i)^j
        br = (zp.re - zc.re) * 2**j - wc.re + wp.re
        bi = (zp.im - zc.im) * 2**j - wc.im + wp.im
        f = sj * (L // j) * 40 ** (top - j)
        # multiply by i
        re += -bi * f
        im += br * f
    if im:
        raise IntegrityError("pole part has a nonzero imaginary part")
    return Fraction(re, 10**table.exp10 * L * 40**top)


def poly_integral_gauss(b_coeffs: list[GaussInt]) -> Fraction:
    """``i * integral of P`` from ``P = sum B_k (x+1+2i)^k``: ``-sum 2^(2k+2) B_k i^k / (k+1)``."""
    if not b_coeffs:
        return Fraction(0)
    L = lcm_upto(len(b_coeffs))
    re = im = 0
    ipow = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    for k, bk in enumerate(b_coeffs):
        ur, ui = ipow[k % 4]
        tr = bk.re * ur - bk.im * ui
        ti = bk.re * ui + bk.im * ur
        f = 2 ** (2 * k + 2) * (L // (k + 1))
        re -= f * tr
        im -= f * ti
    if im:
        raise IntegrityError("integral of P via the (x+1+2i)-basis is not real")
    return Fraction(re, L)


def poly_integral_x5(coeffs) -> Fraction:
    """``i * integral of P`` from ``P = sum c_(k-1) (x+5)^(k-1)``.

    ``i * ((4+2i)^k - (4-2i)^k) / k`` per term, in Q(i).
    """
    coeffs = [Fraction(c) for c in coeffs]
    if not coeffs:
        return Fraction(0)
    D = math.lcm(*(c.denominator for c in coeffs))
    L = lcm_upto(len(coeffs))
    zp = zc = GaussInt(1, 0)
    re = im = 0
    for k, c in enumerate(coeffs, start=1):
        zp, zc = zp * GaussInt(4, 2), zc * GaussInt(4, -2)
        if not c:
            continue
        f = c.numerator * (D // c.denominator) * (L // k)
        dr, di = zp.re - zc.re, zp.im - zc.im
        re += -di * f
        im += dr * f
    if im:
        raise IntegrityError("integral of P via the (x+5)-basis is not real")
    return Fraction(re, D * L)


def poly_integral_x(coeffs) -> Fraction:
    """``i * integral of P`` for ``P`` in the monomial basis (integer coefficients)."""
    if not coeffs:
        return Fraction(0)
    deg = len(coeffs) - 1
    L = lcm_upto(deg + 1)
    wp = wc = GaussInt(1, 0)
    w = GaussInt(-1, 2)
    re = im = 0
    for k, c in enumerate(coeffs):
        wp, wc = wp * w, wc * w.conj()
        if not c:
            continue
        f = c * (L // (k + 1))
        dr, di = wp.re - wc.re, wp.im - wc.im
        re += -di * f
        im += dr * f
    if im:
        raise IntegrityError("integral of P in the monomial basis is not real")
    return Fraction(re, L)


# ---------------------------------------------------------------------------
# Linear forms


def form_from_params(
    params: IntegrandParams,
    routes: tuple[str, ...] = ("gauss", "x5"),
    table: LaurentTable | None = None,
    n: int | None = None,
) -> LinearForm:
    """Exact ``(a, b)`` for the integrand with exponents ``params``.

    Every route named in ``routes`` computes the integral of the polynomial
    part independently; they must agree exactly.
    """
    if params.s % 2:
        raise ValueError("odd s gives an odd integrand; only even s yields a form in 1 and pi")
    bad = [r for r in routes if r not in ROUTES]
    if bad or not routes:
        raise ValueError(f"unknown routes {bad}; choose from {ROUTES}")
    need_negative = any(r in ("gauss", "x5") for r in routes)
    if table is None:
        if need_negative:
            table = laurent_coeffs(params)
        else:
            table = laurent_coeffs(params, 0, params.v - 1)
    values = {}
    for r in routes:
        if r == "gauss":
            values[r] = poly_integral_gauss(table.p_gauss)
        elif r == "x5":
            values[r] = poly_integral_x5(table.p_x5.coeffs)
        else:
            values[r] = poly_integral_x(polypart_x(params).coeffs)
    first = values[routes[0]]
    for r, val in values.items():
        if val != first:
            raise IntegrityError(f"polynomial-part routes disagree: {routes[0]}={first} vs {r}={val}")
    sign = -1 if params.v % 2 else 1
    a = sign * (first + pole_part(params, table))
    b = -sign * table[0] / 2
    label_n = n
    if label_n is None and params.label and params.label[0] == "classic":
        label_n = params.label[1]
    return LinearForm(label_n if label_n is not None else -1, a, b, "+".join(routes), params)


def linear_form(n: int, routes: tuple[str, ...] = ("gauss", "x5"), table: LaurentTable | None = None) -> LinearForm:
    """Classic form ``I_n = a_n + b_n*pi``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return form_from_params(IntegrandParams.classic(n), routes, table, n)


def scale_log2(n: int) -> int:
    return -(5 * n // 2) + 2


def scaled_form(n: int, form: LinearForm | None = None) -> ScaledForm:
    """``2^(-floor(5n/2)+2) L_n (a_n, b_n)``; raises if not integral."""
    form = form if form is not None else linear_form(n)
    e = scale_log2(n)
    L = prime_set_P(n).L
    factor = Fraction(2) ** e * L
    sa, sb = form.a * factor, form.b * factor
    for which, val in (("a", sa), ("b", sb)):
        if val.denominator != 1:
            raise NotIntegralError(n, val.denominator, which)
    ai, bi = sa.numerator, sb.numerator
    return ScaledForm(n, ai, bi, e, L, math.gcd(ai, bi) or 1)


# ---------------------------------------------------------------------------
# Certificates


def verify_lemma(lemma_id, n: int, table: LaurentTable | None = None) -> Certificate:
    """Check one lemma's inclusions at index ``n`` by exact arithmetic.

    ``lemma_id`` is 1, 2, 3, 4 or ``"prop1"``.  Failures are recorded in the
    returned certificate, not raised.
    """
    if lemma_id in ("prop1", "p1"):
        return _verify_prop1(n)
    lemma_id = int(str(lemma_id).removeprefix("lemma"))
    if table is None and lemma_id != 4:
        table = laurent_coeffs(IntegrandParams.classic(n))
    if lemma_id == 1:
        return _verify_lemma1(n, table)
    if lemma_id == 2:
        return _verify_lemma2(n, table)
    if lemma_id == 3:
        return _verify_lemma3(n, table)
    if lemma_id == 4:
        return _verify_lemma4(n, table or laurent_coeffs(IntegrandParams.classic(n)))
    raise ValueError(f"unknown lemma {lemma_id}")


def _verify_lemma1(n, table):
    checked = 0
    for j in range(0, 3 * n + 1):
        val = table[j] * Fraction(2) ** (-((5 * n + 3 * j) // 2) + 1) / Fraction(5) ** j
        checked += 1
        if val.denominator != 1:
            return Certificate("lemma1", n, "j=0..3n", checked, False, {"j": j, "value": frac_str(val)})
    return Certificate("lemma1", n, "j=0..3n", checked, True)


def _verify_lemma2(n, table):
    ps = prime_set_P(n).primes_P
    checked = 0
    for p in ps:
        for j in range(-4 * n + 1, 3 * n + 1):
            if j % p:
                continue
            val = table[j] / Fraction(10) ** j
            checked += 1
            if val != 0 and padic_order(val, p) < 1:
                return Certificate("lemma2", n, "p in P_n, p | j", checked, False, {"p": p, "j": j, "value": frac_str(val)})
    return Certificate("lemma2", n, f"p in {list(ps)}, p | j, j=-4n+1..3n", checked, True)


def _verify_lemma3(n, table):
    sd = prime_set_P(n)
    checked = 0
    for j in range(-4 * n, 3 * n + 1):
        if j == 0:
            continue
        val = sd.L * table[j] / Fraction(10) ** j / j
        checked += 1
        if val.denominator != 1:
            return Certificate("lemma3", n, "j=-4n..3n, j!=0", checked, False, {"j": j, "value": frac_str(val)})
    a0 = table[0] / sd.phi
    checked += 1
    if a0.denominator != 1:
        return Certificate("lemma3", n, "A_0/Phi_n", checked, False, {"j": 0, "value": str(a0)})
    return Certificate("lemma3", n, "j=-4n..3n, j!=0, and A_0/Phi_n", checked, True)


def _verify_lemma4(n, table):
    bs = table.p_gauss
    checked = 0
    for k, bk in enumerate(bs):
        e = -(5 * n // 2) + (3 * k + 1) // 2 + 2
        val = GaussRational.of(bk) * Fraction(2) ** e
        checked += 1
        if val.den != 1:
            return Certificate("lemma4", n, "k=0..4n-2", checked, False, {"k": k, "value": str(val)})
    return Certificate("lemma4", n, "k=0..4n-2", checked, True)


def _verify_prop1(n, form: LinearForm | None = None):
    try:
        sf = scaled_form(n, form)
    except NotIntegralError as exc:
        return Certificate("prop1", n, "a'_n, b'_n", 2, False, {"which": exc.which, "denominator": exc.denominator})
    return Certificate("prop1", n, f"a'_n, b'_n (gcd {sf.F})", 2, True)


def verify_prop1(n: int, form: LinearForm | None = None) -> Certificate:
    return _verify_prop1(n, form)


# ---------------------------------------------------------------------------
# Empirical delta


@dataclass(frozen=True)
class DeltaResult:
    delta: object  # mpf, or None when undefined
    mu: object
    q: int
    epsilon_log10: float | None


def reduce_to_integers(a: Fraction, b: Fraction) -> tuple[int, int, Fraction]:
    """Coprime integers ``(p, q)`` proportional to ``(a, b)`` and the factor used."""
    m = math.lcm(a.denominator, b.denominator)
    am, bm = a.numerator * (m // a.denominator), b.numerator * (m // b.denominator)
    g = math.gcd(am, bm)
    if g == 0:
        raise ValueError("both coefficients vanish")
    return am // g, bm // g, Fraction(m, g)


def delta_empirical(form_or_a, b: Fraction | None = None, digits: int = 30) -> DeltaResult:
    """``delta = -log eps / log q`` for the form reduced to coprime integers.

    With ``m = lcm(den a, den b)`` and ``g = gcd(m a, m b)``: ``q = |m b / g|``
    and ``eps = |(m/g)(a + b pi)|``.  ``mu = 1 + 1/delta``.
    """
    if b is None:
        a, b = form_or_a.a, form_or_a.b
    else:
        a = Fraction(form_or_a)
        b = Fraction(b)
    if b == 0:
        return DeltaResult(None, None, 0, None)
    p_int, q_int, _ = reduce_to_integers(a, b)
    q = abs(q_int)
    if q <= 1:
        return DeltaResult(None, None, q, None)
    size = int(max(abs(p_int).bit_length(), q.bit_length()) * 0.30103) + 2
    work = size + digits + 20
    while True:
        ctx = float_context(work)
        eps = abs(ctx.mpf(p_int) + ctx.mpf(q_int) * ctx.pi)
        # relative accuracy of eps is about work - size - (-log10 eps) digits
        if eps != 0:
            lost = size - int(ctx.log10(eps)) if eps < 1 else size
            if work - lost >= digits + 10:
                break
        work = 2 * work
    out = float_context(digits)
    delta = out.mpf(-ctx.log(eps) / ctx.log(q))
    mu = 1 + 1 / delta if delta != 0 else None
    return DeltaResult(delta, mu, q, float(ctx.log10(eps)))
