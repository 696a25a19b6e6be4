"""The integrand, its Laurent coefficients at x = -5, and its polynomial part.

The integrand is ``R(x) = 5 x^s (x^4+6x^2+25)^s / (25-x^2)^v``.  Writing
``t = x + 5``, the coefficients ``A_j`` of ``(x+5)^(-j-1)`` are read off the
product of the numerator (expanded in ``t``) with the series of
``(10-t)^(-v)``.  All coefficients are kept as integers over one shared
power of ten.

Two slow, independent formulas for ``A_j`` (a Leibniz multi-index sum and
a double sum over binomial ``Z``-sums) are provided as oracles for small n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterator

from .exactkernel import (
    GaussInt,
    GaussRational,
    IntegrityError,
    Poly,
    binomial_row,
    intpoly_mul,
    intpoly_pow,
)

# Q(t - 5) where Q(x) = x^4 + 6x^2 + 25, ascending in t
_Q_SHIFTED = (800, -560, 156, -20, 1)


@dataclass(frozen=True)
class IntegrandParams:
    """Exponent data ``(s, v)`` of the integrand, with an optional label."""

    s: int
    v: int
    label: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be nonnegative")
        if self.v < 1:
            raise ValueError("v must be positive")

    @classmethod
    def classic(cls, n: int) -> "IntegrandParams":
        if n < 0:
            raise ValueError("n must be nonnegative")
        return cls(2 * n, 3 * n + 1, ("classic", n))

    @classmethod
    def family(cls, A: int, B: int, n: int) -> "IntegrandParams":
        if A < 1 or B < 1 or n < 0:
            raise ValueError("need A, B >= 1 and n >= 0")
        return cls(2 * A * n, 2 * B * n + 1, ("family", A, B, n))

    @property
    def poly_degree(self) -> int:
        """Degree of the polynomial part; negative means there is none."""
        return 5 * self.s - 2 * self.v

    @property
    def default_window(self) -> tuple[int, int]:
        return (min(0, -(self.poly_degree + 2)), self.v - 1)

    @property
    def min_j(self) -> int:
        return self.default_window[0] - 1


def integrand(params: IntegrandParams) -> tuple[Poly, int]:
    """Numerator ``5 x^s (x^4+6x^2+25)^s`` in the monomial basis, and ``v``."""
    q = intpoly_pow([25, 0, 6, 0, 1], params.s)
    return Poly([0] * params.s + [5 * c for c in q]), params.v


def numerator_in_t(params: IntegrandParams, count: int) -> list[int]:
    """First ``count`` coefficients of the numerator written in ``t = x + 5``."""
    s = params.s
    lin = binomial_row(s, -5, count)
    quart = intpoly_pow(_Q_SHIFTED, s, count)
    return [5 * c for c in intpoly_mul(lin, quart, count)]


def recip_series_scaled(c: int, m: int, count: int) -> tuple[list[int], int]:
    """Integers ``e_k`` and exponent ``E`` with ``(c-t)^(-m) = c^(-m-E) sum e_k t^k``.

    ``e_k = binom(m+k-1, k) c^(E-k)`` with ``E = count - 1``.
    """
    top = count - 1
    out = []
    b = 1
    pw = c**top
    for k in range(count):
        out.append(b * pw)
        b = b * (m + k) // (k + 1)
        pw //= c
    return out, top


class LaurentTable:
    """Coefficients ``A_j`` of ``R`` at ``x = -5`` over ``j_lo <= j <= j_hi``.

    ``A_j = scaled[j] / 10**exp10``.  The polynomial part is attached lazily:
    ``p_x5`` (basis ``x+5``) and ``p_gauss`` (``B_k`` in basis ``x+1+2i``).
    """

    def __init__(self, params: IntegrandParams, j_lo: int, j_hi: int, scaled: dict[int, int], exp10: int):
        self.params = params
        self.j_lo = j_lo
        self.j_hi = j_hi
        self.scaled = scaled
        self.exp10 = exp10

    def __getitem__(self, j: int) -> Fraction:
        if not self.j_lo <= j <= self.j_hi:
            raise KeyError(j)
        return Fraction(self.scaled[j], 10**self.exp10)

    def __contains__(self, j):
        return self.j_lo <= j <= self.j_hi

    @cached_property
    def a(self) -> dict[int, Fraction]:
        d = 10**self.exp10
        return {j: Fraction(self.scaled[j], d) for j in range(self.j_lo, self.j_hi + 1)}

    @cached_property
    def p_x5(self) -> Poly:
        return polypart_x5(self.params, self)

    @cached_property
    def p_gauss(self) -> list[GaussInt]:
        return polypart_gauss(self.params, self.p_x5, self)

    def __repr__(self):
        return f"LaurentTable({self.params}, j in [{self.j_lo}, {self.j_hi}])"


def laurent_coeffs(params: IntegrandParams, j_lo: int | None = None, j_hi: int | None = None) -> LaurentTable:
    """Laurent coefficients ``A_j`` of ``R`` at ``x = -5`` for ``j_lo <= j <= j_hi``.

    With ``t = x+5``, ``R = t^(-v) N(t-5) (10-t)^(-v)`` and ``A_j`` is the
    coefficient of ``t^(v-1-j)`` in ``N(t-5) (10-t)^(-v)``.
    """
    lo_default, hi_default = params.default_window
    j_lo = lo_default if j_lo is None else j_lo
    j_hi = hi_default if j_hi is None else j_hi
    v = params.v
    if j_hi > v - 1:
        raise ValueError(f"j_hi={j_hi} exceeds v-1={v - 1}; those coefficients vanish")
    if j_lo < params.min_j:
        raise ValueError(f"j_lo={j_lo} below the supported window start {params.min_j}")
    if j_lo > j_hi:
        raise ValueError("empty window")
    count = v - j_lo  # k = v-1-j runs over 0..v-1-j_lo
    num = numerator_in_t(params, count)
    ser, top = recip_series_scaled(10, v, count)
    prod = intpoly_mul(num, ser, count)
    prod += [0] * (count - len(prod))
    scaled = {j: prod[v - 1 - j] for j in range(j_lo, j_hi + 1)}
    return LaurentTable(params, j_lo, j_hi, scaled, v + top)


# ---------------------------------------------------------------------------
# Polynomial part


def polypart_x5(params: IntegrandParams, table: LaurentTable) -> Poly:
    """Polynomial part ``P`` in the ``(x+5)``-basis from the Laurent table.

    The coefficient of ``(x+5)^(k-1)`` is
    ``A_{-k} - sum_j binom(j+k-1, j) A_j / 10^(j+k)``.  Coefficients past
    the degree bound that the table covers are checked to vanish.
    """
    v = params.v
    deg = params.poly_degree
    if table.j_hi < v - 1 or table.j_lo > min(0, -(deg + 1)):
        raise ValueError("table must cover j in [-(deg+1), v-1]")
    E = table.exp10
    S = table.scaled
    weighted = [S[j] * 10 ** (v - 1 - j) for j in range(v)]
    kmax = -table.j_lo
    coeffs = []
    for k in range(1, kmax + 1):
        acc = 0
        b = 1  # binom(j+k-1, j) at j = 0
        for j in range(v):
            if weighted[j]:
                acc += b * weighted[j]
            b = b * (j + k) // (j + 1)
        num = S[-k] * 10 ** (v - 1 + k) - acc
        c = Fraction(num, 10 ** (E + v - 1 + k))
        if k - 1 > deg:
            if c:
                raise IntegrityError(f"coefficient of (x+5)^{k - 1} is {c}, beyond degree {deg}")
            continue
        coeffs.append(c)
    return Poly(coeffs, 5)


def polypart_x(params: IntegrandParams) -> Poly:
    """Polynomial part in the monomial basis, by exact division in ``y = x^2``.

    ``N(y) = 5 y^(s/2) W(y)^s`` with ``W = y^2+6y+25`` is divided by
    ``(25-y)^v`` through reversed power series; only the quotient is formed.
    """
    s, v = params.s, params.v
    if s % 2:
        raise ValueError("the polynomial part in x^2 needs an even exponent s")
    dq = 5 * s // 2 - v
    if dq < 0:
        return Poly([])
    rev_w = intpoly_pow([1, 6, 25], s, dq + 1)
    rev_n = [5 * c for c in rev_w[: dq + 1]]
    rev_n += [0] * (dq + 1 - len(rev_n))
    inv, _ = recip_series_scaled(1, v, dq + 1)  # binom(v-1+k, k)
    inv = [c * 25**k for k, c in enumerate(inv)]
    rq = intpoly_mul(rev_n, inv, dq + 1)
    rq += [0] * (dq + 1 - len(rq))
    sign = -1 if v % 2 else 1
    q = [sign * c for c in reversed(rq)]
    coeffs = [0] * (2 * dq + 1)
    coeffs[::2] = q
    return Poly(coeffs)


def polypart_gauss(params: IntegrandParams, p_x5: Poly, table: LaurentTable | None = None) -> list[GaussInt]:
    """Coefficients ``B_k`` of ``P`` in the ``(x+1+2i)``-basis.

    Done by an exact Taylor shift; for ``k < s`` the values are recomputed
    from the pole part alone (``R`` vanishes to order ``s`` at ``-1-2i``) and
    compared when ``table`` is given.
    """
    if p_x5.is_zero():
        return []
    if any(not (isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1)) for c in p_x5.coeffs):
        raise IntegrityError("polynomial part in the (x+5)-basis is not integral")
    shifted = Poly([int(c) for c in p_x5.coeffs], 5).shift_basis(GaussInt(1, 2))
    out = []
    for c in shifted.coeffs:
        g = GaussRational.of(c)
        if g.den != 1:
            raise IntegrityError(f"basis change produced {g}, not in Z[i]")
        out.append(GaussInt(g.re, g.im))
    out += [GaussInt(0, 0)] * (params.poly_degree + 1 - len(out))
    if table is not None:
        for k in range(min(params.s, len(out))):
            closed = gauss_coeff_from_poles(params, table, k)
            if closed != out[k]:
                raise IntegrityError(f"B_{k}: basis change {out[k]} != pole formula {closed}")
    return out


def gauss_coeff_from_poles(params: IntegrandParams, table: LaurentTable, k: int) -> GaussRational:
    """``B_k`` for ``k < s`` as minus the k-th Taylor coefficient of the pole part at ``-1-2i``.

    ``5+x = 4-2i`` and ``5-x = 6+2i`` there; ``1/(4-2i)^m = (4+2i)^m/20^m``
    and ``1/(6+2i)^m = (6-2i)^m/40^m``.
    """
    v = params.v
    S = table.scaled
    top = v + k  # largest m = j+k+1
    sign = -1 if k % 2 else 1
    re = im = 0
    b = 1  # binom(j+k, k)
    z = GaussInt(4, 2) ** (k + 1)
    w = GaussInt(6, -2) ** (k + 1)
    for j in range(v):
        m = j + k + 1
        sj = S[j]
        if sj:
            scale40 = 40 ** (top - m)
            t1 = sign * b * sj * 2**m * scale40
            t2 = b * sj * scale40
            re += t1 * z.re + t2 * w.re
            im += t1 * z.im + t2 * w.im
        b = b * (j + k + 1) // (j + 1)
        z = z * GaussInt(4, 2)
        w = w * GaussInt(6, -2)
    return GaussRational.make(-re, -im, 10**table.exp10 * 40**top)


# ---------------------------------------------------------------------------
# Oracles


@dataclass(frozen=True)
class MultiIndexTerm:
    m: tuple[int, int, int, int, int, int]
    T: int


def multiindex_terms(n: int, j: int) -> Iterator[MultiIndexTerm]:
    """Enumerate ``(m_0..m_5)`` in the index set with its weight ``T(m)``."""
    total = 3 * n - j
    top = 2 * n

    def rec(prefix, left, slots):
        if slots == 0:
            yield prefix, left
            return
        for mi in range(min(top, left) + 1):
            yield from rec(prefix + (mi,), left - mi, slots - 1)

    for ms, m0 in rec((), total, 5):
        T = comb(3 * n + m0, m0)
        for mi in ms:
            T *= comb(top, mi)
        yield MultiIndexTerm((m0,) + ms, T)


def aj_multiindex_oracle(n: int, j: int) -> Fraction:
    """``A_j`` of the classic integrand from the Leibniz multi-index formula.

    Sum over ``m`` of ``(-1)^(m1+..+m5) T(m) 2^(4n-1+j+m1) (1-i)^(-m4)
    (1+i)^(-m5) 5^j (2+i)^(m2+m5) (2-i)^(m3+m4)``.  The ``(m0, m1)`` part is
    summed first for each ``(m2..m5)``.
    """
    if n > 6:
        raise ValueError("multi-index oracle is limited to n <= 6")
    if j > 3 * n:
        raise ValueError("j must be at most 3n")
    total = 3 * n - j
    top = 2 * n

    def inner(rest: int) -> int:
        # sum over m1 + m0 = rest of (-1)^m1 binom(2n,m1) 2^m1 binom(3n+m0, m0)
        acc = 0
        for m1 in range(min(top, rest) + 1):
            m0 = rest - m1
            term = comb(top, m1) * 2**m1 * comb(3 * n + m0, m0)
            acc += -term if m1 % 2 else term
        return acc

    inner_cache = {r: inner(r) for r in range(total + 1)}
    binoms = [comb(top, m) for m in range(top + 1)]
    p1 = [GaussInt(1, 1) ** m for m in range(top + 1)]
    m1_ = [GaussInt(1, -1) ** m for m in range(top + 1)]
    p2 = [GaussInt(2, 1) ** m for m in range(2 * top + 1)]
    m2_ = [GaussInt(2, -1) ** m for m in range(2 * top + 1)]
    re = im = 0
    for m4 in range(min(top, total) + 1):
        for m5 in range(min(top, total - m4) + 1):
            for m2 in range(min(top, total - m4 - m5) + 1):
                for m3 in range(min(top, total - m4 - m5 - m2) + 1):
                    rest = total - m2 - m3 - m4 - m5
                    h = inner_cache[rest]
                    if not h:
                        continue
                    w = binoms[m2] * binoms[m3] * binoms[m4] * binoms[m5] * h
                    w *= 2 ** (2 * top - m4 - m5)
                    if (m2 + m3 + m4 + m5) % 2:
                        w = -w
                    g = p1[m4] * m1_[m5] * p2[m2 + m5] * m2_[m3 + m4]
                    re += w * g.re
                    im += w * g.im
    if im:
        raise IntegrityError(f"multi-index sum for n={n}, j={j} has nonzero imaginary part")
    # undo the 2^(4n) scaling and apply 2^(4n-1+j) 5^j
    return Fraction(re) * Fraction(2) ** (j - 1) * Fraction(5) ** j


def z_sum(n: int, m: int, j: int) -> int:
    """``Z(n,m,j) = sum_{n0} (-2)^n0 binom(2n+2m, n0) binom(6n-j-n0, 3n)``."""
    top = 2 * n + 2 * m
    acc = 0
    for n0 in range(top + 1):
        upper = 6 * n - j - n0
        if upper < 3 * n:
            break
        acc += (-2) ** n0 * comb(top, n0) * comb(upper, 3 * n)
    return acc


def aj_hypergeometric_oracle(n: int, j: int) -> Fraction:
    """``A_j`` of the classic integrand from the double sum over ``Z``-sums."""
    if n > 6:
        raise ValueError("hypergeometric oracle is limited to n <= 6")
    if j > 3 * n:
        raise ValueError("j must be at most 3n")
    top = 2 * n
    pa = [GaussInt(3, -4) ** k for k in range(top + 1)]
    pb = [GaussInt(3, 4) ** k for k in range(top + 1)]
    zs = {m: z_sum(n, m, j) for m in range(2 * top + 1)}
    re = im = 0
    for n1 in range(top + 1):
        for n2 in range(top + 1):
            w = comb(top, n1) * comb(top, n2) * zs[n1 + n2] * 5 ** (2 * n + 2 * n1 + 2 * n2 + 1)
            if not w:
                continue
            g = pa[top - n1] * pb[top - n2]
            re += w * g.re
            im += w * g.im
    if im:
        raise IntegrityError(f"Z-sum representation for n={n}, j={j} has nonzero imaginary part")
    return Fraction(re, 10 ** (6 * n - j + 1))


def super_catalan(N: int, M: int) -> Fraction:
    from math import factorial

    return Fraction(factorial(2 * N) * factorial(2 * M), factorial(N) * factorial(N + M) * factorial(M))


def von_szily_sum(N: int, M: int) -> int:
    """``sum_k (-1)^k binom(2N, N+k) binom(2M, M+k)`` by direct summation."""
    lim = min(N, M)
    return sum((-1) ** abs(k) * comb(2 * N, N + k) * comb(2 * M, M + k) for k in range(-lim, lim + 1))
