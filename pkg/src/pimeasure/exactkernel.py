"""Exact scalars, polynomials and truncated series, plus the float layer.

Rationals are :class:`fractions.Fraction` (already normalized with a positive
denominator).  Gaussian integers and Gaussian rationals are small immutable
classes defined here.  Integer polynomial products go through Kronecker
substitution so that a single big-integer multiplication does the work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _bigint = int

Rational = Fraction

NEG_INF = float("-inf")
"""Degree of the zero polynomial."""

DEFAULT_DIGITS = 64


class PoleError(ZeroDivisionError):
    """Expansion point is a pole of the function being expanded."""


class InexactDivisionError(ArithmeticError):
    """Polynomial division left a nonzero remainder."""

    def __init__(self, remainder: "Poly"):
        super().__init__(f"nonzero remainder {remainder!r}")
        self.remainder = remainder


class IntegrityError(ArithmeticError):
    """An exact identity that must hold did not (signals an upstream bug)."""


# ---------------------------------------------------------------------------
# Gaussian integers / rationals


@dataclass(frozen=True, slots=True)
class GaussInt:
    re: int = 0
    im: int = 0

    def __add__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, GaussRational):
            return GaussRational.of(self) + other
        return GaussInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_gauss(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, GaussRational):
            return GaussRational.of(self) * other
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussInt(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GaussRational.of(self) / other

    def __rtruediv__(self, other):
        return GaussRational.of(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return GaussRational.of(self) ** e
        result, base = GaussInt(1, 0), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, GaussRational):
            return other == self
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re or self.im)

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def __str__(self):
        return _gauss_str(self.re, self.im)


@dataclass(frozen=True, slots=True)
class GaussRational:
    """``(re + i*im) / den`` with ``den > 0`` and ``gcd(re, im, den) == 1``."""

    re: int
    im: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive; use GaussRational.make")
        if math.gcd(self.re, self.im, self.den) != 1:
            raise ValueError("unnormalized GaussRational; use GaussRational.make")

    @staticmethod
    def make(re: int, im: int, den: int = 1) -> "GaussRational":
        if den == 0:
            raise ZeroDivisionError("GaussRational with zero denominator")
        if den < 0:
            re, im, den = -re, -im, -den
        g = math.gcd(re, im, den)
        if g != 1:
            re, im, den = re // g, im // g, den // g
        return GaussRational(re, im, den)

    @staticmethod
    def of(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, GaussInt):
            return GaussRational.make(x.re, x.im, 1)
        if isinstance(x, int):
            return GaussRational(x, 0, 1)
        if isinstance(x, Fraction):
            return GaussRational.make(x.numerator, 0, x.denominator)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        raise TypeError(f"cannot convert {type(x).__name__} to GaussRational")

    @property
    def real(self) -> Fraction:
        return Fraction(self.re, self.den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im, self.den)

    def is_gauss_integer(self) -> bool:
        return self.den == 1

    def to_gauss_int(self) -> GaussInt:
        if self.den != 1:
            raise ValueError(f"{self} is not in Z[i]")
        return GaussInt(self.re, self.im)

    def __add__(self, other):
        try:
            o = GaussRational.of(other)
        except TypeError:
            return NotImplemented
        d = self.den * o.den
        return GaussRational.make(self.re * o.den + o.re * self.den, self.im * o.den + o.im * self.den, d)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im, self.den)

    def __sub__(self, other):
        try:
            o = GaussRational.of(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return GaussRational.of(other) - self

    def __mul__(self, other):
        try:
            o = GaussRational.of(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussRational.make(a * c - b * d, a * d + b * c, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussRational.of(other)
        except TypeError:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        # multiply by the conjugate so the denominator stays a rational integer
        c, d = o.re, -o.im
        a, b = self.re, self.im
        return GaussRational.make((a * c - b * d) * o.den, (a * d + b * c) * o.den, self.den * n)

    def __rtruediv__(self, other):
        return GaussRational.of(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return (GaussRational(1, 0, 1) / self) ** (-e)
        g = GaussInt(self.re, self.im) ** e
        return GaussRational.make(g.re, g.im, self.den**e)

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im, self.den)

    def __eq__(self, other):
        try:
            o = GaussRational.of(other)
        except TypeError:
            return NotImplemented
        return (self.re, self.im, self.den) == (o.re, o.im, o.den)

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(self.re, self.den))
        return hash((self.re, self.im, self.den))

    def __bool__(self):
        return bool(self.re or self.im)

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im}, {self.den})"

    def __str__(self):
        s = _gauss_str(self.re, self.im)
        return s if self.den == 1 else f"({s})/{int_str(self.den)}"


def _as_gauss(x):
    if isinstance(x, (GaussInt, GaussRational)):
        return x
    if isinstance(x, int):
        return GaussInt(x, 0)
    if isinstance(x, Fraction):
        return GaussRational.of(x)
    return NotImplemented


def int_str(x: int) -> str:
    """Decimal digits of ``x`` without the interpreter's length limit."""
    if _bigint is int:  # pragma: no cover
        return str(x)
    return _bigint(x).digits(10)


def frac_str(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return int_str(x.numerator)
    return f"{int_str(x.numerator)}/{int_str(x.denominator)}"


def _gauss_str(re: int, im: int) -> str:
    if im == 0:
        return int_str(re)
    if re == 0:
        return f"{int_str(im)}i"
    sign = "+" if im > 0 else "-"
    return f"{int_str(re)}{sign}{int_str(abs(im))}i"


# ---------------------------------------------------------------------------
# Integer polynomial kernels (Kronecker substitution)


def _pack(coeffs: Sequence[int], width: int):
    pos = b"".join((c if c > 0 else 0).to_bytes(width, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(width, "little") for c in coeffs)
    return _bigint(int.from_bytes(pos, "little")) - _bigint(int.from_bytes(neg, "little"))


def intpoly_mul(a: Sequence[int], b: Sequence[int], trunc: int | None = None) -> list[int]:
    """Product of two integer coefficient lists (ascending), optionally truncated.

    Coefficients are packed into one integer each, multiplied once and
    unpacked with signed digits.
    """
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if trunc is not None:
        n = min(n, trunc)
        if n <= 0:
            return []
        a, b = a[:n], b[:n]
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    if ma == 0 or mb == 0:
        return [0] * n
    if min(len(a), len(b)) <= 8:
        return _schoolbook(a, b, n)
    bound = ma * mb * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * width
    prod = int(_pack(a, width) * _pack(b, width))
    half = 1 << (bits - 1)
    offset = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * n, "little")
    q = (prod + offset) & ((1 << (bits * n)) - 1)
    raw = q.to_bytes(width * n, "little")
    frm = int.from_bytes
    return [frm(raw[i * width : (i + 1) * width], "little") - half for i in range(n)]


def _schoolbook(a, b, n):
    out = [0] * n
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def intpoly_pow(f: Sequence[int], e: int, trunc: int | None = None) -> list[int]:
    """``f**e`` for an integer polynomial with ``f[0] != 0``.

    Uses the linear recurrence satisfied by the coefficients of a power
    (``f * g' = e * f' * g``), so each coefficient costs ``deg f`` products.
    """
    if e < 0:
        raise ValueError("negative exponent")
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    if not f:
        return [] if e else [1]
    if f[0] == 0:
        raise ValueError("constant term must be nonzero")
    m = len(f) - 1
    total = m * e + 1
    if trunc is not None:
        total = min(total, trunc)
    g = [f[0] ** e]
    f0 = f[0]
    for k in range(1, total):
        acc = 0
        for i in range(1, min(m, k) + 1):
            fi = f[i]
            if fi:
                acc += ((e + 1) * i - k) * fi * g[k - i]
        q, r = divmod(acc, k * f0)
        if r:
            raise IntegrityError("power recurrence produced a non-integer coefficient")
        g.append(q)
    return g


def binomial_row(n: int, scale: int = 1, length: int | None = None) -> list[int]:
    """Coefficients of ``(x + scale)**n`` in ascending order of ``x``."""
    length = n + 1 if length is None else min(length, n + 1)
    out = []
    c = 1
    for k in range(length):
        out.append(c * scale ** (n - k))
        c = c * (n - k) // (k + 1)
    return out


# ---------------------------------------------------------------------------
# Polynomials with a basis tag


Scalar = Union[int, Fraction, GaussInt, GaussRational]


def _basis_name(shift) -> str:
    if not shift:
        return "x"
    return f"x+{shift}"


def _norm_coeff(c):
    if isinstance(c, GaussRational):
        if c.im == 0:
            return Fraction(c.re, c.den) if c.den != 1 else c.re
        return c
    if isinstance(c, GaussInt):
        return c.re if c.im == 0 else GaussRational.of(c)
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Dense polynomial ``sum c_k (x + shift)**k`` with exact coefficients.

    ``shift`` tags the basis: 0 for monomials in ``x``, 5 for the
    ``(x+5)``-basis, ``GaussInt(1, 2)`` for the ``(x+1+2i)``-basis.
    """

    __slots__ = ("coeffs", "shift")

    def __init__(self, coeffs: Iterable[Scalar], shift: Scalar = 0):
        cs = [_norm_coeff(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "shift", _norm_coeff(shift))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def basis(self) -> str:
        return _basis_name(self.shift)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.shift == other.shift and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.shift))

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r}, basis={self.basis!r})"

    def _check(self, other: "Poly"):
        if self.shift != other.shift:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other], self.shift)
        self._check(other)
        n = max(len(self), len(other))
        return Poly([self[k] + other[k] for k in range(n)], self.shift)

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.shift)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other], self.shift)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs], self.shift)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return Poly([], self.shift)
        if all(type(c) is int for c in self.coeffs) and all(type(c) is int for c in other.coeffs):
            return Poly(intpoly_mul(self.coeffs, other.coeffs), self.shift)
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.shift)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly([1], self.shift)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        u = x + self.shift
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.shift)

    def shift_basis(self, new_shift: Scalar) -> "Poly":
        """Re-express in the ``(x + new_shift)``-basis (exact Taylor shift)."""
        new_shift = _norm_coeff(new_shift)
        delta = self.shift - new_shift
        return Poly(taylor_shift(self.coeffs, delta), new_shift)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other)
        if dq < 0:
            return Poly([], self.shift), self
        lead = other.coeffs[-1]
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other) - 1]
            if c:
                q = _exact_quotient(c, lead)
                quot[k] = q
                for i, oc in enumerate(other.coeffs):
                    rem[k + i] = rem[k + i] - q * oc
        return Poly(quot, self.shift), Poly(rem[: len(other) - 1], self.shift)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InexactDivisionError(r)
        return q


def _exact_quotient(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    if isinstance(a, (GaussInt, GaussRational)) or isinstance(b, (GaussInt, GaussRational)):
        return _norm_coeff(GaussRational.of(a) / b)
    return Fraction(a) / b


def taylor_shift(coeffs: Sequence[Scalar], delta: Scalar) -> list:
    """Coefficients of ``p(u + delta)`` in ``u`` for ``p(w) = sum c_k w**k``.

    Repeated synthetic division; works over any exact ring in this module.
    """
    out = list(coeffs)
    n = len(out)
    if not delta:
        return out
    if isinstance(delta, (GaussInt, GaussRational)) and all(type(c) is int for c in out):
        return _taylor_shift_gauss(out, delta)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            out[k] = out[k] + delta * out[k + 1]
    return out


def _taylor_shift_gauss(coeffs: list[int], delta) -> list:
    # integer coefficients shifted by a Gaussian value: work on (re, im) pairs
    d = GaussRational.of(delta)
    if d.den != 1:
        return taylor_shift([GaussRational.of(c) for c in coeffs], d)
    dr, di = d.re, d.im
    re = list(coeffs)
    im = [0] * len(coeffs)
    n = len(re)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            ar, ai = re[k + 1], im[k + 1]
            re[k] += dr * ar - di * ai
            im[k] += dr * ai + di * ar
    return [GaussInt(r, m) if m else r for r, m in zip(re, im)]


# ---------------------------------------------------------------------------
# Truncated power series


@dataclass(frozen=True)
class TruncSeries:
    coeffs: tuple
    order: int
    center: str = "t"

    def __post_init__(self):
        if len(self.coeffs) != self.order:
            raise ValueError("coefficient count must equal the truncation order")

    @staticmethod
    def from_coeffs(coeffs: Iterable, order: int, center: str = "t") -> "TruncSeries":
        cs = list(coeffs)[:order]
        cs += [0] * (order - len(cs))
        return TruncSeries(tuple(_norm_coeff(c) for c in cs), order, center)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        if self.center != other.center:
            raise ValueError("series expanded at different points")
        k = min(self.order, other.order)
        out = [0] * k
        for i in range(k):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(k - i):
                out[i + j] += a * other.coeffs[j]
        return TruncSeries.from_coeffs(out, k, self.center)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        k = min(self.order, other.order)
        return TruncSeries.from_coeffs(
            [self.coeffs[i] + other.coeffs[i] for i in range(k)], k, self.center
        )


def series_binomial_recip(c, m: int, order: int, center: str = "t") -> TruncSeries:
    """``(c - t)**(-m)`` truncated to ``order`` terms.

    The coefficient of ``t**k`` is ``binom(m+k-1, k) * c**(-m-k)``.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not c:
        raise PoleError("expansion point is a pole")
    c = Fraction(c) if not isinstance(c, Fraction) else c
    inv = 1 / c
    coeffs = []
    b = 1
    p = inv**m
    for k in range(order):
        coeffs.append(b * p)
        b = b * (m + k) // (k + 1)
        p *= inv
    return TruncSeries.from_coeffs(coeffs, order, center)


def series_poly_power(coeffs: Sequence, m: int, order: int, center: str = "t") -> TruncSeries:
    """Truncated ``(sum coeffs[k] t**k)**m`` as a series."""
    s = TruncSeries.from_coeffs([1], order, center)
    base = TruncSeries.from_coeffs(coeffs, order, center)
    while m:
        if m & 1:
            s = s * base
        base = base * base
        m >>= 1
    return s


# ---------------------------------------------------------------------------
# Number-theoretic helpers


def is_prime(n: int) -> bool:
    """Deterministic primality for ``n < 3.3e24``; strong probable prime above."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def padic_order(x, p: int):
    """Exponent of the prime ``p`` in the nonzero rational ``x``; ``inf`` for 0."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if isinstance(x, GaussRational):
        raise TypeError("padic_order takes rationals; Gaussian values are not supported")
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _ord_int(x.numerator, p) - _ord_int(x.denominator, p)


def _ord_int(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def is_integer(x) -> bool:
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    if isinstance(x, GaussInt):
        return True
    if isinstance(x, GaussRational):
        return x.den == 1
    raise TypeError(f"unsupported scalar {type(x).__name__}")


# ---------------------------------------------------------------------------
# Float layer


def float_context(digits: int = DEFAULT_DIGITS) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context at ``digits`` decimal digits.

    Each call returns an independent context, so precision is never shared
    global state.
    """
    if digits < 1:
        raise ValueError("precision must be positive")
    ctx = mpmath.MPContext()
    ctx.dps = digits
    return ctx


def to_big(ctx, x):
    """Convert an exact scalar into ``ctx`` without premature rounding."""
    if isinstance(x, int):
        return ctx.mpf(x)
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, GaussInt):
        return ctx.mpc(x.re, x.im)
    if isinstance(x, GaussRational):
        return ctx.mpc(x.re, x.im) / x.den
    return ctx.convert(x)


def close(a, b, tol) -> bool:
    """Explicit-tolerance comparison for float-layer values."""
    return abs(a - b) <= tol
