"""Guessing and running linear recurrences with polynomial coefficients.

A recurrence of order ``r`` is ``sum_{k=0}^{r} p_k(n) u_{n+k} = 0``.  Candidate
``(r, d)`` pairs are tried in increasing order.  For each, the nullspace of
the linear system is found modulo several 62-bit primes (compiled kernel
when available), lifted by CRT and rational reconstruction, and the lifted
recurrence is then verified exactly over Q on every term.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._kernels import nullspace_mod
from .exactkernel import Poly, is_prime

log = logging.getLogger(__name__)

GUARD = 10


def _primes_below(bound: int, count: int) -> list[int]:
    out = []
    c = bound - 1
    while len(out) < count:
        if is_prime(c):
            out.append(c)
        c -= 2 if c % 2 else 1
    return out


_PRIMES = _primes_below(1 << 62, 64)


@dataclass(frozen=True)
class PRecurrence:
    """``coeffs[k]`` lists the integer coefficients of ``p_k`` (ascending in n)."""

    order: int
    coeffs: tuple[tuple[int, ...], ...]
    validated: tuple[int, int] = (0, -1)

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("need order+1 coefficient polynomials")
        if not any(self.coeffs[-1]):
            raise ValueError("leading polynomial p_r is identically zero")

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.coeffs) - 1

    def p(self, k: int, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs[k]):
            acc = acc * n + c
        return acc

    def polys(self) -> list[Poly]:
        return [Poly(c) for c in self.coeffs]

    def residual(self, terms: Sequence, n: int, offset: int = 0):
        """``sum p_k(n) u_{n+k}`` with ``terms[i] = u_{offset+i}``."""
        return sum(self.p(k, n) * terms[n - offset + k] for k in range(self.order + 1))

    def annihilates(self, terms: Sequence, offset: int = 0) -> bool:
        return all(self.residual(terms, n, offset) == 0 for n in range(offset, offset + len(terms) - self.order))

    def to_json(self) -> str:
        return json.dumps(
            {
                "order": self.order,
                "coeffs": [[str(c) for c in poly] for poly in self.coeffs],
                "validated": list(self.validated),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "PRecurrence":
        d = json.loads(text)
        return cls(
            int(d["order"]),
            tuple(tuple(int(c) for c in poly) for poly in d["coeffs"]),
            tuple(d["validated"]),
        )

    def normalized(self) -> "PRecurrence":
        """Divide out the integer content and make the leading coefficient of ``p_r`` positive."""
        g = 0
        for poly in self.coeffs:
            for c in poly:
                g = math.gcd(g, c)
        lead = [c for c in self.coeffs[-1] if c][-1]
        if lead < 0:
            g = -g
        return PRecurrence(self.order, tuple(tuple(c // g for c in poly) for poly in self.coeffs), self.validated)


# ---------------------------------------------------------------------------
# Guessing


def _to_mod(x, p: int) -> int:
    x = Fraction(x)
    return x.numerator % p * pow(x.denominator % p, -1, p) % p


def _system_mod(terms_mod, r, d, p, offset, nrows):
    rows = []
    for i in range(nrows):
        n = offset + i
        npow = [pow(n, e, p) for e in range(d + 1)]
        rows.append([npow[e] * terms_mod[i + k] % p for k in range(r + 1) for e in range(d + 1)])
    return rows


def _rational_reconstruct(a: int, m: int):
    """``x/y`` with ``x == a*y (mod m)`` and ``|x|, y <= sqrt(m/2)``, or None."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if math.gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)


def _normalize_mod(vec, p):
    for x in vec:
        if x:
            inv = pow(x, -1, p)
            return [y * inv % p for y in vec]
    return vec


def _unpack(vec_int, r, d) -> tuple[tuple[int, ...], ...]:
    polys = []
    for k in range(r + 1):
        poly = list(vec_int[k * (d + 1) : (k + 1) * (d + 1)])
        while poly and poly[-1] == 0:
            poly.pop()
        polys.append(tuple(poly))
    return tuple(polys)


def _try_candidate(terms, r, d, offset, guard, max_primes=48):
    U = (r + 1) * (d + 1)
    total_rows = len(terms) - r
    fit_rows = total_rows - guard
    if fit_rows < U - 1 or fit_rows <= 0:
        return None, "insufficient"
    residues = []
    modulus = 1
    previous = None
    for p in _PRIMES[:max_primes]:
        try:
            tm = [_to_mod(x, p) for x in terms]
        except ValueError:  # denominator divisible by p
            continue
        rows = _system_mod(tm, r, d, p, offset, total_rows)
        basis = nullspace_mod(rows[:fit_rows], U, p)
        if not basis:
            return None, "none"
        if len(basis) > 1:
            # more freedom than one recurrence: degree or order too large
            return None, "ambiguous"
        vec = _normalize_mod(basis[0], p)
        for row in rows[fit_rows:]:
            if sum(a * b for a, b in zip(row, vec)) % p:
                return None, "guard"
        if residues and len(residues[0]) != len(vec):
            return None, "none"
        residues.append(vec)
        # CRT-combine incrementally
        if previous is None:
            combined = vec
            modulus = p
        else:
            inv = pow(modulus % p, -1, p)
            combined = [c + modulus * ((x - c) * inv % p) for c, x in zip(previous, vec)]
            modulus *= p
        previous = combined
        fracs = [_rational_reconstruct(c, modulus) for c in combined]
        if any(f is None for f in fracs):
            continue
        den = math.lcm(*(f.denominator for f in fracs))
        ints = [int(f * den) for f in fracs]
        polys = _unpack(ints, r, d)
        if not any(polys[-1]):
            return None, "degenerate"
        rec = PRecurrence(r, polys)
        if rec.annihilates(terms, offset):
            return rec.normalized(), "ok"
    return None, "no-lift"


def guess(
    terms: Sequence,
    r_max: int = 4,
    d_max: int = 12,
    guard: int = GUARD,
    offset: int = 0,
    auto_raise: bool = True,
) -> PRecurrence | None:
    """Smallest ``(r, then d)`` recurrence annihilating ``terms``, or None.

    ``terms[i]`` is ``u_{offset+i}``.  A candidate needs at least
    ``(r+1)(d+1) + r + guard`` terms; the last ``guard`` equations are held
    out of the fit and must also vanish.  With ``auto_raise`` the degree keeps
    growing past ``d_max`` while enough terms remain.
    """
    terms = [Fraction(t) for t in terms]
    T = len(terms)
    for r in range(1, r_max + 1):
        d = 0
        while True:
            need = (r + 1) * (d + 1) + r + guard
            if need > T or (d > d_max and not auto_raise):
                break
            rec, status = _try_candidate(terms, r, d, offset, guard)
            log.debug("candidate r=%d d=%d: %s", r, d, status)
            if rec is not None:
                return PRecurrence(rec.order, rec.coeffs, (offset, offset + T - 1))
            d += 1
    return None


# ---------------------------------------------------------------------------
# Running and analysing recurrences


class SingularStepError(ZeroDivisionError):
    def __init__(self, n: int):
        super().__init__(f"leading coefficient p_r vanishes at n={n}")
        self.n = n


def extend(rec: PRecurrence, seed: Sequence, N: int, offset: int = 0) -> list[Fraction]:
    """Terms ``u_offset .. u_N`` by forward iteration from ``seed``."""
    r = rec.order
    if len(seed) < r:
        raise ValueError(f"need at least {r} seed terms")
    out = [Fraction(x) for x in seed]
    n = offset + len(out) - r
    while offset + len(out) - 1 < N:
        lead = rec.p(r, n)
        if lead == 0:
            raise SingularStepError(n)
        acc = sum(rec.p(k, n) * out[n - offset + k] for k in range(r))
        out.append(-acc / lead)
        n += 1
    return out[: N - offset + 1]


def indicial_polynomial(rec: PRecurrence) -> Poly:
    """``sum_k c_k N^k`` where ``c_k`` is the coefficient of ``n^D`` in ``p_k``.

    ``D`` is the common top degree; the result is content-normalized with a
    positive leading coefficient.
    """
    D = rec.degree
    while D >= 0:
        cs = [poly[D] if len(poly) > D else 0 for poly in rec.coeffs]
        if any(cs):
            break
        D -= 1  # only reachable for an all-zero top degree
    else:
        raise ValueError("degenerate recurrence: no nonzero coefficients")
    g = 0
    for c in cs:
        g = math.gcd(g, c)
    lead = [c for c in cs if c][-1]
    if lead < 0:
        g = -g
    return Poly([c // g for c in cs])
