"""Primes, lcm(1..m), and the prime-saving set with its product and quotient."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache

from ._kernels import sieve
from .exactkernel import IntegrityError, padic_order

_SIEVE_CACHE: list[int] = []
_SIEVE_LIMIT = 0


def primes_up_to(m: int) -> list[int]:
    """Sorted primes ``<= m``.  One sieve per process, grown on demand."""
    global _SIEVE_CACHE, _SIEVE_LIMIT
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > _SIEVE_LIMIT:
        limit = max(m, 2 * _SIEVE_LIMIT, 1024)
        _SIEVE_CACHE = sieve(limit)
        _SIEVE_LIMIT = limit
    return _SIEVE_CACHE[: bisect.bisect_right(_SIEVE_CACHE, m)]


@lru_cache(maxsize=64)
def lcm_upto(m: int) -> int:
    """Least common multiple of ``1..m`` (1 for the empty range)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = 1
    for p in primes_up_to(m):
        pk = p
        while pk * p <= m:
            pk *= p
        out *= pk
    return out


def in_saving_set(n: int, p: int) -> bool:
    """``p > max(5, sqrt(3n))`` and ``1/2 <= {n/p} < 2/3``, in integers."""
    if p <= 5 or p * p <= 3 * n:
        return False
    r = n % p
    return 2 * r >= p and 3 * r < 2 * p


@dataclass(frozen=True)
class SavingData:
    n: int
    primes_P: tuple[int, ...]
    phi: int
    L: int
    lcm4n: int


def prime_set_P(n: int) -> SavingData:
    """The saving primes for index ``n``, their product and ``lcm(1..4n)/product``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    ps = tuple(p for p in primes_up_to(2 * n) if in_saving_set(n, p))
    phi = math.prod(ps)
    lcm4n = lcm_upto(4 * n)
    L, rem = divmod(lcm4n, phi)
    if rem:
        raise IntegrityError(f"saving product {phi} does not divide lcm(1..{4 * n})")
    for p in ps:
        if padic_order(phi, p) != 1:
            raise IntegrityError(f"prime {p} divides the saving product more than once")
    return SavingData(n, ps, phi, L, lcm4n)


def phi_limit_float() -> float:
    """Limit of ``log(Phi_n)/n``: ``pi/(2 sqrt 3) - log(3 sqrt 3 / 4)``."""
    return math.pi / (2 * math.sqrt(3)) - math.log(3 * math.sqrt(3) / 4)


def phi_growth(n_max: int, step: int = 1, n_min: int = 1) -> list[tuple[int, float]]:
    """Samples ``(n, log(Phi_n)/n)`` for ``n = n_min, n_min+step, ..., <= n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    primes = [p for p in primes_up_to(2 * n_max) if p > 5]
    logs = {p: math.log(p) for p in primes}
    out = []
    for n in range(max(1, n_min), n_max + 1, step):
        total = 0.0
        for p in primes:
            if p > 2 * n:
                break
            if in_saving_set(n, p):
                total += logs[p]
        out.append((n, total / n))
    return out
