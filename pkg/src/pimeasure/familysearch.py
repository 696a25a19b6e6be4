"""The two-parameter family of integrals and the scan over its exponents.

``I_{A,B}(n)`` uses ``x^{2An}`` times the four Gaussian factors each to the
``2An`` and ``(25 - x^2)^{2Bn+1}`` below, scaled by ``-1/5`` relative to
the classic normalization.  The scan ranks families by their smallest
empirical delta over an index window.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .cache import TermCache
from .construction import IntegrandParams
from .linforms import LinearForm, delta_empirical, form_from_params
from .recurrence import extend, guess

log = logging.getLogger(__name__)

FAMILY_SCALE = Fraction(-1, 5)
DELTA_DIGITS = 30
REPORT_DIGITS = 20
ACCEL_TERMS = 80


def family_form(A: int, B: int, n: int, cache: TermCache | None = None) -> LinearForm:
    """Exact ``(a, b)`` with ``I_{A,B}(n) = a + b*pi``."""
    params = IntegrandParams.family(A, B, n)
    if cache is not None:
        rec = cache.get((A, B), n, params.s, params.v)
        if rec is not None:
            return LinearForm(n, rec.a, rec.b, "cache", params)
    form = form_from_params(params, ("x",), n=n).scale(FAMILY_SCALE)
    if cache is not None:
        cache.put((A, B), n, params.s, params.v, form.a, form.b)
    return form


def _fmt(x) -> str | None:
    if x is None:
        return None
    return mpmath.nstr(x, REPORT_DIGITS, strip_zeros=False)


@dataclass
class FamilyResult:
    A: int
    B: int
    deltas: dict[int, str | None] = field(default_factory=dict)
    method: str = "direct"
    partial: bool = False

    @property
    def min_delta(self) -> float | None:
        vals = [float(d) for d in self.deltas.values() if d is not None]
        return min(vals) if vals else None

    @property
    def min_delta_str(self) -> str | None:
        pairs = [(float(d), d) for d in self.deltas.values() if d is not None]
        return min(pairs)[1] if pairs else None

    @property
    def useless(self) -> bool:
        m = self.min_delta
        return m is None or m <= 0


@dataclass
class ScanReport:
    A_max: int
    B_max: int
    n_lo: int
    n_hi: int
    families: dict[tuple[int, int], FamilyResult]

    def ranking(self) -> list[FamilyResult]:
        """Non-useless families by descending min delta; ties broken by ``(A, B)``."""
        good = [f for f in self.families.values() if not f.useless]
        return sorted(good, key=lambda f: (-f.min_delta, f.A, f.B))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["A", "B", "n", "delta"])
        for (A, B) in sorted(self.families):
            fam = self.families[(A, B)]
            for n in sorted(fam.deltas):
                d = fam.deltas[n]
                w.writerow([A, B, n, "" if d is None else d])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "A_max": self.A_max,
            "B_max": self.B_max,
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "ranking": [
                {"A": f.A, "B": f.B, "min_delta": f.min_delta_str, "method": f.method, "partial": f.partial}
                for f in self.ranking()
            ],
            "useless": [[f.A, f.B] for f in sorted(self.families.values(), key=lambda f: (f.A, f.B)) if f.useless],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def _accelerated_terms(A: int, B: int, n_lo: int, n_hi: int, cache) -> dict[int, LinearForm] | None:
    """Guess recurrences for ``a_n`` and ``b_n`` from direct terms and extend.

    Returns None when guessing fails or a spot check disagrees.
    """
    m = min(ACCEL_TERMS, n_lo)
    direct = [family_form(A, B, n, cache) for n in range(m + 1)]
    ra = guess([f.a for f in direct], r_max=4, d_max=16)
    rb = guess([f.b for f in direct], r_max=4, d_max=16)
    if ra is None or rb is None:
        return None
    try:
        a_ext = extend(ra, [f.a for f in direct], n_hi)
        b_ext = extend(rb, [f.b for f in direct], n_hi)
    except ZeroDivisionError:
        return None
    rng = random.Random(1000 * A + B)
    for n in rng.sample(range(n_lo, n_hi + 1), min(3, n_hi - n_lo + 1)):
        f = family_form(A, B, n, cache)
        if (f.a, f.b) != (a_ext[n], b_ext[n]):
            log.warning("extension for (%d,%d) disagrees with direct construction at n=%d", A, B, n)
            return None
    return {n: LinearForm(n, a_ext[n], b_ext[n], "recurrence", IntegrandParams.family(A, B, n)) for n in range(n_lo, n_hi + 1)}


def scan_family(A: int, B: int, n_lo: int, n_hi: int, accelerate: bool = False, cache_dir: str | None = None) -> FamilyResult:
    cache = TermCache(cache_dir) if cache_dir else None
    result = FamilyResult(A, B)
    forms = None
    if accelerate:
        forms = _accelerated_terms(A, B, n_lo, n_hi, cache)
        if forms is not None:
            result.method = "recurrence"
        else:
            result.method = "direct-fallback"
    if forms is None:
        forms = {n: family_form(A, B, n, cache) for n in range(n_lo, n_hi + 1)}
    for n in range(n_lo, n_hi + 1):
        f = forms[n]
        if f.b == 0:
            result.deltas[n] = None
            continue
        d = delta_empirical(f, digits=DELTA_DIGITS)
        result.deltas[n] = _fmt(d.delta)
    return result


def _scan_job(args):
    return scan_family(*args)


def best_ab(
    A_max: int,
    B_max: int,
    n_lo: int,
    n_hi: int,
    jobs: int = 1,
    accelerate: bool = False,
    cache_dir: str | os.PathLike | None = None,
    families: list[tuple[int, int]] | None = None,
    primitive_only: bool = True,
) -> ScanReport:
    """Scan ``1 <= A <= A_max``, ``1 <= B <= B_max`` over ``n_lo <= n <= n_hi``.

    ``I_{kA,kB}(n) = I_{A,B}(kn)``, so by default only coprime pairs are
    scanned; the others merely resample a primitive family further out.
    """
    if A_max < 1 or B_max < 1:
        raise ValueError("A_max and B_max must be positive")
    if not 1 <= n_lo <= n_hi:
        raise ValueError("need 1 <= n_lo <= n_hi")
    keys = families or [
        (A, B)
        for A in range(1, A_max + 1)
        for B in range(1, B_max + 1)
        if not primitive_only or math.gcd(A, B) == 1
    ]
    cdir = str(cache_dir) if cache_dir else None
    work = [(A, B, n_lo, n_hi, accelerate, cdir) for A, B in keys]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_job, work))
    else:
        results = [_scan_job(w) for w in work]
    return ScanReport(A_max, B_max, n_lo, n_hi, {(r.A, r.B): r for r in results})
