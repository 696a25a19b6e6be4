import os
from fractions import Fraction

import pytest

from pimeasure.exactkernel import float_context
from pimeasure.familysearch import (
    FamilyResult,
    ScanReport,
    best_ab,
    family_form,
    scan_family,
)
from pimeasure.linforms import LinearForm, delta_empirical

from .conftest import classic


def displayed_integral(A, B, n, digits=50):
    """Quadrature of the family integral exactly as displayed, on ``4-2i .. 4+2i``."""
    ctx = float_context(digits)
    e, v = 2 * A * n, 2 * B * n + 1

    def f(t):
        x = ctx.mpc(4, t)
        num = (x - 4 + 2j) ** e * (x - 4 - 2j) ** e * (x - 5) ** e * (x - 6 + 2j) ** e * (x - 6 - 2j) ** e
        return num / (x**v * (x - 10) ** v) * 1j

    return -1j * ctx.quad(f, [-2, 0, 2]), ctx


@pytest.mark.parametrize("A,B,n", [(3, 5, 0), (3, 5, 1), (2, 3, 2), (7, 10, 1), (1, 10, 1)])
def test_family_form_matches_displayed_integral(A, B, n):
    ref, ctx = displayed_integral(A, B, n)
    val = family_form(A, B, n).value(50)
    assert abs(ref.imag) < ctx.mpf(10) ** -40
    assert abs(val - ref.real) <= ctx.mpf(10) ** -40 * max(1, abs(ref.real))


def test_family_n0():
    f = family_form(3, 5, 0)
    assert (f.a, f.b) == (0, Fraction(-1, 20))


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_family_23_is_classic_at_double_index(n):
    f = family_form(2, 3, n)
    g = classic(2 * n)
    assert (f.a, f.b) == (g.a * Fraction(-1, 5), g.b * Fraction(-1, 5))
    assert delta_empirical(f).delta == delta_empirical(g).delta


def test_delta_invariant_under_prefactor():
    f = family_form(3, 5, 12)
    g = LinearForm(f.n, f.a * Fraction(7, 3), f.b * Fraction(7, 3))
    assert delta_empirical(f).delta == delta_empirical(g).delta


def test_useless_flag_and_ranking():
    fams = {
        (1, 1): FamilyResult(1, 1, {5: "-0.2", 6: "0.1"}),
        (2, 3): FamilyResult(2, 3, {5: "0.30", 6: "0.22"}),
        (3, 5): FamilyResult(3, 5, {5: "0.25", 6: "0.21"}),
        (1, 9): FamilyResult(1, 9, {5: None, 6: None}),
    }
    rep = ScanReport(3, 9, 5, 6, fams)
    assert [(f.A, f.B) for f in rep.ranking()] == [(2, 3), (3, 5)]
    assert fams[(1, 1)].useless and fams[(1, 9)].useless
    assert rep.summary()["useless"] == [[1, 1], [1, 9]]


def test_small_scan_is_deterministic(tmp_path):
    r1 = best_ab(2, 3, 5, 6)
    r2 = best_ab(2, 3, 5, 6, cache_dir=tmp_path)
    r3 = best_ab(2, 3, 5, 6, cache_dir=tmp_path)  # served from the cache
    assert r1.to_csv() == r2.to_csv() == r3.to_csv()
    assert r1.to_json() == r2.to_json()
    lines = r1.to_csv().splitlines()
    assert lines[0] == "A,B,n,delta"
    assert len(lines) == 1 + 5 * 2  # (2,2) is skipped as non-primitive
    assert (2, 2) not in r1.families


def test_scan_monotone_sanity():
    # a positive delta means the reduced form really shrinks relative to q
    res = scan_family(2, 3, 20, 22)
    for n, d in res.deltas.items():
        f = family_form(2, 3, n)
        assert (float(d) > 0) == (abs(f.value(30)) < 1)


def test_accelerate_falls_back_to_direct():
    res = scan_family(3, 5, 30, 31, accelerate=True)
    assert res.method in ("recurrence", "direct-fallback")
    direct = scan_family(3, 5, 30, 31)
    assert res.deltas == direct.deltas


def test_scan_argument_validation():
    with pytest.raises(ValueError):
        best_ab(0, 3, 5, 6)
    with pytest.raises(ValueError):
        best_ab(2, 3, 7, 6)


PUBLISHED = {
    (2, 3): "0.16605428729395818514",
    (3, 5): "0.15727140930557009691",
    (5, 8): "0.15701995819256081077",
    (8, 13): "0.15586354092162189848",
    (7, 10): "0.12451550531454231901",
}


@pytest.mark.slow
@pytest.mark.parametrize("ab", list(PUBLISHED))
def test_published_min_deltas_exact(ab):
    res = scan_family(*ab, 290, 300, cache_dir=os.environ.get("PIMEASURE_CACHE_DIR"))
    assert res.min_delta_str == PUBLISHED[ab]
