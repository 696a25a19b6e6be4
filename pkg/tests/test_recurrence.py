from fractions import Fraction
from math import factorial

import pytest

from pimeasure.exactkernel import Poly
from pimeasure.recurrence import (
    PRecurrence,
    SingularStepError,
    extend,
    guess,
    indicial_polynomial,
)

from .conftest import classic

IND = Poly([-2048, 138304, -2359989, 108])


@pytest.fixture(scope="module")
def b_terms():
    return [classic(n).b for n in range(81)]


@pytest.fixture(scope="module")
def b_rec(b_terms):
    rec = guess(b_terms[:60])
    assert rec is not None
    return rec


def test_trivial_guesses():
    rec = guess([2**n for n in range(20)], r_max=2, d_max=2)
    assert rec.order == 1 and rec.coeffs == ((-2,), (1,))
    rec = guess([factorial(n) for n in range(20)])
    assert rec.order == 1 and rec.coeffs == ((-1, -1), (1,))


def test_not_found_is_explicit():
    import random

    rng = random.Random(5)
    assert guess([Fraction(rng.randrange(1, 10**9), rng.randrange(1, 10**9)) for _ in range(30)], r_max=2, d_max=3) is None


def test_b_recurrence_shape(b_rec):
    assert b_rec.order == 3
    assert b_rec.validated == (0, 59)


def test_b_indicial_polynomial(b_rec):
    ind = indicial_polynomial(b_rec)
    assert ind == IND


def test_recurrence_holds_beyond_fit(b_rec, b_terms):
    assert b_rec.annihilates(b_terms)  # 21 fresh terms past the fitting window


def test_same_recurrence_for_a(b_rec):
    a_terms = [classic(n).a for n in range(60)]
    assert guess(a_terms).coeffs == b_rec.coeffs


def test_extend_matches_direct(b_rec, b_terms):
    ext = extend(b_rec, b_terms[:60], 120)
    assert len(ext) == 121
    assert ext[:60] == b_terms[:60]
    assert ext[80] == b_terms[80]
    assert ext[120] == classic(120).b


def test_poincare_perron_ratio(b_rec, b_terms):
    ext = extend(b_rec, b_terms[:3], 201)
    ratio = abs(ext[201] / ext[200])
    assert abs(float(ratio) / 21851.691396 - 1) < 0.01


def test_extend_trivial():
    const = PRecurrence(1, ((-1,), (1,)))
    assert extend(const, [7], 5) == [7] * 6
    geo = PRecurrence(1, ((-2,), (1,)))
    assert extend(geo, [1], 10)[10] == 1024


def test_extend_singular_step():
    # (n - 3) u_{n+1} = u_n stalls at n = 3
    rec = PRecurrence(1, ((-1,), (-3, 1)))
    with pytest.raises(SingularStepError) as exc:
        extend(rec, [1], 10)
    assert exc.value.n == 3


def test_indicial_trivial():
    assert indicial_polynomial(PRecurrence(1, ((-2,), (1,)))) == Poly([-2, 1])
    assert indicial_polynomial(PRecurrence(2, ((-1,), (), (1,)))) == Poly([-1, 0, 1])
    # content and sign are normalized
    assert indicial_polynomial(PRecurrence(1, ((4,), (-2,)))) == Poly([-2, 1])


def test_json_round_trip(b_rec):
    again = PRecurrence.from_json(b_rec.to_json())
    assert again == b_rec


def test_invalid_recurrences():
    with pytest.raises(ValueError):
        PRecurrence(2, ((1,), (1,)))
    with pytest.raises(ValueError):
        PRecurrence(1, ((1,), (0, 0)))
