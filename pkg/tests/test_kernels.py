import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pimeasure import _kernels

P = (1 << 61) - 1
BACKENDS = [_kernels.python] + ([_kernels.compiled] if _kernels.compiled is not None else [])


def _matmul_zero(rows, vec, p):
    return all(sum(a * b for a, b in zip(r, vec)) % p == 0 for r in rows)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_nullspace_known_kernel(impl):
    p = 101
    rows = [[1, 2, 3], [2, 4, 6]]
    basis = impl.nullspace_mod(rows, 3, p)
    assert len(basis) == 2
    for vec in basis:
        assert _matmul_zero(rows, vec, p)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_full_rank_has_trivial_kernel(impl):
    assert impl.nullspace_mod([[1, 0], [0, 1]], 2, 7) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32))
def test_backends_agree(nrows, ncols, seed):
    rng = random.Random(seed)
    rank = rng.randint(0, min(nrows, ncols))
    # product of random factors gives a matrix of controlled rank
    left = [[rng.randrange(P) for _ in range(rank)] for _ in range(nrows)]
    right = [[rng.randrange(P) for _ in range(ncols)] for _ in range(rank)]
    rows = [[sum(l[k] * right[k][c] for k in range(rank)) % P for c in range(ncols)] for l in left]
    ref = _kernels.python.nullspace_mod(rows, ncols, P)
    for vec in ref:
        assert _matmul_zero(rows, vec, P)
    for impl in BACKENDS[1:]:
        assert impl.nullspace_mod(rows, ncols, P) == ref


def test_backend_selection():
    assert _kernels.BACKEND in ("cython", "python")
    assert (_kernels.BACKEND == "cython") == (_kernels.compiled is not None)
