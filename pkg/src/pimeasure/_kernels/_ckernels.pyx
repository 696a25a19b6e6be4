# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loop-bound kernels (GF(p) elimination, sieve)."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef unsigned long long u64

cdef extern from *:
    """
    static inline unsigned long long pim_mulmod(unsigned long long a,
                                                unsigned long long b,
                                                unsigned long long p) {
        return (unsigned long long)(((unsigned __int128)a * b) % p);
    }
    """
    u64 pim_mulmod(u64 a, u64 b, u64 p) nogil


cdef u64 _powmod(u64 a, u64 e, u64 p) nogil:
    cdef u64 r = 1
    while e:
        if e & 1:
            r = pim_mulmod(r, a, p)
        a = pim_mulmod(a, a, p)
        e >>= 1
    return r


def nullspace_mod(rows, Py_ssize_t ncols, p):
    cdef u64 P = p
    if p >= (1 << 63) or p < 2:
        raise ValueError("modulus must lie in [2, 2**63)")
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, c, rank = 0, piv
    cdef u64 *m = <u64 *> malloc(max(nrows * ncols, 1) * sizeof(u64))
    cdef Py_ssize_t *pivcol = <Py_ssize_t *> malloc(max(ncols, 1) * sizeof(Py_ssize_t))
    cdef u64 inv, f, t
    cdef u64 *rowr
    cdef u64 *rowi
    if m == NULL or pivcol == NULL:
        free(m)
        free(pivcol)
        raise MemoryError()
    try:
        for i in range(nrows):
            r = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = <u64> r[j]
        with nogil:
            for c in range(ncols):
                if rank == nrows:
                    break
                piv = -1
                for i in range(rank, nrows):
                    if m[i * ncols + c] != 0:
                        piv = i
                        break
                if piv < 0:
                    continue
                if piv != rank:
                    for j in range(ncols):
                        t = m[piv * ncols + j]
                        m[piv * ncols + j] = m[rank * ncols + j]
                        m[rank * ncols + j] = t
                rowr = m + rank * ncols
                inv = _powmod(rowr[c], P - 2, P)
                for j in range(ncols):
                    rowr[j] = pim_mulmod(rowr[j], inv, P)
                for i in range(nrows):
                    if i == rank:
                        continue
                    rowi = m + i * ncols
                    f = rowi[c]
                    if f == 0:
                        continue
                    f = P - f
                    for j in range(ncols):
                        if rowr[j]:
                            rowi[j] = (rowi[j] + pim_mulmod(f, rowr[j], P)) % P
                pivcol[rank] = c
                rank += 1
        pivset = set(pivcol[k] for k in range(rank))
        basis = []
        for fc in range(ncols):
            if fc in pivset:
                continue
            vec = [0] * ncols
            vec[fc] = 1
            for i in range(rank):
                t = m[i * ncols + fc]
                vec[pivcol[i]] = (P - t) % P
            basis.append(vec)
        return basis
    finally:
        free(m)
        free(pivcol)


def sieve(Py_ssize_t m):
    if m < 2:
        return []
    cdef unsigned char *flags = <unsigned char *> malloc(m + 1)
    cdef Py_ssize_t i, k
    if flags == NULL:
        raise MemoryError()
    try:
        memset(flags, 1, m + 1)
        flags[0] = 0
        flags[1] = 0
        i = 2
        with nogil:
            while i * i <= m:
                if flags[i]:
                    k = i * i
                    while k <= m:
                        flags[k] = 0
                        k += i
                i += 1
        return [k for k in range(m + 1) if flags[k]]
    finally:
        free(flags)
