"""Pure-Python reference versions of the loop-bound kernels."""

from __future__ import annotations


def nullspace_mod(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of the right nullspace of ``rows`` over GF(p).

    Entries must already be reduced into ``[0, p)``.  The basis is returned
    in reduced form: one vector per free column, with a 1 in that column.
    """
    m = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    nrows = len(m)
    for c in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for i in range(rank, nrows):
            if m[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        row = m[rank]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            row = [x * inv % p for x in row]
            m[rank] = row
        for i in range(nrows):
            if i == rank:
                continue
            f = m[i][c]
            if f:
                other = m[i]
                m[i] = [(x - f * y) % p for x, y in zip(other, row)]
        pivots.append(c)
        rank += 1
    pivset = set(pivots)
    basis = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        vec = [0] * ncols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-m[i][fc]) % p
        basis.append(vec)
    return basis


def sieve(m: int) -> list[int]:
    if m < 2:
        return []
    flags = bytearray([1]) * (m + 1)
    flags[0] = flags[1] = 0
    i = 2
    while i * i <= m:
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, m + 1, i)))
        i += 1
    return [k for k in range(m + 1) if flags[k]]
