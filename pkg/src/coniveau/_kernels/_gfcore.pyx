# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction over prime fields.

This is the hot inner loop of the whole package: every per-degree normal
form, Hilbert dimension and ideal-membership test reduces to one call of
``rref_inplace``.  A pure numpy implementation with the same contract lives
in ``_pyref.py``; ``coniveau._kernels`` picks whichever is importable.
"""


cdef long long _modinv(long long x, long long p):
    # Fermat: x^(p-2) mod p, p prime, 0 < x < p.
    cdef long long result = 1
    cdef long long base = x % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rref_inplace(long long[:, :] a, long long p):
    """Reduce ``a`` to reduced row echelon form mod ``p`` in place.

    Entries must already lie in ``[0, p)``.  Returns the list of pivot
    column indices; the first ``len(pivots)`` rows carry the echelon basis.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, i, j, r
    cdef long long inv, factor, tmp
    pivots = []
    for col in range(n):
        if rank == m:
            break
        r = -1
        for i in range(rank, m):
            if a[i, col] != 0:
                r = i
                break
        if r < 0:
            continue
        if r != rank:
            for j in range(col, n):
                tmp = a[rank, j]
                a[rank, j] = a[r, j]
                a[r, j] = tmp
        if a[rank, col] != 1:
            inv = _modinv(a[rank, col], p)
            for j in range(col, n):
                a[rank, j] = (a[rank, j] * inv) % p
        for i in range(m):
            if i == rank:
                continue
            factor = a[i, col]
            if factor != 0:
                # p - factor keeps every intermediate non-negative, so the
                # C '%' (truncated division) agrees with the field residue.
                factor = p - factor
                for j in range(col, n):
                    a[i, j] = (a[i, j] + factor * a[rank, j]) % p
        pivots.append(col)
        rank += 1
    return pivots
