"""Numpy fallback for the compiled row-reduction kernel.

Same contract as ``_gfcore.rref_inplace``; used automatically when the
extension was not built (or when CONIVEAU_KERNEL=python forces it).
"""

from __future__ import annotations

import numpy as np


def rref_inplace(a: np.ndarray, p: int) -> list[int]:
    """Reduced row echelon form mod p, in place. Returns pivot columns."""
    m, n = a.shape
    rank = 0
    pivots: list[int] = []
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            a[[rank, r]] = a[[r, rank]]
        lead = int(a[rank, col])
        if lead != 1:
            a[rank, col:] = (a[rank, col:] * pow(lead, p - 2, p)) % p
        colvals = a[:, col].copy()
        colvals[rank] = 0
        rows = np.nonzero(colvals)[0]
        if rows.size:
            a[np.ix_(rows, range(col, n))] = (
                a[np.ix_(rows, range(col, n))]
                + np.outer(p - colvals[rows], a[rank, col:])
            ) % p
        pivots.append(col)
        rank += 1
    return pivots
