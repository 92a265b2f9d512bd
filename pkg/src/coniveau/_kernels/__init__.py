"""Exact linear algebra over F_p: compiled kernel with numpy fallback.

The only primitive is reduced row echelon form; rank, vector reduction and
nullspace extraction are thin Python wrappers around it.  Matrices are
int64 numpy arrays with entries in [0, p).
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("CONIVEAU_KERNEL", "").lower() in ("py", "python", "numpy"):
    from ._pyref import rref_inplace

    BACKEND = "numpy"
else:
    try:
        from ._gfcore import rref_inplace  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from ._pyref import rref_inplace  # type: ignore[no-redef]

        BACKEND = "numpy"


def backend_name() -> str:
    return BACKEND


def as_matrix(rows, ncols: int) -> np.ndarray:
    """Stack coefficient rows (iterables of int) into an int64 matrix."""
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (a copy) with zero rows trimmed."""
    work = np.array(mat, dtype=np.int64, copy=True)
    if work.size == 0:
        return work.reshape(0, mat.shape[1] if mat.ndim == 2 else 0), []
    pivots = rref_inplace(work, p)
    return work[: len(pivots)], pivots


def rank(mat: np.ndarray, p: int) -> int:
    return len(rref(mat, p)[1])


def reduce_vector(vec: np.ndarray, R: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Eliminate the pivot coordinates of ``vec`` against rref rows ``R``."""
    if not pivots:
        return vec % p
    coeffs = vec[pivots]
    if not coeffs.any():
        return vec % p
    return (vec - coeffs @ R) % p


def nullspace(mat: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right nullspace, one vector per free column."""
    ncols = mat.shape[1]
    R, pivots = rref(mat, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = np.zeros(ncols, dtype=np.int64)
        v[free] = 1
        for k, c in enumerate(pivots):
            v[c] = (-int(R[k, free])) % p
        basis.append(v)
    return basis
