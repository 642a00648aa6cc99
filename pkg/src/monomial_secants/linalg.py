"""Dense Gaussian elimination over F_p on int64 arrays.

Residues are kept in [0, p) with p < 2^31, so a product of two residues plus
one more residue never leaves int64.
"""
from __future__ import annotations

import numpy as np


def _as_mod(M, p: int) -> np.ndarray:
    A = np.atleast_2d(np.array(M, dtype=np.int64, copy=True))
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    return A % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``M`` mod ``p``.

    Returns the nonzero rows and their pivot columns.
    """
    A = _as_mod(M, p)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p: int) -> int:
    """Row rank of ``M`` over F_p (forward elimination only)."""
    A = _as_mod(M, p)
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        below = A[r + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            f = below[hit] * inv % p
            A[r + 1 + hit] = (A[r + 1 + hit] - np.outer(f, A[r])) % p
        r += 1
    return r


def intersect_rowspaces(A, B, p: int) -> np.ndarray:
    """Basis (in RREF) of rowspace(A) ∩ rowspace(B) by Zassenhaus' method."""
    A = _as_mod(A, p)
    B = _as_mod(B, p)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"column mismatch: {A.shape[1]} vs {B.shape[1]}")
    N = A.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, N), dtype=np.int64)
    block = np.vstack([np.hstack([A, A]), np.hstack([B, np.zeros_like(B)])])
    R, pivots = rref(block, p)
    # rows whose pivot lies in the right half have zero left half
    tail = R[[i for i, c in enumerate(pivots) if c >= N], N:]
    return rref(tail, p)[0] if tail.size else np.zeros((0, N), dtype=np.int64)
