"""Dense linear algebra over Z/ellZ (ell prime)."""
from __future__ import annotations

import numpy as np

from .errors import DomainError

_SMALL = 1 << 31


def as_mod_array(rows, ell):
    """numpy array of residues; int64 when products cannot overflow."""
    dtype = np.int64 if ell < _SMALL else object
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=object)
    a = a % ell
    return a.astype(dtype)


def rref(rows, ell):
    """Reduced row echelon form mod ell; returns (matrix, pivot columns)."""
    A = as_mod_array(rows, ell).copy()
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c] != 0)[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, ell)
        A[r] = (A[r] * inv) % ell
        col = A[:, c].copy()
        col[r] = 0
        rows_nz = np.nonzero(col != 0)[0]
        if len(rows_nz):
            A[rows_nz] = (A[rows_nz] - np.outer(col[rows_nz], A[r])) % ell
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod(rows, ell) -> int:
    if len(rows) == 0:
        return 0
    return len(rref(rows, ell)[1])


def kernel_mod(rows, ell, ncols=None):
    """Basis of the right kernel {x : A x = 0} as a list of residue lists."""
    A = as_mod_array(rows, ell) if len(rows) else np.zeros((0, ncols or 0), dtype=np.int64)
    n = A.shape[1]
    R, piv = rref(A, ell)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(piv):
            v[pc] = int(-R[i, fc]) % ell
        basis.append(v)
    return basis


def inverse_mod(rows, ell):
    A = as_mod_array(rows, ell)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DomainError("inverse needs a square matrix")
    aug = np.concatenate([A, np.eye(n, dtype=A.dtype)], axis=1)
    R, piv = rref(aug, ell)
    if piv[:n] != list(range(n)):
        raise DomainError("matrix is singular mod ell")
    return [[int(x) for x in row] for row in R[:, n:]]


def matmul_mod(A, B, ell):
    return [[sum(a * b for a, b in zip(row, col)) % ell for col in zip(*B)] for row in A]
