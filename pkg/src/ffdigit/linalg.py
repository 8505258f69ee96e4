"""Gaussian elimination over the prime field Z_p.

Matrices are anything ``numpy.asarray`` accepts; entries are reduced mod p
on the way in. All arithmetic is exact int64, which is safe as long as
p < 2**31 (products of two residues stay below 2**62).
"""

from __future__ import annotations

import numpy as np

from .errors import NoDependence


class SingularMatrix(ArithmeticError):
    pass


def _as_mod(M, p: int) -> np.ndarray:
    return np.array(M, dtype=np.int64, ndmin=2) % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p. Returns (R, pivot_columns)."""
    R = _as_mod(M, p)
    rows, cols = R.shape
    pivots: list[int] = []
    for col in range(cols):
        row = len(pivots)
        if row == rows:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        k = row + int(nz[0])
        if k != row:
            R[[row, k]] = R[[k, row]]
        R[row] = R[row] * pow(int(R[row, col]), -1, p) % p
        factors = R[:, col].copy()
        factors[row] = 0
        R -= np.outer(factors, R[row])
        R %= p
        pivots.append(col)
    return R, pivots


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def inverse(M, p: int) -> np.ndarray:
    A = _as_mod(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise SingularMatrix("matrix is not square")
    R, pivots = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular mod %d" % p)
    return R[:, n:]


def matmul(A, B, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def null_combination(vectors, p: int) -> tuple[int, ...]:
    """Return a nonzero a with sum_i a_i * vectors[i] == 0 over Z_p.

    The vectors become the columns of a matrix that is reduced column by
    column; elimination stops at the first column without a pivot. That
    free column gets coefficient 1, later columns 0, and the result is
    scaled so its first nonzero entry is 1. Same input order, same answer.

    Raises NoDependence when the vectors are independent.
    """
    V = np.array(vectors, dtype=np.int64, ndmin=2) % p
    s = V.shape[0]
    if s == 0:
        raise NoDependence("no vectors given")
    M = V.T.copy()
    L = M.shape[0]
    pivots: list[int] = []
    free = None
    for col in range(s):
        row = len(pivots)
        nz = np.nonzero(M[row:, col])[0] if row < L else np.empty(0, dtype=np.int64)
        if nz.size == 0:
            free = col
            break
        k = row + int(nz[0])
        if k != row:
            M[[row, k]] = M[[k, row]]
        M[row] = M[row] * pow(int(M[row, col]), -1, p) % p
        factors = M[:, col].copy()
        factors[row] = 0
        nzr = np.nonzero(factors)[0]
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(factors[nzr], M[row])) % p
        pivots.append(col)
    if free is None:
        raise NoDependence("the %d vectors are linearly independent mod %d" % (s, p))
    a = [0] * s
    a[free] = 1
    for row, col in enumerate(pivots):
        a[col] = int(-M[row, free]) % p
    lead = next(x for x in a if x)
    scale = pow(lead, -1, p)
    a = [x * scale % p for x in a]
    # cheap insurance: the combination must vanish exactly
    if np.any((np.asarray(a, dtype=np.int64) @ V) % p):
        raise AssertionError("null_combination produced a non-null combination")
    return tuple(a)
