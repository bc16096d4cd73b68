"""Dense linear algebra over a prime field F_l (l < 2^31), on int64 arrays."""

from __future__ import annotations

import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix


def rref(A, ell: int):
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=np.int64) % ell
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if not len(nz):
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, ell) % ell
        others = np.flatnonzero(R[:, c])
        others = others[others != r]
        if len(others):
            R[others] = (R[others] - np.outer(R[others, c], R[r])) % ell
        pivots.append(c)
        r += 1
    return R, pivots


def nullspace(A, ell: int) -> np.ndarray:
    """Basis of {x : A x = 0} as the columns of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, pivots = rref(A, ell)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, p in enumerate(pivots):
            basis[p, k] = (-R[i, f]) % ell
    return basis


def inverse(A, ell: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, pivots = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), ell)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix mod l")
    return R[:, n:]


def matmul(A, B, ell: int) -> np.ndarray:
    # entries < 2^31, so chunk the inner sum to stay inside int64
    A = np.asarray(A, dtype=np.int64) % ell
    B = np.asarray(B, dtype=np.int64) % ell
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, (2 ** 62) // max(1, (ell - 1) ** 2))
    for s in range(0, A.shape[1], step):
        out = (out + A[:, s:s + step] @ B[s:s + step]) % ell
    return out


def charpoly(A, ell: int) -> list:
    """Coefficients of det(x I - A), leading first."""
    K = GF(ell)
    A = np.asarray(A, dtype=np.int64) % ell
    n = A.shape[0]
    M = DomainMatrix([[K(int(v)) for v in row] for row in A], (n, n), K)
    return [int(c) % ell for c in M.charpoly()]


def roots(coeffs, ell: int) -> list:
    """All roots in F_l, ascending, by evaluating at every point."""
    xs = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for c in coeffs:
        acc = (acc * xs + c) % ell
    return np.flatnonzero(acc == 0).tolist()
