"""Gauss-Jordan elimination with complete pivoting.

Used wherever a rank decision has to be made explicitly (invertibility of a
transform, null vectors of a Laplacian) instead of trusting an SVD cutoff.
"""

import numpy as np


def _scale(M):
    m = np.max(np.abs(M)) if M.size else 0.0
    return max(1.0, float(m))


def eliminate(M, tol=1e-10):
    """Reduce ``M`` to ``[I F; 0 0]`` form under a column permutation.

    Pivots smaller than ``tol * max(1, max|M|)`` count as zero.

    Returns
    -------
    R : ndarray
        Reduced matrix in permuted column order.
    cols : ndarray
        Column permutation; column ``k`` of ``R`` is column ``cols[k]`` of ``M``.
    rank : int
    """
    R = np.array(M, dtype=float, copy=True)
    m, n = R.shape
    cols = np.arange(n)
    thresh = tol * _scale(R)
    rank = 0
    for k in range(min(m, n)):
        sub = np.abs(R[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= thresh:
            break
        i += k
        j += k
        R[[k, i]] = R[[i, k]]
        R[:, [k, j]] = R[:, [j, k]]
        cols[[k, j]] = cols[[j, k]]
        R[k] /= R[k, k]
        others = np.arange(m) != k
        R[others] -= np.outer(R[others, k], R[k])
        R[others, k] = 0.0
        rank += 1
    R[rank:] = 0.0
    return R, cols, rank


def rank(M, tol=1e-10):
    return eliminate(M, tol)[2]


def null_space(M, tol=1e-10):
    """Basis of the right null space of ``M``, one vector per column."""
    R, cols, r = eliminate(M, tol)
    n = R.shape[1]
    basis = np.zeros((n, n - r))
    basis[:r] = -R[:r, r:]
    basis[r:] = np.eye(n - r)
    out = np.empty_like(basis)
    out[cols] = basis
    return out
