"""Random signed digraphs for property checks and sweeps.

All generators take a ``numpy.random.Generator``. Weight magnitudes are drawn
from ``[wmin, wmax]`` with ``wmin > 0`` so every edge is clearly signed.
"""

import numpy as np

from .graphs import GraphClass, SignedDigraph, classify, connectivity


def strongly_connected_pattern(rng, n, density=0.3):
    """Boolean pattern containing a random Hamiltonian cycle plus extra edges."""
    M = rng.random((n, n)) < density
    if n > 1:
        perm = rng.permutation(n)
        M[perm, np.roll(perm, 1)] = True
    np.fill_diagonal(M, False)
    return M


def _magnitudes(rng, M, wmin, wmax):
    return np.where(M, rng.uniform(wmin, wmax, M.shape), 0.0)


def random_signs(rng, n):
    s = rng.choice([-1.0, 1.0], size=n)
    if n > 1 and abs(s.sum()) == n:
        s[rng.integers(n)] *= -1
    return s


def random_balanced(rng, n, density=0.3, wmin=0.5, wmax=5.0):
    """Strongly connected, structurally balanced; returns ``(graph, signs)``."""
    s = random_signs(rng, n)
    M = strongly_connected_pattern(rng, n, density)
    A = _magnitudes(rng, M, wmin, wmax) * np.outer(s, s)
    return SignedDigraph(A), s


def random_anti_balanced(rng, n, density=0.4, wmin=0.5, wmax=5.0, max_tries=1000):
    """Strongly connected, aperiodic, anti-balanced and not balanced."""
    for _ in range(max_tries):
        s = random_signs(rng, n)
        M = strongly_connected_pattern(rng, n, density)
        G = SignedDigraph(-_magnitudes(rng, M, wmin, wmax) * np.outer(s, s))
        if classify(G).kind is GraphClass.ANTI_BALANCED and connectivity(G).aperiodic:
            return G
    raise RuntimeError("no anti-balanced aperiodic graph found")


def random_follower_block(rng, r, m, density=0.4, wmin=0.5, wmax=5.0):
    """``(A21, A22)`` for ``m`` followers of an ``r``-agent leader block.

    Every follower listens to a leader or an earlier follower, so all of them
    are reachable from the leaders.
    """
    A21 = np.where(rng.random((m, r)) < density, rng.uniform(wmin, wmax, (m, r)), 0.0)
    A22 = np.where(rng.random((m, m)) < density, rng.uniform(wmin, wmax, (m, m)), 0.0)
    np.fill_diagonal(A22, 0.0)
    for k in range(m):
        src = rng.integers(r + k)
        w = rng.uniform(wmin, wmax)
        if src < r:
            A21[k, src] = w
        else:
            A22[k, src - r] = w
    A21 *= rng.choice([-1.0, 1.0], size=A21.shape)
    A22 *= rng.choice([-1.0, 1.0], size=A22.shape)
    return A21, A22


def random_weight_balanced_request(rng, n, density=0.4, wmin=0.5, wmax=5.0):
    """Graph, x0 and target xf for which ``diag(1/xf)`` gives a weight-balanced Az.

    ``Az`` is built as a positive combination of permutation matrices (so row
    sums equal column sums) and pulled back through ``P = diag(1/xf)``.
    """
    B = np.zeros((n, n))
    for _ in range(3):
        perm = rng.permutation(n)
        while n > 1 and np.any(perm == np.arange(n)):
            perm = rng.permutation(n)
        B[np.arange(n), perm] += rng.uniform(wmin, wmax)
    xf = random_signs(rng, n) * rng.uniform(1.0, 10.0, n)
    # Az = P A P^-1 with P = diag(1/xf)  =>  A = diag(xf) Az diag(1/xf)
    A = np.diag(xf) @ B @ np.diag(1.0 / xf)
    x0 = rng.uniform(-10.0, 10.0, n)
    # fix the last entry so that sum x0_i / xf_i = n
    x0[-1] = xf[-1] * (n - np.sum(x0[:-1] / xf[:-1]))
    return SignedDigraph(A), x0, xf
