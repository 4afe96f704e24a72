"""Transform matrices P and the modified out-degree / Laplacian they induce.

For a member P (invertible, ``P A P^-1 >= 0``) the flow in ``z = P x``
coordinates is an ordinary Laplacian flow on the nonnegative graph
``Az = P A P^-1``. The out-degree there is ``theta_z = diag(row sums of Az)``
and the modified out-degree in opinion coordinates is
``theta_x = P^-1 theta_z P``.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _linalg
from .errors import (ClassError, ConstraintError, DesignError, MembershipError,
                     SignPatternError, SingularTransformError)
from .graphs import GraphClass, classify, connectivity

MEMBERSHIP_TOL = 1e-12
PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class TransformMatrix:
    P: np.ndarray
    kind: str = "full"              # "diagonal", "full" or "block"
    r: int | None = None            # leader size for block kind
    tol: float = MEMBERSHIP_TOL

    def __post_init__(self):
        P = np.array(self.P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise DesignError(f"P must be square, got shape {P.shape}")
        if self.kind not in ("diagonal", "full", "block"):
            raise DesignError(f"unknown transform kind {self.kind!r}")
        if self.kind == "diagonal" and np.any(P != np.diag(np.diag(P))):
            raise DesignError("diagonal transform has off-diagonal entries")
        if self.kind == "block":
            r = self.r
            if r is None or not 0 < r <= P.shape[0]:
                raise DesignError(f"block transform needs 0 < r <= n, got r={r}")
            if np.any(P[:r, r:] != 0) or np.any(P[r:, :r] != 0):
                raise DesignError("block transform has nonzero off-diagonal blocks")
        P.flags.writeable = False
        object.__setattr__(self, "P", P)

    @classmethod
    def diagonal(cls, values, tol=MEMBERSHIP_TOL):
        return cls(np.diag(np.asarray(values, dtype=float)), kind="diagonal", tol=tol)

    @property
    def n(self):
        return self.P.shape[0]

    def is_invertible(self):
        return _linalg.rank(self.P, PIVOT_TOL) == self.n

    def inverse(self):
        if not self.is_invertible():
            raise SingularTransformError("transform P is singular")
        if self.kind == "diagonal":
            return np.diag(1.0 / np.diag(self.P))
        return np.linalg.inv(self.P)


def _as_transform(P):
    return P if isinstance(P, TransformMatrix) else TransformMatrix(P)


def similarity(A, P):
    """``P A P^-1`` for a :class:`TransformMatrix`."""
    P = _as_transform(P)
    return P.P @ np.asarray(A, dtype=float) @ P.inverse()


def check_membership(A, P):
    """True iff P is invertible and every entry of ``P A P^-1`` is >= -tol.

    A singular P raises :class:`SingularTransformError` rather than
    returning False.
    """
    P = _as_transform(P)
    A = np.asarray(A, dtype=float)
    if A.shape != P.P.shape:
        raise DesignError(f"P has shape {P.P.shape}, adjacency has {A.shape}")
    Az = similarity(A, P)
    return bool(np.all(Az >= -P.tol))


def gauge_design(cert, magnitudes, n=None):
    """Diagonal P with +m_i on V1 and -m_i on V2, normalised so ``p_1 > 0``."""
    if cert.kind not in (GraphClass.UNSIGNED, GraphClass.BALANCED):
        raise ClassError(f"gauge design needs an unsigned or balanced graph, got {cert.kind.value}")
    m = np.asarray(magnitudes, dtype=float)
    signs = cert.gauge_signs
    if n is not None and n != len(signs):
        raise DesignError(f"certificate covers {len(signs)} vertices, n={n}")
    if m.shape != signs.shape:
        raise DesignError(f"need {len(signs)} magnitudes, got {m.size}")
    if np.any(~(m > 0)):
        raise DesignError("gauge magnitudes must be positive")
    p = signs * m
    if p[0] < 0:
        p = -p
    return TransformMatrix.diagonal(p)


# -------------------------------------------------------------- existence

class Verdict(str, Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ExistenceVerdict:
    verdict: Verdict
    reason: str
    witness: TransformMatrix | None = None
    diagonal_verdict: Verdict | None = None
    spectral: object = None        # dynamics.SpectrumReport of A

    def describe(self):
        text = {Verdict.EXISTS: "P exists", Verdict.NOT_EXISTS: "P does not exist",
                Verdict.UNKNOWN: "P existence unknown"}[self.verdict]
        return f"{text} ({self.reason})"


def existence_report(G):
    """Decide whether some invertible P makes ``P A P^-1`` nonnegative."""
    from .dynamics import spectrum

    cert = classify(G)
    sr = spectrum(G.A)
    conn = connectivity(G)

    if cert.kind is GraphClass.UNSIGNED:
        return ExistenceVerdict(Verdict.EXISTS, "any positive diagonal",
                                witness=TransformMatrix.diagonal(np.ones(G.n)),
                                diagonal_verdict=Verdict.EXISTS, spectral=sr)
    if cert.kind is GraphClass.BALANCED:
        P = gauge_design(cert, np.ones(G.n))
        return ExistenceVerdict(Verdict.EXISTS, "gauge", witness=P,
                                diagonal_verdict=Verdict.EXISTS, spectral=sr)

    # A diagonal P only rescales and flips signs, so it works iff the graph is balanced.
    diag = Verdict.NOT_EXISTS
    if cert.kind is GraphClass.ANTI_BALANCED:
        if not sr.leading_in_spectrum:
            note = "anti-balanced; spectral radius not an eigenvalue"
            if sr.leading_real_negative:
                note += ", leading eigenvalue real negative"
            return ExistenceVerdict(Verdict.NOT_EXISTS, note, diagonal_verdict=diag, spectral=sr)
        hyp = "irreducible, aperiodic" if conn.irreducible and conn.aperiodic else "reducible or periodic"
        return ExistenceVerdict(Verdict.UNKNOWN, f"anti-balanced ({hyp}) but spectral radius is an eigenvalue",
                                diagonal_verdict=diag, spectral=sr)
    if cert.kind is GraphClass.CLUSTERABLE:
        return ExistenceVerdict(Verdict.UNKNOWN, f"{cert.k}-partite; no diagonal P, non-diagonal P undecided",
                                diagonal_verdict=diag, spectral=sr)
    perron = "holds" if sr.leading_in_spectrum and sr.leading_simple else "fails"
    return ExistenceVerdict(Verdict.UNKNOWN, f"structurally unbalanced; Perron check {perron}",
                            diagonal_verdict=diag, spectral=sr)


# ----------------------------------------------------------------- design

@dataclass(frozen=True)
class DesignResult:
    A: np.ndarray
    P: TransformMatrix
    Az: np.ndarray
    theta_z: np.ndarray
    theta_x: np.ndarray
    Lx: np.ndarray
    Lz: np.ndarray
    method: str                     # "nonnegative" or "block"
    ordering: np.ndarray | None = None   # block path: leader vertices first
    r: int | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def n(self):
        return self.A.shape[0]


def design_laplacian(A, P):
    """Modified Laplacian for a member P of the nonnegativity set.

    The z-coordinate out-degree uses row sums of ``Az``, matching the
    ``d_i = sum_k |a_ik|`` out-degree of the unsigned Laplacian.
    """
    P = _as_transform(P)
    A = np.asarray(A, dtype=float)
    if not check_membership(A, P):
        Az = similarity(A, P)
        i, j = np.unravel_index(np.argmin(Az), Az.shape)
        raise MembershipError(f"P A P^-1 has negative entry {Az[i, j]:.6g} at ({i + 1},{j + 1})")
    Pinv = P.inverse()
    Az = P.P @ A @ Pinv
    theta_z = np.diag(Az.sum(axis=1))
    theta_x = Pinv @ theta_z @ P.P
    if P.kind == "diagonal":
        theta_x = np.diag(np.diag(theta_x))
    return DesignResult(A=A, P=P, Az=Az, theta_z=theta_z, theta_x=theta_x,
                        Lx=theta_x - A, Lz=theta_z - Az, method="nonnegative")


def block_design(dec, P1, P2):
    """Design for a balanced leader block feeding follower agents.

    ``P1`` must make the leader block nonnegative; ``P2`` only has to be
    invertible. The out-degree uses absolute row sums of ``P A P^-1`` since
    follower rows may stay signed. The result is expressed in the original
    vertex order, with ``ordering`` and ``r`` kept for the block predictor.
    """
    P1 = _as_transform(P1)
    r, n = dec.r, dec.n
    if P1.n != r:
        raise DesignError(f"P1 must be {r}x{r}, got {P1.n}x{P1.n}")
    if not check_membership(dec.A11, P1):
        raise MembershipError("P1 does not make the leader block nonnegative")
    if P2 is None:
        P2 = np.eye(n - r)
    P2 = np.asarray(P2.P if isinstance(P2, TransformMatrix) else P2, dtype=float).reshape(n - r, n - r)
    if n > r and _linalg.rank(P2, PIVOT_TOL) < n - r:
        raise SingularTransformError("follower transform P2 is singular")

    Pb = np.zeros((n, n))
    Pb[:r, :r] = P1.P
    Pb[r:, r:] = P2
    diag = P1.kind == "diagonal" and np.all(P2 == np.diag(np.diag(P2)))
    Pt = TransformMatrix(Pb, kind="block", r=r)
    Pinv = Pt.inverse()
    M = dec.permuted()
    Az = Pb @ M @ Pinv
    theta_z = np.diag(np.abs(Az).sum(axis=1))
    theta_x = Pinv @ theta_z @ Pb
    if diag:
        theta_x = np.diag(np.diag(theta_x))

    # back to the original vertex order
    Q = np.eye(n)[dec.ordering]     # Q @ x permutes original -> block order
    back = lambda X: Q.T @ X @ Q    # noqa: E731
    return DesignResult(A=back(M), P=TransformMatrix(back(Pb), kind="full"), Az=back(Az),
                        theta_z=back(theta_z), theta_x=back(theta_x), Lx=back(theta_x - M),
                        Lz=back(theta_z - Az), method="block", ordering=dec.ordering.copy(), r=r)


# ---------------------------------------------------------------- inverse

def reverse_design(x0, xf_desired, tol=1e-9):
    """Diagonal P with ``p_i = 1 / xf_i`` for a requested final state.

    Requires ``sum_i x0_i / xf_i = n``. The request is met exactly only when
    the resulting ``P A P^-1`` is weight-balanced, which
    :func:`opinionflow.dynamics.predict_uniform` checks.
    """
    x0 = np.asarray(x0, dtype=float)
    xf = np.asarray(xf_desired, dtype=float)
    if x0.shape != xf.shape:
        raise DesignError("x0 and xf must have the same length")
    if np.any(xf == 0):
        raise ConstraintError(f"desired final state has a zero entry at agent {np.flatnonzero(xf == 0)[0] + 1}",
                              residual=np.inf)
    residual = float(np.sum(x0 / xf) - x0.size)
    if abs(residual) > tol:
        raise ConstraintError(
            f"sum of x0_i/xf_i must equal n={x0.size}; residual {residual:.6g}", residual=residual)
    return TransformMatrix.diagonal(1.0 / xf)


def weight_balanced(M, tol=1e-10):
    M = np.asarray(M, dtype=float)
    return bool(np.all(np.abs(M.sum(axis=1) - M.sum(axis=0)) <= tol * max(1.0, np.max(np.abs(M)))))


def ratio_design(G, cert, ratios):
    """Diagonal P whose steady state is proportional to ``ratios``.

    Returns ``(P, direction)``; the final opinions are ``direction * s`` where
    the scalar ``s`` depends on the initial state through the left null
    vector of ``Lz``.
    """
    if cert.kind not in (GraphClass.UNSIGNED, GraphClass.BALANCED):
        raise ClassError(f"ratio design needs an unsigned or balanced graph, got {cert.kind.value}")
    ratios = np.asarray(ratios, dtype=float)
    if ratios.shape != (G.n,):
        raise DesignError(f"need {G.n} ratios, got {ratios.size}")
    if np.any(ratios == 0):
        raise DesignError("ratios must be nonzero")
    P = TransformMatrix.diagonal(1.0 / ratios)
    if not check_membership(G.A, P):
        raise SignPatternError("ratio signs do not match the graph's bipartition up to a global flip")
    return P, ratios.copy()
