"""Spectra, steady-state prediction and RK4 simulation of ``xdot = -Lx x``."""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _linalg
from .design import DesignResult, weight_balanced
from .errors import (ConvergenceError, DivergenceError, DynamicsError, GateError,
                     NullSpaceError, SingularBlockError, UnstableError)

GAP_TOL = 1e-8
PIVOT_TOL = 1e-10
STABILITY_TOL = 1e-10
SETTLE_TOL = 1e-9
MAX_ROWS = 10_000


# --------------------------------------------------------------- spectrum

@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray          # complex, sorted by descending modulus
    spectral_radius: float
    leading_in_spectrum: bool        # +rho is an eigenvalue
    leading_simple: bool             # ... of algebraic multiplicity one
    leading_real_negative: bool      # the unique max-modulus eigenvalue is -rho

    @property
    def leading(self):
        rho = self.spectral_radius
        tol = GAP_TOL * max(1.0, rho)
        return self.eigenvalues[np.abs(self.eigenvalues) >= rho - tol]


def spectrum(M):
    """All eigenvalues of a dense real matrix (LAPACK Hessenberg-QR)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DynamicsError(f"spectrum needs a square matrix, got shape {M.shape}")
    try:
        ev = scipy.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc
    order = np.lexsort((-ev.imag, -ev.real, -np.round(np.abs(ev), 12)))
    ev = ev[order]
    rho = float(np.max(np.abs(ev))) if ev.size else 0.0
    tol = GAP_TOL * max(1.0, rho)
    at_rho = np.abs(ev - rho) <= tol
    leading = np.abs(ev) >= rho - tol
    at_minus = np.abs(ev + rho) <= tol
    return SpectrumReport(
        eigenvalues=ev,
        spectral_radius=rho,
        leading_in_spectrum=bool(at_rho.any()),
        leading_simple=bool(at_rho.sum() == 1),
        leading_real_negative=bool(rho > tol and at_minus.sum() == 1 and leading.sum() == 1),
    )


def stability(L):
    """'stable', 'marginal' or 'unstable' for the flow ``xdot = -L x``.

    One eigenvalue of ``L`` (the one closest to zero) is the consensus mode;
    every other eigenvalue must have real part above ``STABILITY_TOL``.
    """
    ev = spectrum(L).eigenvalues
    if ev.size == 0:
        return "stable"
    rest = np.delete(ev, np.argmin(np.abs(ev)))
    if np.any(rest.real < -STABILITY_TOL):
        return "unstable"
    if np.any(rest.real <= STABILITY_TOL):
        return "marginal"
    return "stable"


# -------------------------------------------------------------- null pair

def null_pair(L, tol=PIVOT_TOL):
    """Right and left null vectors of ``L`` normalised so ``w @ v == 1``.

    ``v`` is scaled so its largest-magnitude entry is +1.
    """
    L = np.asarray(L, dtype=float)
    V = _linalg.null_space(L, tol)
    W = _linalg.null_space(L.T, tol)
    if V.shape[1] == 0 or W.shape[1] == 0:
        raise NullSpaceError("zero is not an eigenvalue", multiplicity=0)
    if V.shape[1] > 1 or W.shape[1] > 1:
        raise NullSpaceError(f"zero eigenvalue is not simple (multiplicity {V.shape[1]})",
                             multiplicity=V.shape[1])
    v, w = V[:, 0], W[:, 0]
    v = v / v[np.argmax(np.abs(v))]
    s = w @ v
    if abs(s) <= tol * np.linalg.norm(w) * np.linalg.norm(v):
        raise NullSpaceError("zero eigenvalue is defective (w'v = 0)", multiplicity=2)
    return v, w / s


@dataclass(frozen=True)
class SteadyStatePrediction:
    xf: np.ndarray
    v: np.ndarray
    w: np.ndarray
    n_z: int
    method: str        # "general", "uniform" or "block"


def _require_stable(L):
    verdict = stability(L)
    if verdict != "stable":
        raise UnstableError(f"spectrum of Lz is {verdict}: a nonzero eigenvalue has real part <= {STABILITY_TOL}")


def _check_x0(x0, n):
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (n,):
        raise DynamicsError(f"x0 must have length {n}, got shape {x0.shape}")
    if not np.all(np.isfinite(x0)):
        raise DynamicsError("x0 has non-finite entries")
    return x0


def predict_steady_state(design, x0):
    """``xf = P^-1 v (w' P x0)`` from the null pair of ``Lz``."""
    x0 = _check_x0(x0, design.n)
    Lz = design.Lz
    v, w = null_pair(Lz)
    _require_stable(Lz)
    P = design.P.P
    xf = design.P.inverse() @ v * (w @ (P @ x0))
    return SteadyStatePrediction(xf=xf, v=v, w=w, n_z=1, method="general")


def predict_uniform(design, x0):
    """``xf = (1/n) P^-1 1 1' P x0``, valid when ``Az`` is weight-balanced."""
    x0 = _check_x0(x0, design.n)
    if not weight_balanced(design.Az):
        rs, cs = design.Az.sum(axis=1), design.Az.sum(axis=0)
        raise GateError(
            "P A P^-1 is not weight-balanced (row sums "
            + ", ".join(f"{x:.6g}" for x in rs) + "; column sums "
            + ", ".join(f"{x:.6g}" for x in cs) + "); use the general predictor")
    n = design.n
    v = np.ones(n)
    w = np.full(n, 1.0 / n)
    xf = design.P.inverse() @ v * (w @ (design.P.P @ x0))
    return SteadyStatePrediction(xf=xf, v=v, w=w, n_z=1, method="uniform")


def predict_block(design, x0):
    """Steady state for the leader/follower block design.

    Leaders settle at ``P1^-1 v1 (w1' P1 x0_leader)``; followers at
    ``-P2^-1 Lz22^-1 Lz21 v1 (w1' P1 x0_leader)``.
    """
    x0 = _check_x0(x0, design.n)
    if design.method != "block":
        return predict_steady_state(design, x0)
    order, r = design.ordering, design.r
    n = design.n
    Lz = design.Lz[np.ix_(order, order)]
    P = design.P.P[np.ix_(order, order)]
    y0 = x0[order]
    Lz11, Lz21, Lz22 = Lz[:r, :r], Lz[r:, :r], Lz[r:, r:]
    P1, P2 = P[:r, :r], P[r:, r:]

    v1, w1 = null_pair(Lz11)
    _require_stable(Lz11)
    s = w1 @ (P1 @ y0[:r])
    z = np.empty(n)
    z[:r] = v1 * s
    if n > r:
        lu, piv = scipy.linalg.lu_factor(Lz22, check_finite=True)
        u = np.abs(np.diag(lu))
        if np.min(u) <= PIVOT_TOL * max(1.0, np.max(np.abs(Lz22))):
            raise SingularBlockError("follower Laplacian block Lz22 is singular")
        if np.any(spectrum(Lz22).eigenvalues.real <= STABILITY_TOL):
            raise UnstableError("follower Laplacian block Lz22 has an eigenvalue with nonpositive real part")
        z[r:] = -scipy.linalg.lu_solve((lu, piv), Lz21 @ v1) * s
    y = np.empty(n)
    y[:r] = np.linalg.solve(P1, z[:r])
    if n > r:
        y[r:] = np.linalg.solve(P2, z[r:])
    xf = np.empty(n)
    xf[order] = y

    # full null pair in original order
    vz = np.concatenate([v1, -np.linalg.solve(Lz22, Lz21 @ v1)]) if n > r else v1
    wz = np.concatenate([w1, np.zeros(n - r)])
    v, w = np.empty(n), np.empty(n)
    v[order], w[order] = vz, wz
    return SteadyStatePrediction(xf=xf, v=v, w=w, n_z=1, method="block")


def predict(design, x0):
    if design.method == "block":
        return predict_block(design, x0)
    return predict_steady_state(design, x0)


# ------------------------------------------------------------- simulation

@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray            # retained sample times
    x: np.ndarray            # retained states, one row per time
    dt: float
    converged: bool
    t_converged: float | None
    steps: int

    @property
    def final(self):
        return self.x[-1]


def rk4_propagator(M, dt):
    """One classical RK4 step for the linear field ``f(x) = M x`` as a matrix.

    For linear autonomous systems the four stages collapse to
    ``I + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24``.
    """
    return np.eye(M.shape[0]) + rk4_increment(M, dt)


def rk4_increment(M, dt):
    """``R - I`` formed directly, so a settled state is not nudged by rounding in ``R``."""
    hM = dt * M
    I = np.eye(M.shape[0])
    return hM @ (I + hM @ (I / 2 + hM @ (I / 6 + hM / 24)))


def simulate(Lx, x0, dt=1e-3, t_end=20.0, settle_tol=SETTLE_TOL, max_rows=MAX_ROWS):
    """Fixed-step RK4 integration of ``xdot = -Lx x`` from ``t = 0``.

    Samples are thinned with a uniform stride to at most ``max_rows`` rows;
    the first and last samples are always kept.
    """
    Lx = np.asarray(Lx, dtype=float)
    n = Lx.shape[0]
    x = _check_x0(x0, n)
    if not dt > 0:
        raise DynamicsError(f"dt must be positive, got {dt}")
    if not t_end >= dt:
        raise DynamicsError(f"t_end must be >= dt, got t_end={t_end}, dt={dt}")
    if max_rows < 2:
        raise DynamicsError("max_rows must be at least 2")
    dmax = np.max(np.abs(np.diag(Lx))) if n else 0.0
    if dmax > 0 and dt > 0.5 / dmax:
        warnings.warn(f"dt={dt} exceeds the stability guard 0.5/max(theta_x)={0.5 / dmax:.3g}",
                      RuntimeWarning, stacklevel=2)

    steps = int(np.floor(t_end / dt + 1e-9))
    stride = max(1, -(-steps // (max_rows - 2)))
    K = rk4_increment(-Lx, dt)

    keep = [0]
    xs = [x.copy()]
    converged = np.max(np.abs(Lx @ x), initial=0.0) < settle_tol
    t_conv = 0.0 if converged else None
    for k in range(1, steps + 1):
        x = x + K @ x
        if not np.all(np.isfinite(x)):
            raise DivergenceError(f"state became non-finite at t={k * dt:.6g}", t=k * dt)
        if not converged and np.max(np.abs(Lx @ x)) < settle_tol:
            converged = True
            t_conv = k * dt
        if k % stride == 0 or k == steps:
            keep.append(k)
            xs.append(x.copy())
    return Trajectory(t=np.array(keep) * dt, x=np.array(xs), dt=float(dt), converged=bool(converged),
                      t_converged=t_conv, steps=steps)


# ----------------------------------------------------------- verification

@dataclass
class VerificationReport:
    spectrum: SpectrumReport
    theta_x: np.ndarray
    L_x: np.ndarray
    xf_predicted: np.ndarray | None
    xf_simulated: np.ndarray | None
    max_error: float | None
    stable: bool
    passed: bool
    tolerance: float
    method: str | None = None
    classification: str | None = None
    messages: list = field(default_factory=list)
    trajectory: Trajectory | None = None

    def to_dict(self):
        def arr(a):
            return None if a is None else np.asarray(a, dtype=float).tolist()
        return {
            "classification": self.classification,
            "spectrum": [[float(z.real), float(z.imag)] for z in self.spectrum.eigenvalues],
            "theta_x": arr(self.theta_x),
            "L_x": arr(self.L_x),
            "xf_predicted": arr(self.xf_predicted),
            "xf_simulated": arr(self.xf_simulated),
            "max_error": self.max_error,
            "stable": self.stable,
            "pass": self.passed,
            "method": self.method,
            "tolerance": self.tolerance,
            "messages": list(self.messages),
        }


def verify(design, x0, dt=1e-3, t_end=20.0, settle_tol=SETTLE_TOL, classification=None):
    """Compare the closed-form steady state with an RK4 run.

    The tolerance is 1e-6 when the run settled, otherwise 1e-3.
    """
    spec = spectrum(design.Lx)
    messages = []
    verdict = stability(design.Lz)
    stable = verdict == "stable"
    if not stable:
        messages.append(f"stability: {verdict}")

    pred = None
    if stable:
        try:
            pred = predict(design, x0)
        except DynamicsError as exc:
            stable = not isinstance(exc, UnstableError)
            messages.append(f"prediction failed: {exc}")

    traj = None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            traj = simulate(design.Lx, x0, dt=dt, t_end=t_end, settle_tol=settle_tol)
    except DivergenceError as exc:
        messages.append(f"simulation diverged: {exc}")

    tol = 1e-6 if traj is not None and traj.converged else 1e-3
    err = None
    if pred is not None and traj is not None:
        err = float(np.max(np.abs(pred.xf - traj.final)))
    passed = stable and err is not None and err < tol
    return VerificationReport(
        spectrum=spec, theta_x=design.theta_x, L_x=design.Lx,
        xf_predicted=None if pred is None else pred.xf,
        xf_simulated=None if traj is None else traj.final,
        max_error=err, stable=stable, passed=passed, tolerance=tol,
        method=None if pred is None else pred.method, classification=classification,
        messages=messages, trajectory=traj)
