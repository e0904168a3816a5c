"""Entanglement and trajectory-comparison metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import dynamics
from .errors import LayoutError
from .model import LindbladModel
from .qops import DensityMatrix, TWO_QUBITS

_SY_SY = np.kron(
    np.array([[0.0, -1j], [1j, 0.0]]), np.array([[0.0, -1j], [1j, 0.0]])
)


def _two_qubit_matrix(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        if rho.layout != TWO_QUBITS:
            raise LayoutError(f"concurrence needs a [2, 2] state, got {rho.layout}")
        return rho.matrix
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise LayoutError(f"concurrence needs a 4x4 matrix, got shape {m.shape}")
    return m


def concurrence(rho: Union[DensityMatrix, np.ndarray]) -> float:
    """Two-qubit mixed-state concurrence.

    max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
    eigenvalues of rho (sy kron sy) rho* (sy kron sy), conjugation taken in
    the fixed computational basis.  The l_i are evaluated as the singular
    values of sqrt(rho)* (sy kron sy) sqrt(rho), which is the same set but
    does not lose half the significant digits near zero.
    """
    m = _two_qubit_matrix(rho)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(root.conj() @ _SY_SY @ root, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_pure(psi: np.ndarray) -> float:
    """2|ad - bc| for a normalized pure state with amplitudes (a, b, c, d)."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise LayoutError(f"need a 4-component ket, got shape {v.shape}")
    return float(2.0 * abs(v[0] * v[3] - v[1] * v[2]))


def concurrence_series(traj: dynamics.Trajectory) -> np.ndarray:
    return np.array([concurrence(s) for s in traj.states])


def fidelity(rho: DensityMatrix, target: np.ndarray) -> float:
    """<target|rho|target> for a normalized target ket."""
    v = np.asarray(target, dtype=complex).reshape(-1)
    if v.shape != (rho.layout.dim,):
        raise LayoutError(
            f"target length {v.shape[0]} does not match layout {rho.layout}"
        )
    return float(np.real(v.conj() @ rho.matrix @ v))


def norm_error(
    traj_exact_reduced: dynamics.Trajectory,
    traj_approx: dynamics.Trajectory,
    norm_kind: str = "frobenius",
) -> float:
    """max_t of the chosen matrix norm of the trajectory difference."""
    ta, tb = traj_exact_reduced.times, traj_approx.times
    if ta.shape != tb.shape or not np.allclose(ta, tb, rtol=0, atol=1e-12):
        raise ValueError("trajectories must share the same time grid")
    if norm_kind not in ("frobenius", "trace"):
        raise ValueError(f"norm_kind must be 'frobenius' or 'trace', got {norm_kind!r}")
    worst = 0.0
    for sa, sb in zip(traj_exact_reduced.states, traj_approx.states):
        diff = sa.matrix - sb.matrix
        if norm_kind == "frobenius":
            val = float(np.linalg.norm(diff))
        else:
            val = float(np.sum(np.linalg.svd(diff, compute_uv=False)))
        worst = max(worst, val)
    return worst


def time_to_threshold(
    model: LindbladModel,
    rho0: DensityMatrix,
    threshold_fraction: float,
    c_ref: float,
    t_max: float,
    tol: float = 1e-9,
    grid_points: int = dynamics.DEFAULT_GRID_POINTS,
    refine_to: float = 1e-3,
) -> Optional[float]:
    """First time the concurrence reaches threshold_fraction * c_ref.

    Scans a uniform grid, then bisects the bracketing interval down to
    refine_to (ms).  Returns None when the target is not reached by t_max.
    """
    if not 0.0 < threshold_fraction <= 1.0:
        raise ValueError(f"threshold_fraction must be in (0, 1], got {threshold_fraction}")
    if c_ref <= 0:
        raise ValueError(f"c_ref must be positive, got {c_ref}")
    target = threshold_fraction * c_ref
    traj = dynamics.evolve(model, rho0, t_max, np.linspace(0.0, t_max, grid_points), tol=tol)
    series = concurrence_series(traj)
    hits = np.nonzero(series >= target)[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return float(traj.times[0])
    lo_t, hi_t = float(traj.times[i - 1]), float(traj.times[i])
    state_lo = traj.states[i - 1]
    while hi_t - lo_t > refine_to:
        mid_t = 0.5 * (lo_t + hi_t)
        mid_state = dynamics.state_between(model, state_lo, lo_t, mid_t, tol=tol)
        if concurrence(mid_state) >= target:
            hi_t = mid_t
        else:
            lo_t, state_lo = mid_t, mid_state
    return hi_t


@dataclass(frozen=True)
class FitResult:
    """Least-squares quadratic y ~ a2 x^2 + a1 x + a0 with rms residual."""

    a2: float
    a1: float
    a0: float
    residual: float


def quad_fit(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("xs and ys must be 1-d sequences of equal length")
    if x.shape[0] < 3:
        raise ValueError(f"need at least 3 points, got {x.shape[0]}")
    if np.unique(x).size < 3:
        raise ValueError("need at least 3 distinct x values for a quadratic fit")
    vander = np.column_stack([x * x, x, np.ones_like(x)])
    coeffs, _, rank, _ = np.linalg.lstsq(vander, y, rcond=None)
    if rank < 3:
        raise ValueError("degenerate design matrix; x values do not support a quadratic")
    resid = y - vander @ coeffs
    rms = float(np.sqrt(np.mean(resid * resid)))
    return FitResult(a2=float(coeffs[0]), a1=float(coeffs[1]), a0=float(coeffs[2]), residual=rms)
