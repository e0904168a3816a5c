"""Liouvillian matrices, time integration, and steady-state analysis.

Vectorization is column-stacking throughout: vec(A rho B) = (B^T kron A)
vec(rho).  Autonomous models are propagated exactly with the matrix
exponential of the frozen Liouvillian; time-dependent models use an
adaptive high-order integrator on the matrix-valued right-hand side.
Densities never exceed 4*fock_dim, so everything is dense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import (
    DegenerateSteadyStateError,
    IntegrationError,
    LayoutError,
    NumericalError,
    SteadyStateAmbiguityError,
)
from .model import LindbladModel
from .qops import DensityMatrix, SpaceLayout

#: default number of uniform output points over [0, t_final]
DEFAULT_GRID_POINTS = 400

#: relative singular-value threshold separating the null space
NULL_THRESHOLD = 1e-10

#: required separation between retained and discarded singular values
GAP_RATIO_GUARD = 10.0


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vec()."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


@dataclass(frozen=True)
class Superoperator:
    """Matrix form of the generator at one frozen time."""

    matrix: np.ndarray
    source_dim: int
    frozen_time: float


def _liouvillian_matrix(h: np.ndarray, jumps) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    L = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for rate, a in jumps:
        if rate == 0:
            continue
        ad = a.conj().T
        ada = ad @ a
        L += rate * (
            np.kron(a.conj(), a)
            - 0.5 * (np.kron(eye, ada) + np.kron(ada.T, eye))
        )
    return L


def liouvillian(model: LindbladModel, t: float = 0.0) -> Superoperator:
    """Generator matrix L with L vec(rho) = vec(-i[H(t), rho] + sum_k g_k D[a_k] rho)."""
    h = model.hamiltonian_matrix(t)
    jump_mats = [(rate, op.matrix) for rate, op in model.jumps]
    return Superoperator(_liouvillian_matrix(h, jump_mats), model.layout.dim, t)


class Trajectory:
    """Time grid plus validated states; meta records how it was produced."""

    __slots__ = ("times", "states", "meta")

    def __init__(self, times: np.ndarray, states: List[DensityMatrix], meta: dict):
        self.times = np.asarray(times, dtype=float)
        self.states = list(states)
        self.meta = dict(meta)
        if len(self.states) != self.times.shape[0]:
            raise ValueError("times and states must have equal length")

    @property
    def layout(self) -> SpaceLayout:
        return self.states[0].layout

    def purity_series(self) -> np.ndarray:
        return np.array([s.purity() for s in self.states])

    def cavity_population_series(self) -> np.ndarray:
        """<n> of the last tensor factor (the cavity, when present)."""
        dims = self.layout.factor_dims
        if len(dims) < 2:
            raise LayoutError("trajectory has no cavity factor")
        n_c = dims[-1]
        occ = np.arange(n_c, dtype=float)
        out = np.zeros(len(self.states))
        for i, s in enumerate(self.states):
            t = s.matrix.reshape(dims + dims)
            # diagonal of the reduced cavity state
            red = t
            for k in range(len(dims) - 1):
                red = np.trace(red, axis1=0, axis2=red.ndim // 2)
            out[i] = float(np.real(np.diag(red) @ occ))
        return out


def _wrap_states(layout, times, mats, meta, tol) -> Trajectory:
    herm_tol = max(1e-8, 10.0 * tol)  # hermiticity drift scales with solver tol
    states = []
    for t, m in zip(times, mats):
        m = np.asarray(m)
        try:
            states.append(
                DensityMatrix(
                    layout, m, trace_tol=1e-6, herm_tol=herm_tol, psd_tol=1e-6
                )
            )
        except ValueError as exc:
            raise IntegrationError(
                f"state at t={t:.6g} ms violates density-matrix invariants: {exc}",
                diagnostics={
                    "t": float(t),
                    "trace": complex(np.trace(m)),
                    "tol": tol,
                },
            ) from exc
    return Trajectory(times, states, meta)


def _propagate_autonomous(L: np.ndarray, rho0: np.ndarray, times: np.ndarray):
    """Exact propagation: cache expm(L dt) per distinct step size."""
    d = rho0.shape[0]
    v = vectorize(rho0)
    out = [rho0.copy()]
    cache = {}
    for i in range(1, len(times)):
        dt = times[i] - times[i - 1]
        key = round(float(dt), 15)
        P = cache.get(key)
        if P is None:
            P = expm(L * dt)
            cache[key] = P
        v = P @ v
        out.append(unvectorize(v, d))
    return out


def _rhs_factory(model: LindbladModel):
    d = model.layout.dim
    h_static = model.h_static
    h_parts = model.h_parts
    jumps = []
    for rate, op in model.jumps:
        if rate == 0:
            continue
        a = op.matrix
        ad = a.conj().T
        jumps.append((rate, a, ad, ad @ a))

    def rhs(t, y):
        rho = y.reshape(d, d)
        h = h_static
        for fn, mat in h_parts:
            h = h + fn(t) * mat
        drho = -1j * (h @ rho - rho @ h)
        for rate, a, ad, ada in jumps:
            drho = drho + rate * (a @ rho @ ad - 0.5 * (ada @ rho + rho @ ada))
        return drho.reshape(-1)

    return rhs


def _integrate_td(model, rho0, times, tol):
    rhs = _rhs_factory(model)
    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        rho0.reshape(-1).astype(complex),
        method="DOP853",
        t_eval=times,
        rtol=tol,
        atol=tol * 1e-2,
    )
    if not sol.success:
        raise IntegrationError(
            f"integrator failed: {sol.message}",
            diagnostics={"message": sol.message, "n_fev": sol.nfev, "tol": tol},
        )
    d = model.layout.dim
    return [sol.y[:, k].reshape(d, d) for k in range(sol.y.shape[1])]


def evolve(
    model: LindbladModel,
    rho0: DensityMatrix,
    t_final: float,
    output_grid: Optional[Sequence[float]] = None,
    tol: float = 1e-9,
    method: str = "auto",
) -> Trajectory:
    """Integrate the model from rho0 and sample on the output grid.

    method: "auto" uses exact exponential stepping for autonomous models
    and the adaptive integrator otherwise; "expm"/"ode" force one path
    (the forced-ode path is what oracle tests compare against exponentials).
    """
    if rho0.layout != model.layout:
        raise LayoutError("initial state layout does not match the model")
    if t_final <= 0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    if output_grid is None:
        times = np.linspace(0.0, t_final, DEFAULT_GRID_POINTS)
    else:
        times = np.asarray(output_grid, dtype=float)
        if times.ndim != 1 or times.shape[0] < 2 or np.any(np.diff(times) <= 0):
            raise ValueError("output grid must be strictly increasing with >= 2 points")
        if times[0] < 0 or times[-1] > t_final + 1e-12:
            raise ValueError("output grid must lie within [0, t_final]")
    if method not in ("auto", "expm", "ode"):
        raise ValueError(f"unknown method {method!r}")
    if method == "expm" and not model.autonomous:
        raise ValueError("exponential stepping requires an autonomous model")
    use_expm = model.autonomous if method == "auto" else (method == "expm")

    if use_expm:
        L = liouvillian(model, times[0]).matrix
        mats = _propagate_autonomous(L, rho0.matrix, times)
    else:
        mats = _integrate_td(model, rho0.matrix, times, tol)
    meta = {
        "tol": tol,
        "method": "expm" if use_expm else "ode",
        "model_kind": model.meta.get("kind"),
        "params": model.meta.get("params"),
        "schedule": model.schedule,
    }
    return _wrap_states(model.layout, times, mats, meta, tol)


def state_between(
    model: LindbladModel,
    start: DensityMatrix,
    t_start: float,
    t_target: float,
    tol: float = 1e-9,
) -> DensityMatrix:
    """State at t_target given the state at t_start (used by root refinement)."""
    if t_target < t_start:
        raise ValueError("t_target must be >= t_start")
    if t_target == t_start:
        return start
    if model.autonomous:
        L = liouvillian(model, 0.0).matrix
        v = expm(L * (t_target - t_start)) @ vectorize(start.matrix)
        mat = unvectorize(v, model.layout.dim)
    else:
        rhs = _rhs_factory(model)
        sol = solve_ivp(
            rhs,
            (t_start, t_target),
            start.matrix.reshape(-1).astype(complex),
            method="DOP853",
            rtol=tol,
            atol=tol * 1e-2,
        )
        if not sol.success:
            raise IntegrationError(f"integrator failed: {sol.message}")
        mat = sol.y[:, -1].reshape(model.layout.dim, model.layout.dim)
    return DensityMatrix(
        model.layout, mat, trace_tol=1e-6, herm_tol=max(1e-8, 10.0 * tol), psd_tol=1e-6
    )


def _null_space(L: np.ndarray):
    """Singular vectors below the relative threshold, with the gap guard."""
    u, s, vh = np.linalg.svd(L)
    cutoff = NULL_THRESHOLD * s[0] if s[0] > 0 else 0.0
    null_mask = s <= cutoff
    n_null = int(np.sum(null_mask))
    if n_null == 0:
        raise NumericalError(
            "no steady state found: smallest singular value "
            f"{s[-1]:.3e} above threshold {cutoff:.3e}"
        )
    smallest_retained = s[~null_mask][-1] if n_null < len(s) else np.inf
    largest_discarded = s[null_mask][0]
    if largest_discarded > 0 and smallest_retained / largest_discarded < GAP_RATIO_GUARD:
        raise SteadyStateAmbiguityError(
            "ambiguous null space: retained/discarded singular value ratio "
            f"{smallest_retained / largest_discarded:.2f} < {GAP_RATIO_GUARD}"
        )
    return vh[len(s) - n_null:].conj().T, s  # columns span the null space


def steady_states(model: LindbladModel, t_frozen: float = 0.0):
    """Null space of the frozen generator.

    Returns (dimension, basis).  A one-dimensional null space yields the
    unique steady state as a fully validated DensityMatrix; degenerate
    bases are Hermitized and trace-normalized where possible but are not
    required to be physical states individually.
    """
    L = liouvillian(model, t_frozen).matrix
    vecs, _ = _null_space(L)
    dim = vecs.shape[1]
    d = model.layout.dim
    basis = []
    for k in range(dim):
        mat = unvectorize(vecs[:, k], d)
        mat = 0.5 * (mat + mat.conj().T)  # generator commutes with adjoint
        tr = np.trace(mat)
        if abs(tr) > 1e-10:
            mat = mat / tr
        basis.append(mat)
    if dim == 1:
        state = DensityMatrix(
            model.layout, basis[0], trace_tol=1e-7, herm_tol=1e-9, psd_tol=1e-7
        )
        return 1, [state]
    return dim, [
        DensityMatrix(model.layout, m, validate=False) for m in basis
    ]


def spectral_gap(model: LindbladModel, t_frozen: float = 0.0) -> float:
    """-max Re(lambda) over nonzero generator eigenvalues; the slowest rate."""
    L = liouvillian(model, t_frozen).matrix
    s_max = np.linalg.norm(L, 2)
    if s_max == 0:
        raise DegenerateSteadyStateError("zero generator has no spectral gap")
    eigs = np.linalg.eigvals(L)
    threshold = NULL_THRESHOLD * s_max
    null_count = int(np.sum(np.abs(eigs) <= threshold))
    if null_count == 0:
        raise NumericalError("no zero eigenvalue found; generator is not trace-preserving")
    if null_count > 1:
        raise DegenerateSteadyStateError(
            f"degenerate null space (dimension {null_count}); gap undefined"
        )
    nonzero = eigs[np.abs(eigs) > threshold]
    return float(-np.max(np.real(nonzero)))
