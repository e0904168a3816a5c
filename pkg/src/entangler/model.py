"""Physical parameters and the two Lindblad models built from them.

Units: every frequency/rate is an angular rate in kHz (1e3 rad/s), every
time is in ms, so rate*time products are dimensionless as written.

The exact model lives on atoms (x) truncated cavity, in the displaced
rotating frame where the classical drive is absorbed into an effective
atomic term; its Hamiltonian is

    H(t) = dw1(t) n1 + dw2(t) n2 + alpha*Jx + g1*(J b† + J† b)

with cavity decay (gamma_b, b) and optional atomic decay (gamma_n, sigma_n).
Eliminating the heavily damped cavity leaves the reduced two-qubit model

    H(t) = dw1(t) n1 + dw2(t) n2 + alpha*Jx,   jump (gamma, J)

whose unique steady state for a symmetric splitting dw != 0 is the pure
state returned by :func:`analytic_steady_state`.

Sign conventions: alpha = -2*alpha0*lambda is carried signed; observable
quantities depend only on alpha**2 (flipping alpha is a local unitary), so
reported values use |alpha|.  The "+dw" branch sits on atom 1; this is the
choice under which H annihilates the analytic steady state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import schedules
from .errors import LayoutError
from .qops import (
    DensityMatrix,
    Operator,
    SpaceLayout,
    TWO_QUBITS,
    annihilator,
    apply_dissipator,
    collective_lowering,
    sigma_lower,
    tensor,
)


@dataclass(frozen=True)
class PhysicalParams:
    """Experimental knobs.

    alpha0     drive Rabi frequency (kHz)
    g1         atom-1 cavity coupling (kHz); atom 2 couples with (1+eta_g)*g1
    gamma_b    cavity decay rate (kHz)
    gamma1/2   atomic decay rates (kHz)
    eta_g      relative coupling asymmetry
    eta_omega  common detuning offset, as a fraction of the splitting
    fock_dim   cavity truncation (levels 0..fock_dim-1)
    """

    alpha0: float = 200.0
    g1: float = 200.0
    gamma_b: float = 2000.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    eta_g: float = 0.0
    eta_omega: float = 0.0
    fock_dim: int = 5

    def __post_init__(self):
        if self.gamma_b <= 0:
            raise ValueError(f"gamma_b must be positive, got {self.gamma_b}")
        if self.g1 <= 0:
            raise ValueError(f"g1 must be positive, got {self.g1}")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("atomic decay rates must be >= 0")
        if self.fock_dim < 2:
            raise ValueError(f"fock_dim must be >= 2, got {self.fock_dim}")

    @property
    def g2(self) -> float:
        return (1.0 + self.eta_g) * self.g1


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from PhysicalParams (g1 is the reference coupling).

    lam    g1/gamma_b, the adiabaticity parameter
    beta   displacement amplitude -2*alpha0/gamma_b
    alpha  beta*g1 = -2*alpha0*lam (kHz, signed)
    gamma  4*lam**2*gamma_b = 4*g1**2/gamma_b (kHz), the collective decay rate
    """

    lam: float
    beta: float
    alpha: float
    gamma: float

    def __post_init__(self):
        # internal consistency: alpha = beta*g1 and gamma = 4*lam*g1 imply
        # alpha = beta*gamma/(4*lam)
        if self.lam != 0:
            expect = self.beta * self.gamma / (4.0 * self.lam)
            scale = max(abs(self.alpha), abs(expect), 1e-300)
            if abs(self.alpha - expect) > 1e-12 * scale:
                raise ValueError("inconsistent derived parameters")

    def kappa_at(self, delta_omega: float) -> float:
        """Dimensionless detuning ratio dw/|alpha| at one schedule point."""
        if self.alpha == 0:
            raise ValueError("kappa undefined for alpha = 0")
        return delta_omega / abs(self.alpha)


def derive(params: PhysicalParams) -> DerivedParams:
    lam = params.g1 / params.gamma_b
    beta = -2.0 * params.alpha0 / params.gamma_b
    return DerivedParams(
        lam=lam,
        beta=beta,
        alpha=beta * params.g1,
        gamma=4.0 * lam * lam * params.gamma_b,
    )


class LindbladModel:
    """H(t) plus weighted jump operators on a fixed layout.

    The Hamiltonian is stored as a constant part plus coefficient-function
    terms, H(t) = h_static + sum_k f_k(t) * h_k, which is what the
    integrator consumes; ``hamiltonian(t)`` assembles the full operator.
    Instances are immutable and safe to share across workers.
    """

    __slots__ = ("layout", "h_static", "h_parts", "jumps", "schedule", "autonomous", "meta")

    def __init__(
        self,
        layout: SpaceLayout,
        h_static: np.ndarray,
        h_parts: Sequence[Tuple[Callable[[float], float], np.ndarray]] = (),
        jumps: Sequence[Tuple[float, Operator]] = (),
        schedule: Optional[schedules.DetuningSchedule] = None,
        autonomous: Optional[bool] = None,
        meta: Optional[dict] = None,
    ):
        h0 = np.array(h_static, dtype=complex)
        if h0.shape != (layout.dim, layout.dim):
            raise LayoutError(f"h_static shape {h0.shape} vs layout dim {layout.dim}")
        h0.setflags(write=False)
        parts = []
        for fn, mat in h_parts:
            m = np.array(mat, dtype=complex)
            if m.shape != (layout.dim, layout.dim):
                raise LayoutError(f"h_part shape {m.shape} vs layout dim {layout.dim}")
            m.setflags(write=False)
            parts.append((fn, m))
        for rate, op in jumps:
            if rate < 0:
                raise ValueError(f"jump rate must be >= 0, got {rate}")
            if op.layout != layout:
                raise LayoutError("jump operator layout does not match model layout")
        if autonomous is None:
            autonomous = not parts
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "h_static", h0)
        object.__setattr__(self, "h_parts", tuple(parts))
        object.__setattr__(self, "jumps", tuple(jumps))
        object.__setattr__(self, "schedule", schedule)
        object.__setattr__(self, "autonomous", bool(autonomous))
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("LindbladModel is immutable")

    def hamiltonian_matrix(self, t: float) -> np.ndarray:
        h = self.h_static
        for fn, mat in self.h_parts:
            h = h + fn(t) * mat
        return h

    def hamiltonian(self, t: float) -> Operator:
        return Operator(self.layout, self.hamiltonian_matrix(t))


def _detuning_parts(
    layout: SpaceLayout, schedule: schedules.DetuningSchedule, eta_omega: float
):
    """Splitting term: dw(t)*[(1+eta)*n1 + (eta-1)*n2] with n = sigma† sigma."""
    s1 = sigma_lower(0, layout)
    s2 = sigma_lower(1, layout)
    n1 = (s1.dag() @ s1).matrix
    n2 = (s2.dag() @ s2).matrix
    det_matrix = (1.0 + eta_omega) * n1 + (eta_omega - 1.0) * n2
    return [(schedule.value_at, det_matrix)]


def build_full(params: PhysicalParams, schedule: schedules.DetuningSchedule) -> LindbladModel:
    """Exact model on atoms (x) truncated cavity, in the displaced frame.

    The cavity starts from vacuum in this frame; the drive survives only
    as the alpha*Jx atomic term.
    """
    layout = SpaceLayout([2, 2, params.fock_dim])
    d = derive(params)
    j = collective_lowering(params.g1, params.g2, params.g1, layout)
    jx = (j + j.dag()).matrix
    b = tensor(layout, {2: annihilator(params.fock_dim)})
    coupling = params.g1 * (j.matrix @ b.dag().matrix + j.dag().matrix @ b.matrix)
    h_static = d.alpha * jx + coupling
    jumps = [
        (params.gamma_b, b),
        (params.gamma1, sigma_lower(0, layout)),
        (params.gamma2, sigma_lower(1, layout)),
    ]
    return LindbladModel(
        layout,
        h_static,
        _detuning_parts(layout, schedule, params.eta_omega),
        jumps,
        schedule=schedule,
        autonomous=schedules.is_constant(schedule),
        meta={"kind": "full", "params": params, "derived": d},
    )


def build_reduced(
    params: PhysicalParams,
    schedule: schedules.DetuningSchedule,
    include_atomic_decay: bool = False,
) -> LindbladModel:
    """Two-qubit model left after eliminating the heavily damped cavity."""
    layout = TWO_QUBITS
    d = derive(params)
    j = collective_lowering(params.g1, params.g2, params.g1, layout)
    jx = (j + j.dag()).matrix
    jumps = [(d.gamma, j)]
    if include_atomic_decay:
        jumps += [
            (params.gamma1, sigma_lower(0, layout)),
            (params.gamma2, sigma_lower(1, layout)),
        ]
    return LindbladModel(
        layout,
        d.alpha * jx,
        _detuning_parts(layout, schedule, params.eta_omega),
        jumps,
        schedule=schedule,
        autonomous=schedules.is_constant(schedule),
        meta={"kind": "reduced", "params": params, "derived": d},
    )


def analytic_steady_state(delta_omega: float, alpha: float) -> np.ndarray:
    """Normalized (dw, alpha, -alpha, 0)/Omega in the (uu, ud, du, dd) basis.

    Annihilated by both the symmetric-model Hamiltonian and the collective
    lowering operator; for dw -> 0 it tends to the singlet.
    """
    omega_sq = delta_omega**2 + 2.0 * alpha**2
    if omega_sq == 0:
        raise ValueError("steady state undefined when both dw and alpha are zero")
    return np.array([delta_omega, alpha, -alpha, 0.0], dtype=complex) / np.sqrt(omega_sq)


def steady_concurrence(kappa: float) -> float:
    """Concurrence of the analytic steady state, (1 + kappa**2/2)^-1."""
    if not np.isfinite(kappa):
        raise ValueError(f"kappa must be finite, got {kappa}")
    return 1.0 / (1.0 + kappa * kappa / 2.0)


class CorrectionSeries(NamedTuple):
    """Per-time diagnostic of the elimination's leading neglected term."""

    times: np.ndarray
    one_photon_population: np.ndarray
    correction_norm: np.ndarray


def correction_diagnostic(full_trajectory) -> CorrectionSeries:
    """Size of the term dropped when the cavity is eliminated.

    For each state of a trajectory on [2, 2, n_c], extracts the one-photon
    atomic block B = <1|rho|1>, and reports tr(B) together with the
    Frobenius norm of (D[J†] - D[J]) applied to B.
    """
    layout = full_trajectory.states[0].layout
    if layout.n_factors != 3 or layout.factor_dims[:2] != (2, 2):
        raise LayoutError(f"expected a [2, 2, n_c] trajectory, got {layout}")
    if layout.factor_dims[2] < 2:
        raise LayoutError("cavity factor must have at least 2 levels")
    params = full_trajectory.meta.get("params")
    if isinstance(params, PhysicalParams):
        j = collective_lowering(params.g1, params.g2, params.g1, TWO_QUBITS).matrix
    else:
        j = collective_lowering(1.0, 1.0, 1.0, TWO_QUBITS).matrix
    jd = j.conj().T
    dims = layout.factor_dims
    n_t = len(full_trajectory.states)
    p1 = np.zeros(n_t)
    corr = np.zeros(n_t)
    for i, state in enumerate(full_trajectory.states):
        t6 = state.matrix.reshape(dims + dims)
        block = t6[:, :, 1, :, :, 1].reshape(4, 4)
        p1[i] = float(np.real(np.trace(block)))
        delta = apply_dissipator(jd, block) - apply_dissipator(j, block)
        corr[i] = float(np.linalg.norm(delta))
    return CorrectionSeries(np.asarray(full_trajectory.times), p1, corr)
