"""Named experiments with JSON configuration and CSV output.

Each experiment evaluates one sweep or reproduction on the reduced and/or
exact model and returns plain result tables; the CLI (``entangler``)
serializes them as one CSV per table plus a JSON metadata sidecar.  Grid
cells are independent jobs: a worker pool computes them in parallel and
results are always collected in grid order, so output bytes do not depend
on the worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, analysis, dynamics, model, schedules
from .errors import ConfigError, DegenerateSteadyStateError, SteadyStateAmbiguityError
from .model import PhysicalParams
from .qops import DensityMatrix, SpaceLayout, TWO_QUBITS, basis_ket, partial_trace

BASIS_LABELS = {"uu": (0, 0), "ud": (0, 1), "du": (1, 0), "dd": (1, 1)}

EXPERIMENT_NAMES = (
    "fig2a",
    "fig2b",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "offset-fit",
    "validate",
    "sweep",
    "steady-state",
)


@dataclass(frozen=True)
class Tolerances:
    ode_tol: float = 1e-8
    refine_ms: float = 1e-3


@dataclass(frozen=True)
class InitialStateSpec:
    kind: str = "basis"  # "basis" | "random_product" | "matrix"
    label: str = "uu"
    count: int = 8
    entries: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("basis", "random_product", "matrix"):
            raise ConfigError(f"unknown initial state kind {self.kind!r}")
        if self.kind == "basis" and self.label not in BASIS_LABELS:
            raise ConfigError(
                f"unknown basis label {self.label!r}; expected one of {sorted(BASIS_LABELS)}"
            )
        if self.kind == "matrix" and self.entries is None:
            raise ConfigError("matrix initial state needs 'entries'")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: PhysicalParams = PhysicalParams()
    schedule: Optional[schedules.DetuningSchedule] = None
    profiles: Optional[Dict[str, schedules.DetuningSchedule]] = None
    initial_state: InitialStateSpec = InitialStateSpec()
    t_final: Optional[float] = None
    grids: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    tolerances: Tolerances = Tolerances()
    seed: int = 2024
    workers: int = 1
    output_grid_points: int = 200
    sweep: Optional[dict] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENT_NAMES}"
            )
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.output_grid_points < 2:
            raise ConfigError("output_grid_points must be >= 2")


# ---------------------------------------------------------------------------
# configuration parsing


_TOP_KEYS = {
    "experiment",
    "params",
    "schedule",
    "profiles",
    "initial_state",
    "t_final",
    "grids",
    "tolerances",
    "seed",
    "workers",
    "output_grid_points",
    "sweep",
}
_PARAM_KEYS = {
    "alpha0",
    "g1",
    "gamma_b",
    "gamma1",
    "gamma2",
    "eta_g",
    "eta_omega",
    "fock_dim",
}
_GRID_KEYS = {"kappa", "gamma_over_alpha", "gamma_n", "eta_g", "eta_omega"}
_STATE_KEYS = {"kind", "label", "count", "entries"}
_TOL_KEYS = {"ode_tol", "refine_ms"}
_SWEEP_KEYS = {"parameter", "values", "observable"}


def _reject_unknown(data: dict, allowed: set, where: str):
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def config_from_dict(data: dict, experiment: Optional[str] = None) -> ExperimentConfig:
    """Build a validated config from a JSON-shaped dict; unknown keys reject."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "config")
    name = data.get("experiment", experiment)
    if name is None:
        raise ConfigError("no experiment name given (config key 'experiment' or CLI)")
    if experiment is not None and name != experiment:
        raise ConfigError(
            f"config experiment {name!r} does not match requested {experiment!r}"
        )

    params_data = data.get("params", {})
    if not isinstance(params_data, dict):
        raise ConfigError("'params' must be an object")
    _reject_unknown(params_data, _PARAM_KEYS, "params")
    try:
        params = PhysicalParams(
            **{
                k: (int(v) if k == "fock_dim" else float(v))
                for k, v in params_data.items()
            }
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid params: {exc}") from exc

    sched = None
    if data.get("schedule") is not None:
        try:
            sched = schedules.from_dict(data["schedule"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid schedule: {exc}") from exc

    profiles = None
    if data.get("profiles") is not None:
        if not isinstance(data["profiles"], dict):
            raise ConfigError("'profiles' must map name -> schedule object")
        try:
            profiles = {
                str(k): schedules.from_dict(v) for k, v in data["profiles"].items()
            }
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid profile schedule: {exc}") from exc

    state_data = data.get("initial_state", {})
    if not isinstance(state_data, dict):
        raise ConfigError("'initial_state' must be an object")
    _reject_unknown(state_data, _STATE_KEYS, "initial_state")
    entries = state_data.get("entries")
    if entries is not None:
        entries = tuple(tuple(tuple(pair) for pair in row) for row in entries)
    state = InitialStateSpec(
        kind=state_data.get("kind", "basis"),
        label=state_data.get("label", "uu"),
        count=int(state_data.get("count", 8)),
        entries=entries,
    )

    grids_data = data.get("grids", {})
    if not isinstance(grids_data, dict):
        raise ConfigError("'grids' must be an object")
    _reject_unknown(grids_data, _GRID_KEYS, "grids")
    grids = {}
    for k, vals in grids_data.items():
        seq = tuple(float(v) for v in vals)
        if not seq:
            raise ConfigError(f"grid {k!r} must be non-empty")
        grids[k] = seq

    tol_data = data.get("tolerances", {})
    if not isinstance(tol_data, dict):
        raise ConfigError("'tolerances' must be an object")
    _reject_unknown(tol_data, _TOL_KEYS, "tolerances")
    tolerances = Tolerances(**{k: float(v) for k, v in tol_data.items()})

    sweep = data.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("'sweep' must be an object")
        _reject_unknown(sweep, _SWEEP_KEYS, "sweep")

    return ExperimentConfig(
        experiment=name,
        params=params,
        schedule=sched,
        profiles=profiles,
        initial_state=state,
        t_final=(None if data.get("t_final") is None else float(data["t_final"])),
        grids=grids,
        tolerances=tolerances,
        seed=int(data.get("seed", 2024)),
        workers=int(data.get("workers", 1)),
        output_grid_points=int(data.get("output_grid_points", 200)),
        sweep=sweep,
    )


def load_config(path, experiment: Optional[str] = None) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data, experiment)


def config_to_dict(config: ExperimentConfig) -> dict:
    """Canonical JSON form (used for hashing and the metadata sidecar)."""
    out = {
        "experiment": config.experiment,
        "params": {
            "alpha0": config.params.alpha0,
            "g1": config.params.g1,
            "gamma_b": config.params.gamma_b,
            "gamma1": config.params.gamma1,
            "gamma2": config.params.gamma2,
            "eta_g": config.params.eta_g,
            "eta_omega": config.params.eta_omega,
            "fock_dim": config.params.fock_dim,
        },
        "schedule": None if config.schedule is None else schedules.to_dict(config.schedule),
        "profiles": None
        if config.profiles is None
        else {k: schedules.to_dict(v) for k, v in sorted(config.profiles.items())},
        "initial_state": {
            "kind": config.initial_state.kind,
            "label": config.initial_state.label,
            "count": config.initial_state.count,
            "entries": config.initial_state.entries,
        },
        "t_final": config.t_final,
        "grids": {k: list(v) for k, v in sorted(config.grids.items())},
        "tolerances": {
            "ode_tol": config.tolerances.ode_tol,
            "refine_ms": config.tolerances.refine_ms,
        },
        "seed": config.seed,
        "output_grid_points": config.output_grid_points,
        "sweep": config.sweep,
    }
    return out


def params_hash(config: ExperimentConfig) -> str:
    """Short digest of everything that determines the numbers (not workers)."""
    canon = json.dumps(config_to_dict(config), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# result containers and serialization


@dataclass
class ResultTable:
    name: str
    columns: List[str]
    rows: List[tuple]


@dataclass
class RunResult:
    config: ExperimentConfig
    tables: List[ResultTable]
    metadata: dict


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return "nan"
    return "%.12e" % float(value)


def write_outputs(result: RunResult, out_dir, timestamp: Optional[str] = None) -> List[Path]:
    """One CSV per table plus one JSON sidecar; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    digest = params_hash(result.config)
    seed = result.config.seed
    paths = []
    for table in result.tables:
        path = out / f"{table.name}_{timestamp}_{seed}.csv"
        header = table.columns + ["params_hash", "seed", "version"]
        lines = [",".join(header)]
        for row in table.rows:
            cells = [_fmt(v) for v in row] + [digest, str(seed), __version__]
            lines.append(",".join(cells))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    sidecar = out / f"{result.config.experiment}_{timestamp}_{seed}.json"
    meta = {
        "config": config_to_dict(result.config),
        "params_hash": digest,
        "seed": seed,
        "version": __version__,
        "timestamp": timestamp,
        "tables": {t.name: {"columns": t.columns, "rows": len(t.rows)} for t in result.tables},
        **result.metadata,
    }
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    paths.append(sidecar)
    return paths


# ---------------------------------------------------------------------------
# shared helpers


def reduced_basis_state(label: str) -> DensityMatrix:
    return DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, BASIS_LABELS[label]))


def random_product_states(seed: int, count: int) -> List[Tuple[str, DensityMatrix]]:
    """Haar-random single-qubit pairs; deterministic in the seed."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        kets = []
        for _ in range(2):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            kets.append(v / np.linalg.norm(v))
        out.append((f"rand{i}", DensityMatrix.from_ket(TWO_QUBITS, np.kron(kets[0], kets[1]))))
    return out


def state_ensemble(seed: int, n_random: int = 8) -> List[Tuple[str, DensityMatrix]]:
    """The fixed averaging ensemble: 4 basis states + seeded product states."""
    out = [(label, reduced_basis_state(label)) for label in ("uu", "ud", "du", "dd")]
    out.extend(random_product_states(seed, n_random))
    return out


def initial_reduced_state(config: ExperimentConfig) -> DensityMatrix:
    spec = config.initial_state
    if spec.kind == "basis":
        return reduced_basis_state(spec.label)
    if spec.kind == "random_product":
        return random_product_states(config.seed, 1)[0][1]
    mat = np.array(
        [[complex(pair[0], pair[1]) for pair in row] for row in spec.entries]
    )
    if mat.shape != (4, 4):
        raise ConfigError(f"matrix initial state must be 4x4, got {mat.shape}")
    return DensityMatrix(TWO_QUBITS, mat, trace_tol=1e-6, herm_tol=1e-8, psd_tol=1e-6)


def full_vacuum_state(params: PhysicalParams, label: str = "uu") -> DensityMatrix:
    layout = SpaceLayout([2, 2, params.fock_dim])
    a1, a2 = BASIS_LABELS[label]
    return DensityMatrix.from_ket(layout, basis_ket(layout, (a1, a2, 0)))


def _grid(config: ExperimentConfig, key: str, default: Sequence[float]) -> Tuple[float, ...]:
    return tuple(config.grids.get(key, tuple(float(v) for v in default)))


def _map_ordered(fn: Callable, payloads: list, workers: int) -> list:
    if workers <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads, chunksize=1))


def _time_grid(t_final: float, points: int) -> np.ndarray:
    return np.linspace(0.0, t_final, points)


# ---------------------------------------------------------------------------
# fig2a: steady concurrence vs detuning ratio


def run_fig2a(config: ExperimentConfig) -> RunResult:
    d = model.derive(config.params)
    kappas = _grid(config, "kappa", np.round(np.arange(0.0, 2.0001, 0.02), 10))
    rows = []
    worst = 0.0
    for kap in kappas:
        c_formula = model.steady_concurrence(kap)
        if kap == 0.0:
            rows.append((kap, c_formula, float("nan"), float("nan")))
            continue
        dw = kap * abs(d.alpha)
        reduced = model.build_reduced(config.params, schedules.Constant(dw))
        dim, basis = dynamics.steady_states(reduced)
        if dim != 1:
            raise DegenerateSteadyStateError(
                f"expected a unique steady state at kappa={kap}, found dimension {dim}"
            )
        c_num = analysis.concurrence(basis[0])
        worst = max(worst, abs(c_num - c_formula))
        rows.append((kap, c_formula, c_num, abs(c_num - c_formula)))
    table = ResultTable(
        "fig2a", ["kappa", "C_formula", "C_numeric", "abs_discrepancy"], rows
    )
    return RunResult(config, [table], {"max_discrepancy": worst})


# ---------------------------------------------------------------------------
# fig2b: time to 99% of the steady concurrence over (gamma/alpha, kappa)


def _fig2b_params(ratio: float) -> PhysicalParams:
    # holds |alpha| = 40 kHz fixed while gamma/|alpha| = ratio:
    # g = 100*ratio, gamma_b = 10 g, alpha0 = 200
    return PhysicalParams(alpha0=200.0, g1=100.0 * ratio, gamma_b=1000.0 * ratio)


def _fig2b_cell(payload):
    ratio, kappa, seed, n_random, t_max, ode_tol, refine, grid_points = payload
    params = _fig2b_params(ratio)
    d = model.derive(params)
    dw = kappa * abs(d.alpha)
    reduced = model.build_reduced(params, schedules.Constant(dw))
    c_ref = model.steady_concurrence(kappa)
    times = []
    for _, state in state_ensemble(seed, n_random):
        t99 = analysis.time_to_threshold(
            reduced,
            state,
            0.99,
            c_ref,
            t_max,
            tol=ode_tol,
            grid_points=grid_points,
            refine_to=refine,
        )
        times.append(t99)
    reached = [t for t in times if t is not None]
    n_states = len(times)
    if reached:
        mean = float(np.mean(reached))
        spread = (float(np.min(reached)), float(np.max(reached)), float(np.std(reached)))
        log_mean = math.log10(mean) if mean > 0 else float("-inf")
    else:
        mean = float("nan")
        spread = (float("nan"), float("nan"), float("nan"))
        log_mean = float("nan")
    return (
        ratio,
        kappa,
        mean,
        spread[0],
        spread[1],
        spread[2],
        len(reached),
        n_states,
        log_mean,
    )


def run_fig2b(config: ExperimentConfig) -> RunResult:
    ratios = _grid(config, "gamma_over_alpha", np.round(np.arange(0.5, 5.0001, 0.5), 10))
    kappas = _grid(config, "kappa", np.round(np.arange(0.1, 1.0001, 0.1), 10))
    t_max = config.t_final if config.t_final is not None else 400.0
    payloads = [
        (
            ratio,
            kappa,
            config.seed,
            config.initial_state.count,
            t_max,
            config.tolerances.ode_tol,
            config.tolerances.refine_ms,
            config.output_grid_points,
        )
        for ratio in ratios
        for kappa in kappas
    ]
    rows = _map_ordered(_fig2b_cell, payloads, config.workers)
    table = ResultTable(
        "fig2b",
        [
            "gamma_over_alpha",
            "kappa",
            "t99_mean_ms",
            "t99_min_ms",
            "t99_max_ms",
            "t99_std_ms",
            "n_reached",
            "n_states",
            "log10_t99_mean",
        ],
        rows,
    )
    return RunResult(config, [table], {"t_max": t_max})


# ---------------------------------------------------------------------------
# fig3: concurrence under the three simple detuning profiles


def _fig3_profiles(config: ExperimentConfig) -> Dict[str, schedules.DetuningSchedule]:
    if config.profiles is not None:
        return dict(config.profiles)
    return {
        "constant": schedules.Constant(5.6),
        "linear": schedules.Linear(100.0, 5.0),
        "exponential": schedules.Exponential(100.0, 0.8),
    }


def run_fig3(config: ExperimentConfig) -> RunResult:
    t_final = config.t_final if config.t_final is not None else 20.0
    grid = _time_grid(t_final, config.output_grid_points)
    rho0 = initial_reduced_state(config)
    rows = []
    for name, sched in _fig3_profiles(config).items():
        reduced = model.build_reduced(config.params, sched)
        traj = dynamics.evolve(reduced, rho0, t_final, grid, tol=config.tolerances.ode_tol)
        cs = analysis.concurrence_series(traj)
        for t, c in zip(grid, cs):
            rows.append((name, t, sched.value_at(float(t)), c))
    table = ResultTable("fig3", ["profile", "t_ms", "delta_omega_kHz", "concurrence"], rows)
    return RunResult(config, [table], {})


# ---------------------------------------------------------------------------
# fig4: concurrence vs time and atomic decay, constant and exponential


def _decay_curve(payload):
    (params_base, sched_dict, gamma_n, t_final, points, ode_tol, label) = payload
    sched = schedules.from_dict(sched_dict)
    params = replace(params_base, gamma1=gamma_n, gamma2=gamma_n)
    reduced = model.build_reduced(params, sched, include_atomic_decay=True)
    rho0 = reduced_basis_state(label)
    grid = _time_grid(t_final, points)
    traj = dynamics.evolve(reduced, rho0, t_final, grid, tol=ode_tol)
    return analysis.concurrence_series(traj)


def _default_gamma_n_grid() -> list:
    return [0.0] + list(np.logspace(-3, -1, 7))


def run_fig4(config: ExperimentConfig) -> RunResult:
    t_final = config.t_final if config.t_final is not None else 20.0
    gammas = _grid(config, "gamma_n", _default_gamma_n_grid())
    profiles = (
        dict(config.profiles)
        if config.profiles is not None
        else {
            "constant": schedules.Constant(5.6),
            "exponential": schedules.Exponential(100.0, 0.8),
        }
    )
    label = config.initial_state.label if config.initial_state.kind == "basis" else "uu"
    grid = _time_grid(t_final, config.output_grid_points)
    payloads = [
        (
            config.params,
            schedules.to_dict(sched),
            gn,
            t_final,
            config.output_grid_points,
            config.tolerances.ode_tol,
            label,
        )
        for name, sched in profiles.items()
        for gn in gammas
    ]
    curves = _map_ordered(_decay_curve, payloads, config.workers)
    rows = []
    i = 0
    for name, _sched in profiles.items():
        for gn in gammas:
            for t, c in zip(grid, curves[i]):
                rows.append((name, gn, t, c))
            i += 1
    table = ResultTable("fig4", ["profile", "gamma_n_kHz", "t_ms", "concurrence"], rows)
    return RunResult(config, [table], {})


# ---------------------------------------------------------------------------
# fig5: exponential detuning with an offset picked from the observed peak


def _fig5_cell(payload):
    (params_base, base_sched_dict, sweep_kind, value, t_final, points, ode_tol, label) = payload
    base = schedules.from_dict(base_sched_dict)
    if sweep_kind == "gamma_n":
        params = replace(params_base, gamma1=value, gamma2=value)
    else:  # eta_g sweep
        params = replace(params_base, eta_g=value)
    include_decay = params.gamma1 > 0 or params.gamma2 > 0
    d = model.derive(params)
    rho0 = reduced_basis_state(label)
    grid = _time_grid(t_final, points)

    ref_model = model.build_reduced(params, base, include_atomic_decay=include_decay)
    ref_traj = dynamics.evolve(ref_model, rho0, t_final, grid, tol=ode_tol)
    peak = float(np.max(analysis.concurrence_series(ref_traj)))

    target = min(max(peak, 1e-6), 1.0)
    dw_f = schedules.offset_for_target(target, d.alpha)
    sched = schedules.ExponentialOffset(base.delta_omega_initial, dw_f, base.rate)
    run_model = model.build_reduced(params, sched, include_atomic_decay=include_decay)
    traj = dynamics.evolve(run_model, rho0, t_final, grid, tol=ode_tol)
    series = analysis.concurrence_series(traj)
    ref_series = analysis.concurrence_series(ref_traj)
    return peak, dw_f, series, ref_series


def run_fig5(config: ExperimentConfig) -> RunResult:
    t_final = config.t_final if config.t_final is not None else 20.0
    base = (
        config.schedule
        if isinstance(config.schedule, schedules.Exponential)
        else schedules.Exponential(100.0, 0.8)
    )
    gammas = _grid(config, "gamma_n", _default_gamma_n_grid())
    etas = _grid(config, "eta_g", np.round(np.arange(0.0, 0.2001, 0.02), 10))
    label = config.initial_state.label if config.initial_state.kind == "basis" else "uu"
    grid = _time_grid(t_final, config.output_grid_points)

    common = (
        config.params,
        schedules.to_dict(base),
        t_final,
        config.output_grid_points,
        config.tolerances.ode_tol,
        label,
    )
    payloads = [
        (common[0], common[1], "gamma_n", gn, common[2], common[3], common[4], common[5])
        for gn in gammas
    ] + [
        (common[0], common[1], "eta_g", eg, common[2], common[3], common[4], common[5])
        for eg in etas
    ]
    results = _map_ordered(_fig5_cell, payloads, config.workers)

    columns = [
        "sweep_value",
        "t_ms",
        "concurrence",
        "concurrence_no_offset",
        "delta_omega_f_kHz",
        "peak_reference",
    ]
    decay_rows, asym_rows = [], []
    for idx, gn in enumerate(gammas):
        peak, dw_f, series, ref = results[idx]
        for t, c, c0 in zip(grid, series, ref):
            decay_rows.append((gn, t, c, c0, dw_f, peak))
    for jdx, eg in enumerate(etas):
        peak, dw_f, series, ref = results[len(gammas) + jdx]
        for t, c, c0 in zip(grid, series, ref):
            asym_rows.append((eg, t, c, c0, dw_f, peak))
    tables = [
        ResultTable("fig5-decay", columns, decay_rows),
        ResultTable("fig5-asym", columns, asym_rows),
    ]
    return RunResult(config, tables, {"base_profile": schedules.to_dict(base)})


# ---------------------------------------------------------------------------
# fig6: concurrence vs time and coupling asymmetry


def _asym_curve(payload):
    (params_base, sched_dict, eta_g, t_final, points, ode_tol, label) = payload
    sched = schedules.from_dict(sched_dict)
    params = replace(params_base, eta_g=eta_g)
    reduced = model.build_reduced(params, sched)
    rho0 = reduced_basis_state(label)
    grid = _time_grid(t_final, points)
    traj = dynamics.evolve(reduced, rho0, t_final, grid, tol=ode_tol)
    return analysis.concurrence_series(traj)


def run_fig6(config: ExperimentConfig) -> RunResult:
    t_final = config.t_final if config.t_final is not None else 20.0
    etas = _grid(config, "eta_g", np.round(np.arange(0.0, 0.2001, 0.02), 10))
    profiles = (
        dict(config.profiles)
        if config.profiles is not None
        else {
            "constant": schedules.Constant(5.6),
            "exponential": schedules.Exponential(100.0, 0.8),
        }
    )
    label = config.initial_state.label if config.initial_state.kind == "basis" else "uu"
    grid = _time_grid(t_final, config.output_grid_points)
    payloads = [
        (
            config.params,
            schedules.to_dict(sched),
            eg,
            t_final,
            config.output_grid_points,
            config.tolerances.ode_tol,
            label,
        )
        for name, sched in profiles.items()
        for eg in etas
    ]
    curves = _map_ordered(_asym_curve, payloads, config.workers)
    rows = []
    i = 0
    for name, _sched in profiles.items():
        for eg in etas:
            for t, c in zip(grid, curves[i]):
                rows.append((name, eg, t, c))
            i += 1
    table = ResultTable("fig6", ["profile", "eta_g", "t_ms", "concurrence"], rows)
    return RunResult(config, [table], {})


# ---------------------------------------------------------------------------
# offset-fit: late concurrence vs common frequency offset, with quadratic fit


def _offset_cell(payload):
    (params_base, sched_dict, eta_omega, t_final, points, ode_tol, label) = payload
    sched = schedules.from_dict(sched_dict)
    params = replace(params_base, eta_omega=eta_omega)
    reduced = model.build_reduced(params, sched)
    rho0 = reduced_basis_state(label)
    grid = _time_grid(t_final, points)
    traj = dynamics.evolve(reduced, rho0, t_final, grid, tol=ode_tol)
    return analysis.concurrence(traj.states[-1])


def run_offset_fit(config: ExperimentConfig) -> RunResult:
    t_final = config.t_final if config.t_final is not None else 20.0
    etas = _grid(config, "eta_omega", np.round(np.arange(0.0, 1.0001, 0.1), 10))
    profiles = (
        dict(config.profiles)
        if config.profiles is not None
        else {
            "constant": schedules.Constant(5.6),
            "exponential": schedules.Exponential(100.0, 0.8),
        }
    )
    label = config.initial_state.label if config.initial_state.kind == "basis" else "uu"
    payloads = [
        (
            config.params,
            schedules.to_dict(sched),
            eta,
            t_final,
            config.output_grid_points,
            config.tolerances.ode_tol,
            label,
        )
        for name, sched in profiles.items()
        for eta in etas
    ]
    values = _map_ordered(_offset_cell, payloads, config.workers)
    point_rows, fit_rows = [], []
    i = 0
    for name in profiles:
        ys = values[i : i + len(etas)]
        for eta, c in zip(etas, ys):
            point_rows.append((name, eta, c))
        fit = analysis.quad_fit(etas, ys)
        fit_rows.append((name, fit.a2, fit.a1, fit.a0, fit.residual))
        i += len(etas)
    tables = [
        ResultTable("offset-fit", ["profile", "eta_omega", "C_final"], point_rows),
        ResultTable("offset-fit-quad", ["profile", "a2", "a1", "a0", "residual"], fit_rows),
    ]
    return RunResult(config, tables, {"t_final": t_final})


# ---------------------------------------------------------------------------
# validate: exact vs reduced model agreement


def _validation_case(payload):
    (params_dict, sched_dict, fock_dim, t_final, points, ode_tol, label) = payload
    params = PhysicalParams(**{**params_dict, "fock_dim": fock_dim})
    sched = schedules.from_dict(sched_dict)
    grid = _time_grid(t_final, points)
    full = model.build_full(params, sched)
    reduced = model.build_reduced(params, sched)
    rho0_full = full_vacuum_state(params, label)
    rho0_red = reduced_basis_state(label)
    traj_full = dynamics.evolve(full, rho0_full, t_final, grid, tol=ode_tol)
    traj_red = dynamics.evolve(reduced, rho0_red, t_final, grid, tol=ode_tol)
    atoms = dynamics.Trajectory(
        grid,
        [partial_trace(s, (0, 1)) for s in traj_full.states],
        {"params": params},
    )
    eps_fro = analysis.norm_error(atoms, traj_red, "frobenius")
    eps_tr = analysis.norm_error(atoms, traj_red, "trace")
    corr = model.correction_diagnostic(traj_full)
    return eps_fro, eps_tr, float(np.max(corr.one_photon_population)), float(
        np.max(corr.correction_norm)
    )


def run_validation(config: ExperimentConfig) -> RunResult:
    t_final = config.t_final if config.t_final is not None else 20.0
    profiles = (
        dict(config.profiles)
        if config.profiles is not None
        else {
            "constant": schedules.Constant(5.6),
            "exponential": schedules.Exponential(100.0, 0.8),
        }
    )
    label = config.initial_state.label if config.initial_state.kind == "basis" else "uu"
    p = config.params
    params_dict = {
        "alpha0": p.alpha0,
        "g1": p.g1,
        "gamma_b": p.gamma_b,
        "gamma1": p.gamma1,
        "gamma2": p.gamma2,
        "eta_g": p.eta_g,
        "eta_omega": p.eta_omega,
    }
    cases = []
    for name, sched in profiles.items():
        for fock in (p.fock_dim, p.fock_dim + 2):
            cases.append((name, fock, p.gamma_b, sched))
    # stronger cavity damping: reduction must get better (constant profile)
    const_profiles = [
        (n, s) for n, s in profiles.items() if isinstance(s, schedules.Constant)
    ]
    if const_profiles:
        n0, s0 = const_profiles[0]
        cases.append((n0 + "_gbx10", p.fock_dim, 10.0 * p.gamma_b, s0))
    payloads = [
        (
            {**params_dict, "gamma_b": gb},
            schedules.to_dict(sched),
            fock,
            t_final,
            config.output_grid_points,
            config.tolerances.ode_tol,
            label,
        )
        for (_name, fock, gb, sched) in cases
    ]
    results = _map_ordered(_validation_case, payloads, config.workers)
    rows = []
    for (name, fock, gb, _sched), (eps_f, eps_t, p1, corr) in zip(cases, results):
        rows.append((name, "frobenius", fock, gb, eps_f, p1, corr))
        rows.append((name, "trace", fock, gb, eps_t, p1, corr))
    table = ResultTable(
        "validate",
        [
            "profile",
            "norm_kind",
            "fock_dim",
            "gamma_b_kHz",
            "epsilon",
            "max_one_photon_population",
            "max_correction_norm",
        ],
        rows,
    )
    return RunResult(config, [table], {"t_final": t_final})


# ---------------------------------------------------------------------------
# generic sweep and steady-state inspection


_SWEEP_PARAMS = ("gamma_n", "eta_g", "eta_omega", "delta_omega", "kappa")
_SWEEP_OBSERVABLES = ("c_final", "t99", "c_ss")


def run_sweep(config: ExperimentConfig) -> RunResult:
    if not config.sweep:
        raise ConfigError("sweep experiment needs a 'sweep' object in the config")
    parameter = config.sweep.get("parameter")
    observable = config.sweep.get("observable", "c_final")
    values = config.sweep.get("values")
    if parameter not in _SWEEP_PARAMS:
        raise ConfigError(f"sweep parameter must be one of {_SWEEP_PARAMS}")
    if observable not in _SWEEP_OBSERVABLES:
        raise ConfigError(f"sweep observable must be one of {_SWEEP_OBSERVABLES}")
    if not values:
        raise ConfigError("sweep needs a non-empty 'values' list")
    t_final = config.t_final if config.t_final is not None else 20.0
    base = config.schedule if config.schedule is not None else schedules.Constant(5.6)
    d0 = model.derive(config.params)
    rows = []
    for v in [float(x) for x in values]:
        p = config.params
        sched = base
        if parameter == "gamma_n":
            p = replace(p, gamma1=v, gamma2=v)
        elif parameter == "eta_g":
            p = replace(p, eta_g=v)
        elif parameter == "eta_omega":
            p = replace(p, eta_omega=v)
        elif parameter == "delta_omega":
            sched = schedules.Constant(v)
        elif parameter == "kappa":
            sched = schedules.Constant(v * abs(d0.alpha))
        include_decay = p.gamma1 > 0 or p.gamma2 > 0
        reduced = model.build_reduced(p, sched, include_atomic_decay=include_decay)
        rho0 = initial_reduced_state(config)
        if observable == "c_ss":
            dim, basis = dynamics.steady_states(reduced)
            result = analysis.concurrence(basis[0]) if dim == 1 else float("nan")
        elif observable == "t99":
            dim, basis = dynamics.steady_states(reduced)
            c_ref = analysis.concurrence(basis[0]) if dim == 1 else 1.0
            t = analysis.time_to_threshold(
                reduced, rho0, 0.99, c_ref, t_final,
                tol=config.tolerances.ode_tol,
                grid_points=config.output_grid_points,
                refine_to=config.tolerances.refine_ms,
            )
            result = float("nan") if t is None else t
        else:
            grid = _time_grid(t_final, config.output_grid_points)
            traj = dynamics.evolve(reduced, rho0, t_final, grid, tol=config.tolerances.ode_tol)
            result = analysis.concurrence(traj.states[-1])
        rows.append((parameter, v, observable, result))
    table = ResultTable("sweep", ["parameter", "value", "observable", "result"], rows)
    return RunResult(config, [table], {})


def run_steady_state(config: ExperimentConfig) -> RunResult:
    sched = config.schedule if config.schedule is not None else schedules.Constant(5.6)
    include_decay = config.params.gamma1 > 0 or config.params.gamma2 > 0
    reduced = model.build_reduced(config.params, sched, include_atomic_decay=include_decay)
    dim, basis = dynamics.steady_states(reduced)
    dw0 = sched.value_at(0.0)
    d = model.derive(config.params)
    if dim == 1:
        state = basis[0]
        conc = analysis.concurrence(state)
        pur = state.purity()
        gap = dynamics.spectral_gap(reduced)
    else:
        conc = float("nan")
        pur = float("nan")
        gap = float("nan")
    rows = [(dw0, d.alpha, d.gamma, dim, conc, pur, gap)]
    table = ResultTable(
        "steady-state",
        [
            "delta_omega_kHz",
            "alpha_kHz",
            "gamma_kHz",
            "null_dimension",
            "concurrence",
            "purity",
            "spectral_gap_kHz",
        ],
        rows,
    )
    return RunResult(config, [table], {"null_dimension": dim})


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], RunResult]] = {
    "fig2a": run_fig2a,
    "fig2b": run_fig2b,
    "fig3": run_fig3,
    "fig4": run_fig4,
    "fig5": run_fig5,
    "fig6": run_fig6,
    "offset-fit": run_offset_fit,
    "validate": run_validation,
    "sweep": run_sweep,
    "steady-state": run_steady_state,
}


def run_experiment(config: ExperimentConfig) -> RunResult:
    return EXPERIMENTS[config.experiment](config)
