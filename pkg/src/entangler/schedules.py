"""Detuning profiles: how the symmetry-breaking splitting varies in time.

All values are in kHz (angular convention), time in ms.  A constant profile
keeps the dynamics autonomous; the decaying profiles trade a fast early
approach for a high final entanglement, and the offset variant levels off
at a nonzero splitting to hold the state near its peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Constant:
    delta_omega: float

    def value_at(self, t: float) -> float:
        _check_time(t)
        return self.delta_omega


@dataclass(frozen=True)
class Linear:
    """Ramp from delta_omega_initial to 0 at t_end, clamped at 0 afterwards."""

    delta_omega_initial: float
    t_end: float = 5.0

    def value_at(self, t: float) -> float:
        _check_time(t)
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        return self.delta_omega_initial * max(0.0, 1.0 - t / self.t_end)


@dataclass(frozen=True)
class Exponential:
    """delta_omega_initial * exp(-rate * t); rate in 1/ms."""

    delta_omega_initial: float
    rate: float

    def value_at(self, t: float) -> float:
        _check_time(t)
        return self.delta_omega_initial * math.exp(-self.rate * t)


@dataclass(frozen=True)
class ExponentialOffset:
    """Exponential approach to a nonzero asymptotic splitting."""

    delta_omega_initial: float
    delta_omega_final: float
    rate: float

    def value_at(self, t: float) -> float:
        _check_time(t)
        return self.delta_omega_final + (
            self.delta_omega_initial - self.delta_omega_final
        ) * math.exp(-self.rate * t)


DetuningSchedule = Union[Constant, Linear, Exponential, ExponentialOffset]


def _check_time(t: float):
    if t < 0:
        raise ValueError(f"schedule time must be >= 0, got {t}")


def value_at(schedule: DetuningSchedule, t: float) -> float:
    """Detuning (kHz) at time t (ms)."""
    return schedule.value_at(t)


def is_constant(schedule: DetuningSchedule) -> bool:
    return isinstance(schedule, Constant)


def offset_for_target(c_target: float, alpha: float) -> float:
    """Asymptotic splitting whose steady concurrence equals c_target.

    Inverts C = (1 + (dw/alpha)^2 / 2)^-1 for dw >= 0.
    """
    if not 0.0 < c_target <= 1.0:
        raise ValueError(f"target concurrence must be in (0, 1], got {c_target}")
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    return abs(alpha) * math.sqrt(2.0 * (1.0 / c_target - 1.0))


def to_dict(schedule: DetuningSchedule) -> dict:
    """JSON-friendly form used inside experiment configs."""
    if isinstance(schedule, Constant):
        return {"kind": "constant", "delta_omega": schedule.delta_omega}
    if isinstance(schedule, Linear):
        return {
            "kind": "linear",
            "delta_omega_initial": schedule.delta_omega_initial,
            "t_end": schedule.t_end,
        }
    if isinstance(schedule, Exponential):
        return {
            "kind": "exponential",
            "delta_omega_initial": schedule.delta_omega_initial,
            "rate": schedule.rate,
        }
    if isinstance(schedule, ExponentialOffset):
        return {
            "kind": "exponential_offset",
            "delta_omega_initial": schedule.delta_omega_initial,
            "delta_omega_final": schedule.delta_omega_final,
            "rate": schedule.rate,
        }
    raise TypeError(f"not a schedule: {schedule!r}")


_SCHEDULE_FIELDS = {
    "constant": ("delta_omega",),
    "linear": ("delta_omega_initial", "t_end"),
    "exponential": ("delta_omega_initial", "rate"),
    "exponential_offset": ("delta_omega_initial", "delta_omega_final", "rate"),
}

_SCHEDULE_TYPES = {
    "constant": Constant,
    "linear": Linear,
    "exponential": Exponential,
    "exponential_offset": ExponentialOffset,
}


def from_dict(data: dict) -> DetuningSchedule:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError(f"schedule spec must be a dict with a 'kind' key, got {data!r}")
    kind = data["kind"]
    if kind not in _SCHEDULE_TYPES:
        raise ValueError(
            f"unknown schedule kind {kind!r}; expected one of {sorted(_SCHEDULE_TYPES)}"
        )
    allowed = set(_SCHEDULE_FIELDS[kind]) | {"kind"}
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown schedule keys {sorted(unknown)} for kind {kind!r}")
    kwargs = {k: float(v) for k, v in data.items() if k != "kind"}
    return _SCHEDULE_TYPES[kind](**kwargs)
