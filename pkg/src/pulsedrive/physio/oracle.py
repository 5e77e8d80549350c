"""Synthetic danger oracle: maps sim state to a [0,1] threat level.

Stands in for a human driver's arousal response: threat rises exponentially
as walls get close, speed near walls adds to it, and a collision saturates
it at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..sim import CarState, StepEvents


@dataclass(frozen=True)
class ThreatConfig:
    w_distance: float = 0.6
    w_speed: float = 0.6
    d0: float = 2.0  # meters; proximity decay scale
    v_max: float = 5.0


@dataclass(frozen=True)
class ThreatSignal:
    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "timestamps", np.asarray(self.timestamps, dtype=np.float64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.timestamps.shape != self.values.shape:
            raise ValueError("threat timestamps/values length mismatch")
        if np.any(np.diff(self.timestamps) <= 0):
            raise ValueError("threat timestamps must be strictly increasing")
        if np.any((self.values < 0) | (self.values > 1)):
            raise ValueError("threat values must lie in [0,1]")

    @property
    def t_start(self) -> float:
        return float(self.timestamps[0])

    @property
    def t_end(self) -> float:
        return float(self.timestamps[-1])

    def at(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.timestamps, self.values)


def threat_from_state(state: CarState, events: StepEvents,
                      config: ThreatConfig = ThreatConfig()) -> float:
    if events.collided:
        return 1.0
    d = events.distance_to_wall
    if d < 0:
        raise ValueError("distance_to_wall must be non-negative")
    prox = math.exp(-d / config.d0)
    raw = config.w_distance * prox + config.w_speed * (state.speed / config.v_max) * prox
    return min(max(raw, 0.0), 1.0)
