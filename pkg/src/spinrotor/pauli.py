"""Averaged spin in a constant plus circularly polarized magnetic field.

In the frame rotating with the field the averaged spin obeys a linear,
time-independent system::

    s1' =  (Omega + g Hz) s2
    s2' =  g H s3 - (Omega + g Hz) s1
    s3' = -g H s2

All quantities are in normalized (Compton) units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FrameError, PreconditionError

ROTATING = "rotating"
LAB = "lab"


@dataclass(frozen=True)
class PauliConfig:
    g: float
    H: float
    Hz: float
    Omega: float

    def __post_init__(self):
        for name in ("g", "H", "Hz", "Omega"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"PauliConfig.{name} must be finite")
        if self.H < 0:
            raise DomainError("PauliConfig.H must be non-negative")

    @property
    def detuning(self) -> float:
        """Omega + g Hz; zero at resonance."""
        return self.Omega + self.g * self.Hz

    @property
    def rabi(self) -> float:
        return self.g * self.H


@dataclass(frozen=True)
class SpinVector:
    s1: float
    s2: float
    s3: float
    frame: str = ROTATING

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3], dtype=float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.s1**2 + self.s2**2 + self.s3**2)


@dataclass(frozen=True)
class SpinSeries:
    t: np.ndarray
    s: np.ndarray  # shape (len(t), 3)
    frame: str = ROTATING

    def __len__(self):
        return len(self.t)

    def __getitem__(self, k) -> SpinVector:
        return SpinVector(*map(float, self.s[k]), frame=self.frame)

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.s, axis=1)


def _generator(cfg: PauliConfig) -> np.ndarray:
    w, delta = cfg.rabi, cfg.detuning
    return np.array(
        [
            [0.0, delta, 0.0],
            [-delta, 0.0, w],
            [0.0, -w, 0.0],
        ]
    )


def spin_rhs(s: SpinVector, cfg: PauliConfig) -> np.ndarray:
    if s.frame != ROTATING:
        raise FrameError("spin_rhs expects a rotating-frame spin vector")
    return _generator(cfg) @ s.as_array()


def recommended_dt(cfg: PauliConfig) -> float:
    """Step-size heuristic: 1/100 of the inverse fastest angular rate."""
    return 0.01 / (abs(cfg.rabi) + abs(cfg.detuning) + 1e-12)


def integrate_spin(
    s0: SpinVector,
    cfg: PauliConfig,
    t_max: float,
    dt: float,
) -> SpinSeries:
    """Classical fixed-step RK4. Samples at ``k * dt``; the last step is
    shortened so the series ends exactly at ``t_max``."""
    if s0.frame != ROTATING:
        raise FrameError("integrate_spin works in the rotating frame")
    if not (math.isfinite(dt) and dt > 0):
        raise DomainError("dt must be positive and finite")
    if not (math.isfinite(t_max) and t_max >= 0):
        raise DomainError("t_max must be finite and non-negative")
    if abs(s0.norm - 1.0) > 1e-9:
        raise PreconditionError(f"initial spin must have unit norm, got {s0.norm!r}")

    m = _generator(cfg)
    n_full = int(math.floor(t_max / dt + 1e-9))
    times = [k * dt for k in range(n_full + 1)]
    if t_max - times[-1] > 1e-12 * max(1.0, t_max):
        times.append(t_max)
    times = np.array(times)
    out = np.empty((len(times), 3))
    y = s0.as_array()
    out[0] = y
    for k in range(1, len(times)):
        h = times[k] - times[k - 1]
        k1 = m @ y
        k2 = m @ (y + 0.5 * h * k1)
        k3 = m @ (y + 0.5 * h * k2)
        k4 = m @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k] = y
    return SpinSeries(times, out, ROTATING)


def resonance_frequency(cfg: PauliConfig) -> float:
    return -cfg.g * cfg.Hz


def analytic_resonant_solution(t, cfg: PauliConfig, tol: float = 1e-12):
    """Rotating-frame spin (0, sin gHt, cos gHt) starting from (0, 0, 1).

    Scalar ``t`` returns a SpinVector, array ``t`` a SpinSeries.
    """
    if abs(cfg.detuning) > tol:
        raise PreconditionError(
            f"not at resonance: Omega + g Hz = {cfg.detuning!r}"
        )
    w = cfg.rabi
    if np.ndim(t) == 0:
        return SpinVector(0.0, math.sin(w * t), math.cos(w * t), ROTATING)
    t = np.asarray(t, dtype=float)
    s = np.column_stack([np.zeros_like(t), np.sin(w * t), np.cos(w * t)])
    return SpinSeries(t, s, ROTATING)


def to_lab_frame(series: SpinSeries, Omega: float) -> SpinSeries:
    """Rotate the transverse components back by the angle Omega t."""
    if series.frame != ROTATING:
        raise FrameError("to_lab_frame expects a rotating-frame series")
    c = np.cos(Omega * series.t)
    s = np.sin(Omega * series.t)
    s1, s2, s3 = series.s.T
    lab = np.column_stack([s1 * c - s2 * s, s1 * s + s2 * c, s3])
    return SpinSeries(series.t.copy(), lab, LAB)


def max_flip_depth(cfg: PauliConfig, t_max: float, dt: float | None = None) -> float:
    """1 - min s3 over a run from (0, 0, 1)."""
    step = dt if dt is not None else recommended_dt(cfg)
    run = integrate_spin(SpinVector(0.0, 0.0, 1.0), cfg, t_max, step)
    return float(1.0 - run.s[:, 2].min())
