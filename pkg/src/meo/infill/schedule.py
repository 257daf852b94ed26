"""Noise schedule for the infilling diffusion model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_STEPS = 50


@dataclass(frozen=True)
class DiffusionSchedule:
    """Cumulative noise coefficients alpha_bar_t for t = 1..steps."""
    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        if a.ndim != 1 or len(a) < 1:
            raise ValueError("schedule must be a non-empty 1-d array")
        if not (np.all(a > 0.0) and np.all(a < 1.0)):
            raise ValueError("alpha_bar values must lie in (0, 1)")
        if not np.all(np.diff(a) < 0.0):
            raise ValueError("alpha_bar must decrease strictly monotonically")
        if a[0] < 0.9:
            raise ValueError("alpha_bar_1 must be close to 1 (>= 0.9)")
        if a[-1] > 0.1:
            raise ValueError("alpha_bar_T must be close to 0 (<= 0.1)")
        a.flags.writeable = False
        object.__setattr__(self, "alphas", a)

    @property
    def steps(self) -> int:
        return len(self.alphas)

    def alpha_bar(self, t: int) -> float:
        if not 1 <= t <= self.steps:
            raise ValueError(f"t={t} out of range 1..{self.steps}")
        return float(self.alphas[t - 1])


def cosine_schedule(steps: int = DEFAULT_STEPS, s: float = 0.008) -> DiffusionSchedule:
    t = np.arange(1, steps + 1)
    f = np.cos((t / steps + s) / (1 + s) * np.pi / 2) ** 2
    f0 = np.cos(s / (1 + s) * np.pi / 2) ** 2
    a = np.clip(f / f0, 1e-5, 1 - 1e-5)
    return DiffusionSchedule(a)


def lambda_blend(t: int, steps: int) -> float:
    """Spline-guidance weight at denoising step t of T; zero at t = 1."""
    if not 1 <= t <= steps:
        raise ValueError(f"t={t} out of range 1..{steps}")
    return (t - 1) / steps
