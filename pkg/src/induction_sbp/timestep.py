"""Explicit second-order Runge-Kutta (Heun) time stepping."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import SbpGrid, VectorField
from .model import VelocityField

log = logging.getLogger(__name__)

Rhs = Callable[[np.ndarray, float], np.ndarray]


class InstabilityError(RuntimeError):
    def __init__(self, t: float, location: tuple, value: float):
        self.t = t
        self.location = location
        self.value = value
        super().__init__(f"non-finite or exploding solution at t={t:.6g}, index {location}: {value}")


@dataclass
class StepControl:
    cfl: float = 0.5
    t_final: float = 2 * math.pi
    diffusion_safety: float = 0.9
    dt: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")


@dataclass
class RunMonitors:
    t: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    divergence: list = field(default_factory=list)
    curl: list = field(default_factory=list)

    def record(self, t, energy, divergence, curl=float("nan")):
        if self.t and t < self.t[-1]:
            raise ValueError("monitor times must be non-decreasing")
        self.t.append(float(t))
        self.energy.append(float(energy))
        self.divergence.append(float(divergence))
        self.curl.append(float(curl))

    def as_array(self) -> np.ndarray:
        return np.column_stack([self.t, self.energy, self.divergence, self.curl])


def select_dt(
    cfl: float,
    sgrid: SbpGrid,
    velocity: VelocityField,
    epsilon: float,
    diffusion_safety: float = 0.9,
    t: float = 0.0,
) -> float:
    """``cfl * min(h / max|u|, safety * h^2 / (4 eps))``; the second term is
    dropped for ``eps == 0``."""
    if not 0 < cfl <= 1:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    h = sgrid.grid.h_min
    if not h > 0:
        raise ValueError("degenerate grid")
    u = velocity.value(sgrid.grid.coords(), t)
    umax = max(float(np.max(np.sqrt(np.sum(u * u, axis=0)))), 1e-12)
    dt = h / umax
    if epsilon > 0:
        dt = min(dt, diffusion_safety * h * h / (4.0 * epsilon))
    return cfl * dt


def rk2_step(V: np.ndarray, t: float, dt: float, rhs: Rhs) -> np.ndarray:
    if not dt > 0:
        raise ValueError("dt must be positive")
    k1 = rhs(V, t)
    k2 = rhs(V + dt * k1, t + dt)
    return V + (0.5 * dt) * (k1 + k2)


def _check_finite(V, t, limit=1e12):
    peak = np.max(np.abs(V))
    if not np.isfinite(peak) or peak > limit:
        bad = np.unravel_index(np.argmax(~np.isfinite(V) | (np.abs(V) > limit)), V.shape)
        raise InstabilityError(t, tuple(int(i) for i in bad), float(V[bad]))


def integrate(
    V0: VectorField,
    rhs: Rhs,
    sgrid: SbpGrid,
    control: StepControl,
    dt: float,
    monitor_every: int = 10,
    monitors: Optional[RunMonitors] = None,
) -> tuple[VectorField, RunMonitors, int]:
    """Advance ``V0`` from 0 to ``control.t_final`` with step ``dt``.

    The last step is shortened to land on ``t_final``.  Returns the final
    field, the monitors (energy, divergence norm and curl norm sampled every
    ``monitor_every`` steps plus first and last) and the number of steps.
    """
    if monitors is None:
        monitors = RunMonitors()
    V = np.array(V0, dtype=float, copy=True)
    t_final = control.t_final
    n_steps = 0 if t_final == 0 else max(1, math.ceil(t_final / dt - 1e-12))

    def sample(V, t):
        curl = sgrid.norm(sgrid.curl_2d(V)) if sgrid.dim == 2 else sgrid.norm(sgrid.curl_3d(V))
        monitors.record(t, sgrid.inner(V, V), divergence_norm(sgrid, V), curl)

    sample(V, 0.0)
    t = 0.0
    for k in range(n_steps):
        step = dt if k < n_steps - 1 else t_final - t
        V = rk2_step(V, t, step, rhs)
        # accumulate so that t matches the previous stage time exactly
        t = t + step
        _check_finite(V, t)
        if (k + 1) % monitor_every == 0 and k < n_steps - 1:
            sample(V, t)
    if n_steps:
        sample(V, t)
    log.debug("integrated %d steps to t=%g", n_steps, t)
    return V, monitors, n_steps


def divergence_norm(sgrid: SbpGrid, V: VectorField) -> float:
    """Discrete l2 norm of ``div_P V`` with weight ``prod(h)`` per node."""
    d = sgrid.div(V)
    return float(np.sqrt(np.prod(sgrid.grid.spacings) * np.sum(d * d)))
