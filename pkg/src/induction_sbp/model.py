"""Continuous problem data for the resistive induction equation.

The equation is written in the symmetric form

    B_t + u^1 B_x + u^2 B_y (+ u^3 B_z) - C B = -eps curl(curl B) + F,

with ``C_ij = d_j u^i - delta_ij div(u)``.  This module supplies velocity
fields with their Jacobians, exact solutions, manufactured forcing and the
boundary data consumed by the SAT terms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import GridSpec, SbpGrid, VectorField

Coords = tuple  # tuple of coordinate arrays, one per axis


class BCKind(enum.Enum):
    DIRICHLET = "dirichlet"
    MIXED = "mixed"


@dataclass(frozen=True)
class VelocityField:
    """Analytic velocity ``u(x, t)``.

    ``value(coords, t)`` returns shape ``(dim, *s)``; ``jacobian(coords, t)``
    returns ``J[i, a] = d u^i / d x_a`` with shape ``(dim, dim, *s)``.
    """

    dim: int
    value: Callable[[Coords, float], np.ndarray]
    jacobian: Callable[[Coords, float], np.ndarray]
    time_dependent: bool = False
    name: str = "custom"


def _zeros_like_coords(coords, lead=()):
    return np.zeros(lead + np.shape(coords[0]))


def linear_velocity(A, name: str = "linear") -> VelocityField:
    """``u(x) = A x`` with a constant matrix ``A`` (its own Jacobian)."""
    A = np.array(A, dtype=float)
    dim = A.shape[0]
    if A.shape != (dim, dim) or dim not in (2, 3):
        raise ValueError(f"need a square 2x2 or 3x3 matrix, got shape {A.shape}")

    def value(coords, t):
        out = np.zeros((dim,) + np.shape(coords[0]))
        for i in range(dim):
            for j in range(dim):
                if A[i, j] != 0.0:
                    out[i] += A[i, j] * coords[j]
        return out

    def jacobian(coords, t):
        J = _zeros_like_coords(coords, (dim, dim))
        J[...] = A.reshape(A.shape + (1,) * (J.ndim - 2))
        return J

    return VelocityField(dim, value, jacobian, name=name)


def rotation_velocity(dim: int = 2) -> VelocityField:
    """Solid-body rotation ``u = (-y, x[, 0])`` about the origin."""
    A = np.zeros((dim, dim))
    A[0, 1], A[1, 0] = -1.0, 1.0
    return linear_velocity(A, name="rotation")


def constant_velocity(u: tuple[float, ...]) -> VelocityField:
    u = tuple(float(c) for c in u)
    dim = len(u)

    def value(coords, t):
        return np.stack([np.full(np.shape(coords[0]), c) for c in u])

    def jacobian(coords, t):
        return _zeros_like_coords(coords, (dim, dim))

    return VelocityField(dim, value, jacobian, name="constant")


def zero_velocity(dim: int = 2) -> VelocityField:
    v = constant_velocity((0.0,) * dim)
    return VelocityField(dim, v.value, v.jacobian, name="zero")


def coupling_matrix(J: np.ndarray) -> np.ndarray:
    """``C = J - div(u) I`` from the velocity Jacobian (node-wise)."""
    dim = J.shape[0]
    div = sum(J[a, a] for a in range(dim))
    C = J.copy()
    for a in range(dim):
        C[a, a] = C[a, a] - div
    return C


def apply_C(velocity: VelocityField, t: float, grid: GridSpec, V: VectorField) -> VectorField:
    if V.shape[0] != velocity.dim or velocity.dim != grid.dim:
        raise ValueError("dimension mismatch between velocity, grid and field")
    C = coupling_matrix(velocity.jacobian(grid.coords(), t))
    return np.einsum("ij...,j...->i...", C, V)


# exact solution: a Gaussian hump rotating about the origin

HUMP_CENTER = 0.5
HUMP_WIDTH = 20.0
HUMP_AMPLITUDE = 4.0


def _hump(x, y, t):
    cx = HUMP_CENTER * np.cos(t)
    cy = HUMP_CENTER * np.sin(t)
    X = x - cx
    Y = y - cy
    g = np.exp(-HUMP_WIDTH * (X * X + Y * Y))
    return X, Y, g


def hump_value(coords, t: float) -> np.ndarray:
    """``R(t) B0(R(-t) x)`` with ``B0 = 4 (-y, x - 1/2) exp(-20 ((x - 1/2)^2 + y^2))``."""
    X, Y, g = _hump(coords[0], coords[1], t)
    a = HUMP_AMPLITUDE
    return np.stack([-a * Y * g, a * X * g])


@dataclass(frozen=True)
class Jet:
    """Value and derivatives of a 2D vector field at a set of points."""

    B: np.ndarray  # (2, *s)
    B_t: np.ndarray  # (2, *s)
    grad: np.ndarray  # (2, 2, *s), grad[i, a] = d B^i / d x_a
    curlcurl: np.ndarray  # (2, *s)


def hump_jet(coords, t: float) -> Jet:
    X, Y, g = _hump(coords[0], coords[1], t)
    a, k = HUMP_AMPLITUDE, HUMP_WIDTH
    shape = np.shape(X)
    # time derivatives of (X, Y) for the moving center
    Xt = HUMP_CENTER * np.sin(t)
    Yt = -HUMP_CENTER * np.cos(t)
    ag = a * g
    aXg = X * ag
    aYg = Y * ag
    B = np.empty((2,) + shape)
    np.negative(aYg, out=B[0])
    B[1] = aXg
    # g_t / g, g_x / g, g_y / g
    lt = -2.0 * k * (X * Xt + Y * Yt)
    lx = -2.0 * k * X
    ly = -2.0 * k * Y
    B_t = np.empty((2,) + shape)
    B_t[0] = -(Yt * ag + aYg * lt)
    B_t[1] = Xt * ag + aXg * lt
    grad = np.empty((2, 2) + shape)
    grad[0, 0] = -aYg * lx
    grad[0, 1] = -(ag + aYg * ly)
    grad[1, 0] = ag + aXg * lx
    grad[1, 1] = aXg * ly
    # divergence free, so curl curl B = -lap B; lap(Y g) = Y lap g + 2 g_y
    lap_over_g = 4.0 * k * k * (X * X + Y * Y) - 4.0 * k
    cc = np.empty((2,) + shape)
    cc[0] = aYg * lap_over_g + 2.0 * ag * ly
    cc[1] = -(aXg * lap_over_g + 2.0 * ag * lx)
    return Jet(B, B_t, grad, cc)


@dataclass(frozen=True)
class ExactSolution:
    """Exact solution ``B(x, t)``; ``jet`` gives analytic derivatives if known."""

    value: Callable[[Coords, float], np.ndarray]
    jet: Optional[Callable[[Coords, float], Jet]] = None
    rotation_based: bool = False
    name: str = "custom"


def rotating_hump_solution() -> ExactSolution:
    return ExactSolution(hump_value, hump_jet, rotation_based=True, name="rotating_hump")


def zero_solution(dim: int = 2) -> ExactSolution:
    def value(coords, t):
        return np.zeros((dim,) + np.shape(coords[0]))

    def jet(coords, t):
        z = value(coords, t)
        return Jet(z, z.copy(), np.zeros((dim, dim) + np.shape(coords[0])), z.copy())

    return ExactSolution(value, jet, name="zero")


def initial_hump(grid: GridSpec) -> VectorField:
    if grid.dim != 2:
        raise ValueError("initial hump is defined in 2D")
    return hump_value(grid.coords(), 0.0)


def exact_rotating_hump(t: float, grid: GridSpec) -> VectorField:
    if grid.dim != 2:
        raise ValueError("rotating hump is defined in 2D")
    return hump_value(grid.coords(), t)


@dataclass
class ModelConfig:
    velocity: VelocityField
    epsilon: float
    bounds: tuple[tuple[float, float], ...]
    bc_kind: BCKind = BCKind.DIRICHLET
    exact: Optional[ExactSolution] = None
    # carried for completeness; the discrete mixed scheme does not use it
    beta: Optional[float] = None
    initial: Optional[Callable[[Coords], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("resistivity must be non-negative")
        if self.bc_kind is BCKind.MIXED and self.epsilon <= 0:
            raise ValueError("mixed boundary conditions need epsilon > 0")

    @property
    def dim(self) -> int:
        return self.velocity.dim

    def initial_data(self, grid: GridSpec) -> VectorField:
        coords = grid.coords()
        if self.initial is not None:
            return np.asarray(self.initial(coords), dtype=float)
        if self.exact is not None:
            return self.exact.value(coords, 0.0)
        raise ValueError("model has neither initial data nor an exact solution")


# forcing

def forcing_printed(t: float, grid: GridSpec, epsilon: float) -> VectorField:
    """Manufactured forcing for the rotating hump, evaluated as printed.

    The second component uses the prefactor ``(y - 0.5 cos t)`` literally.
    """
    x, y = grid.coords()
    c, s = np.cos(t), np.sin(t)
    A = -20.0 * ((x * c + y * s - 0.5) ** 2 + (-x * s + y * c) ** 2)
    bracket = -4.0 + 40.0 * ((x - 0.5 * c) ** 2 + (y - 0.5 * s) ** 2)
    eA = np.exp(A)
    f1 = 160.0 * epsilon * (y - 0.5 * s) * bracket * eA
    f2 = -160.0 * epsilon * (y - 0.5 * c) * bracket * eA
    return np.stack([f1, f2])


def _fd_jet(exact: ExactSolution, coords, t: float, delta: float = 1e-4) -> Jet:
    """Sixth-order centered differences of ``exact.value``."""
    w1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
    w2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0
    offs = np.arange(-3, 4)
    x, y = coords[0], coords[1]

    def f(dx=0.0, dy=0.0, dt=0.0):
        return exact.value((x + dx, y + dy), t + dt)

    B = f()
    B_t = sum(w * f(dt=o * delta) for w, o in zip(w1, offs) if w) / delta
    Bx = sum(w * f(dx=o * delta) for w, o in zip(w1, offs) if w) / delta
    By = sum(w * f(dy=o * delta) for w, o in zip(w1, offs) if w) / delta
    Bxx = sum(w * f(dx=o * delta) for w, o in zip(w2, offs)) / delta**2
    Byy = sum(w * f(dy=o * delta) for w, o in zip(w2, offs)) / delta**2
    # mixed derivative as a centered difference of the x-derivative in y
    Bxy = (
        sum(
            wy * sum(wx * f(dx=ox * delta, dy=oy * delta) for wx, ox in zip(w1, offs) if wx)
            for wy, oy in zip(w1, offs)
            if wy
        )
        / delta**2
    )
    grad = np.stack([np.stack([Bx[i], By[i]]) for i in range(2)])
    cc = np.stack([Bxy[1] - Byy[0], Bxy[0] - Bxx[1]])
    return Jet(B, B_t, grad, cc)


def exact_jet(exact: ExactSolution, coords, t: float) -> Jet:
    if exact.jet is not None:
        return exact.jet(coords, t)
    return _fd_jet(exact, coords, t)


def residual_from_jet(jet: Jet, u: np.ndarray, C: np.ndarray, epsilon: float) -> VectorField:
    """``B_t + u . grad B - C B + eps curl curl B`` from nodal ``u`` and ``C``."""
    dim = u.shape[0]
    out = jet.B_t.copy()
    for i in range(dim):
        for a in range(dim):
            out[i] += u[a] * jet.grad[i, a]
        for j in range(dim):
            out[i] -= C[i, j] * jet.B[j]
    if epsilon != 0.0:
        out += epsilon * jet.curlcurl
    return out


def forcing_residual_oracle(t: float, grid: GridSpec, model: ModelConfig) -> VectorField:
    """Forcing that makes ``model.exact`` an exact solution."""
    if model.exact is None:
        raise ValueError("residual forcing needs an exact solution")
    if grid.dim != 2:
        raise ValueError("residual forcing is implemented in 2D")
    coords = grid.coords()
    jet = exact_jet(model.exact, coords, t)
    u = model.velocity.value(coords, t)
    C = coupling_matrix(model.velocity.jacobian(coords, t))
    return residual_from_jet(jet, u, C, model.epsilon)


# boundary data

def boundary_dirichlet_data(t: float, grid: GridSpec, model: ModelConfig) -> VectorField:
    """Full-grid field holding ``g``; only face values are used by the SAT."""
    if model.exact is None:
        return np.zeros((grid.dim, *grid.shape))
    return model.exact.value(grid.coords(), t)


def boundary_mixed_data(t: float, sgrid: SbpGrid, model: ModelConfig) -> np.ndarray:
    """Desired boundary curl ``h``: the curl of the exact solution."""
    if model.exact is None:
        return np.zeros(sgrid.shape)
    grad = exact_jet(model.exact, sgrid.grid.coords(), t).grad
    return grad[1, 0] - grad[0, 1]
