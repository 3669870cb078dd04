"""Tensor-product grids and the discrete operators built on them.

Grid functions are plain numpy arrays: a scalar field has shape
``grid.shape`` and a vector field has shape ``(dim, *grid.shape)``.  With C
ordering the flattened scalar field is lexicographic with the last axis
fastest, i.e. ``(w00, w01, ..., w0(M-1), w10, ...)``.

One-dimensional operators act along their own axis by line sweeps, so the
Kronecker matrices ``D_x (x) I`` etc. are never formed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .sbp import MIN_NODES, SbpOperator1D, apply_derivative, build_sbp

ScalarField = np.ndarray
VectorField = np.ndarray


@dataclass(frozen=True)
class Axis:
    n: int
    h: float
    origin: float = 0.0

    @property
    def extent(self) -> float:
        return (self.n - 1) * self.h

    @property
    def coords(self) -> np.ndarray:
        return self.origin + self.h * np.arange(self.n)


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[Axis, ...]

    def __post_init__(self):
        if len(self.axes) not in (2, 3):
            raise ValueError("grids must be two- or three-dimensional")
        for a in self.axes:
            if a.n < 2 or not a.h > 0:
                raise ValueError(f"degenerate axis {a}")

    @classmethod
    def box(cls, bounds: Sequence[tuple[float, float]], nodes: Sequence[int]) -> "GridSpec":
        """Uniform grid with ``nodes[a]`` points spanning ``bounds[a]`` inclusive."""
        if len(bounds) != len(nodes):
            raise ValueError("bounds and nodes differ in length")
        axes = []
        for (lo, hi), n in zip(bounds, nodes):
            if n < 2 or not hi > lo:
                raise ValueError(f"bad axis: [{lo}, {hi}] with {n} nodes")
            axes.append(Axis(int(n), (hi - lo) / (n - 1), float(lo)))
        return cls(tuple(axes))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.n for a in self.axes)

    @property
    def spacings(self) -> tuple[float, ...]:
        return tuple(a.h for a in self.axes)

    @property
    def h_min(self) -> float:
        return min(self.spacings)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def coords(self) -> tuple[np.ndarray, ...]:
        """Node coordinates, one array of shape ``self.shape`` per axis."""
        return tuple(np.meshgrid(*(a.coords for a in self.axes), indexing="ij"))


class BoundaryFace(enum.Enum):
    XLow = (0, 0)
    XHigh = (0, 1)
    YLow = (1, 0)
    YHigh = (1, 1)
    ZLow = (2, 0)
    ZHigh = (2, 1)

    @property
    def axis(self) -> int:
        return self.value[0]

    @property
    def is_high(self) -> bool:
        return self.value[1] == 1

    @property
    def sign(self) -> int:
        """Outward normal component along :attr:`axis`."""
        return 1 if self.is_high else -1

    def index(self, dim: int) -> tuple:
        """Index expression selecting the face nodes of a scalar field."""
        idx = [slice(None)] * dim
        idx[self.axis] = -1 if self.is_high else 0
        return tuple(idx)

    @classmethod
    def for_dim(cls, dim: int) -> list["BoundaryFace"]:
        return [f for f in cls if f.axis < dim]


class SbpGrid:
    """A grid together with one SBP operator per axis.

    Provides the axis derivatives, the norm ``P = P_x (x) P_y [(x) P_z]`` and
    its face restrictions, and the discrete curl, curl-curl and divergence.
    """

    def __init__(self, grid: GridSpec, ops: Sequence[SbpOperator1D]):
        if len(ops) != grid.dim:
            raise ValueError("need one operator per axis")
        for a, op in zip(grid.axes, ops):
            if op.n != a.n or not np.isclose(op.h, a.h, rtol=1e-14, atol=0):
                raise ValueError(f"operator (n={op.n}, h={op.h}) does not match axis {a}")
        self.grid = grid
        self.ops = tuple(ops)

    @classmethod
    def build(cls, grid: GridSpec, order: int) -> "SbpGrid":
        for a in grid.axes:
            if a.n < MIN_NODES.get(order, 0):
                raise ValueError(f"SBP{order} needs at least {MIN_NODES[order]} nodes per axis")
        return cls(grid, [build_sbp(order, a.n, a.h) for a in grid.axes])

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.grid.shape

    @property
    def p_corner(self) -> float:
        return self.ops[0].p_corner

    # weights

    def _axis_weights(self, axis: int) -> np.ndarray:
        op = self.ops[axis]
        return op.h * op.p_weights

    @cached_property
    def norm_weights(self) -> np.ndarray:
        """Diagonal of ``P`` arranged on the grid."""
        w = np.ones(())
        for a in range(self.dim):
            w = np.multiply.outer(w, self._axis_weights(a))
        return w

    def face_weights(self, face: BoundaryFace) -> np.ndarray:
        """Tangential norm weights on ``face``; shape of the face slice."""
        self._check_face(face)
        w = np.ones(())
        for a in range(self.dim):
            if a != face.axis:
                w = np.multiply.outer(w, self._axis_weights(a))
        return w

    def boundary_inverse_weight(self, face: BoundaryFace) -> float:
        """``1 / (h * p)`` of the face-normal norm entry at ``face``."""
        op = self.ops[face.axis]
        p = op.p_weights[-1] if face.is_high else op.p_weights[0]
        return 1.0 / (op.h * p)

    def _check_face(self, face: BoundaryFace):
        if face.axis >= self.dim:
            raise ValueError(f"{face.name} is not a face of a {self.dim}D grid")

    def _check_scalar(self, w):
        if np.shape(w) != self.shape:
            raise ValueError(f"field of shape {np.shape(w)} does not match grid {self.shape}")

    def _check_vector(self, V):
        if np.shape(V) != (self.dim, *self.shape):
            raise ValueError(
                f"vector field of shape {np.shape(V)} does not match ({self.dim}, *{self.shape})"
            )

    # derivatives

    def d(self, axis: int, w: ScalarField) -> ScalarField:
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for {self.dim}D grid")
        self._check_scalar(w)
        return apply_derivative(self.ops[axis], w, axis=axis)

    def dx(self, w):
        return self.d(0, w)

    def dy(self, w):
        return self.d(1, w)

    def dz(self, w):
        return self.d(2, w)

    # inner products

    def inner(self, v: np.ndarray, w: np.ndarray) -> float:
        """``(v, w)_P`` for scalar or vector fields (vectors sum components)."""
        v = np.asarray(v)
        w = np.asarray(w)
        if v.shape != w.shape:
            raise ValueError(f"shape mismatch {v.shape} vs {w.shape}")
        if v.shape == self.shape:
            return float(np.sum(self.norm_weights * v * w))
        self._check_vector(v)
        return float(np.sum(self.norm_weights * np.sum(v * w, axis=0)))

    def norm(self, v: np.ndarray) -> float:
        return float(np.sqrt(self.inner(v, v)))

    def face_inner(self, face: BoundaryFace, v: ScalarField, w: ScalarField) -> float:
        """``<v, w>`` on one face, weighted by the tangential norm only."""
        self._check_face(face)
        self._check_scalar(v)
        self._check_scalar(w)
        idx = face.index(self.dim)
        return float(np.sum(self.face_weights(face) * v[idx] * w[idx]))

    # vector calculus

    def curl_2d(self, V: VectorField) -> ScalarField:
        if self.dim != 2:
            raise ValueError("curl_2d needs a 2D grid")
        self._check_vector(V)
        return self.dx(V[1]) - self.dy(V[0])

    def curl_3d(self, V: VectorField) -> VectorField:
        if self.dim != 3:
            raise ValueError("curl_3d needs a 3D grid")
        self._check_vector(V)
        return np.stack(
            [
                self.dy(V[2]) - self.dz(V[1]),
                self.dz(V[0]) - self.dx(V[2]),
                self.dx(V[1]) - self.dy(V[0]),
            ]
        )

    def curlcurl_2d(self, V: VectorField) -> VectorField:
        # (-d_yy V1 + d_xy V2, d_xy V1 - d_xx V2); d_x and d_y act on
        # different indices and commute, so this is (d_y c, -d_x c), c = curl V
        return self.curlcurl_from_curl_2d(self.curl_2d(V))

    def curlcurl_from_curl_2d(self, c: ScalarField) -> VectorField:
        return np.stack([self.dy(c), -self.dx(c)])

    def curlcurl_3d(self, V: VectorField) -> VectorField:
        w = self.curl_3d(V)
        return np.stack(
            [
                self.dy(w[2]) - self.dz(w[1]),
                self.dz(w[0]) - self.dx(w[2]),
                self.dx(w[1]) - self.dy(w[0]),
            ]
        )

    def curlcurl(self, V: VectorField) -> VectorField:
        return self.curlcurl_2d(V) if self.dim == 2 else self.curlcurl_3d(V)

    def div(self, V: VectorField) -> ScalarField:
        self._check_vector(V)
        out = self.d(0, V[0])
        for a in range(1, self.dim):
            out = out + self.d(a, V[a])
        return out
