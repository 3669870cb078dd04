"""One-dimensional summation-by-parts first-derivative operators.

An operator is the pair ``(P, D)`` with ``P = h * diag(p_weights)`` and
``D = P^{-1} Q`` where ``Q + Q^T = diag(-1, 0, ..., 0, 1)``.  Only the closure
rows at the ends are stored densely; interior rows are a centered stencil.

Two operators are provided: SBP2 (second order interior, first order at the
boundary) and SBP4 (fourth order interior, second order at the boundary).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np


class SbpConstructionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SbpOperator1D:
    """Diagonal-norm SBP first-derivative operator on ``n`` uniform nodes.

    ``d_boundary_top`` has shape ``(boundary_width, closure_cols)`` and holds
    the first rows of ``h * D``; ``d_boundary_bottom`` holds the last rows,
    acting on the last ``closure_cols`` entries.  ``d_interior_stencil`` is
    the centered stencil of ``h * D``.
    """

    n: int
    h: float
    p_weights: np.ndarray
    d_boundary_top: np.ndarray
    d_interior_stencil: np.ndarray
    d_boundary_bottom: np.ndarray
    boundary_width: int
    p_corner: float
    interior_order: int
    boundary_order: int

    @property
    def half_width(self) -> int:
        return len(self.d_interior_stencil) // 2

    # dense forms, used for checks and small oracles

    def matrix_D(self) -> np.ndarray:
        n, bw = self.n, self.boundary_width
        D = np.zeros((n, n))
        s = self.half_width
        for i in range(bw, n - bw):
            D[i, i - s : i + s + 1] = self.d_interior_stencil
        cols = self.d_boundary_top.shape[1]
        D[:bw, :cols] = self.d_boundary_top
        D[n - bw :, n - cols :] = self.d_boundary_bottom
        return D / self.h

    def matrix_P(self) -> np.ndarray:
        return np.diag(self.h * self.p_weights)

    def matrix_Q(self) -> np.ndarray:
        return self.matrix_P() @ self.matrix_D()

    def apply(self, w: np.ndarray, axis: int = 0) -> np.ndarray:
        return apply_derivative(self, w, axis=axis)


def _closure_bottom(top: np.ndarray) -> np.ndarray:
    # central symmetry of D: D[n-1-i, n-1-j] = -D[i, j]
    return -top[::-1, ::-1]


def _as_float(rows) -> np.ndarray:
    return np.array([[float(F(c)) for c in row] for row in rows], dtype=float)


def build_sbp2(n: int, h: float) -> SbpOperator1D:
    """SBP operator, second order interior and first order at the ends."""
    if n < 3:
        raise SbpConstructionError(f"SBP2 needs n >= 3, got {n}")
    if not h > 0:
        raise SbpConstructionError(f"grid spacing must be positive, got {h}")
    p = np.ones(n)
    p[0] = p[-1] = 0.5
    top = _as_float([[-1, 1]])
    return SbpOperator1D(
        n=n,
        h=float(h),
        p_weights=p,
        d_boundary_top=top,
        d_interior_stencil=np.array([-0.5, 0.0, 0.5]),
        d_boundary_bottom=_closure_bottom(top),
        boundary_width=1,
        p_corner=0.5,
        interior_order=2,
        boundary_order=1,
    )


_SBP4_NORM = [F(17, 48), F(59, 48), F(43, 48), F(49, 48)]
_SBP4_TOP = [
    [F(-24, 17), F(59, 34), F(-4, 17), F(-3, 34), 0, 0],
    [F(-1, 2), 0, F(1, 2), 0, 0, 0],
    [F(4, 43), F(-59, 86), 0, F(59, 86), F(-4, 43), 0],
    [F(3, 98), 0, F(-59, 98), 0, F(32, 49), F(-4, 49)],
]
_SBP4_STENCIL = [F(1, 12), F(-2, 3), 0, F(2, 3), F(-1, 12)]


def build_sbp4(n: int, h: float) -> SbpOperator1D:
    """SBP operator, fourth order interior and second order at the ends."""
    if n < 9:
        raise SbpConstructionError(f"SBP4 needs n >= 9, got {n}")
    if not h > 0:
        raise SbpConstructionError(f"grid spacing must be positive, got {h}")
    p = np.ones(n)
    norm = np.array([float(c) for c in _SBP4_NORM])
    p[:4] = norm
    p[-4:] = norm[::-1]
    top = _as_float(_SBP4_TOP)
    return SbpOperator1D(
        n=n,
        h=float(h),
        p_weights=p,
        d_boundary_top=top,
        d_interior_stencil=np.array([float(c) for c in _SBP4_STENCIL]),
        d_boundary_bottom=_closure_bottom(top),
        boundary_width=4,
        p_corner=float(_SBP4_NORM[0]),
        interior_order=4,
        boundary_order=2,
    )


BUILDERS = {2: build_sbp2, 4: build_sbp4}
MIN_NODES = {2: 3, 4: 9}


def build_sbp(order: int, n: int, h: float) -> SbpOperator1D:
    try:
        builder = BUILDERS[order]
    except KeyError:
        raise SbpConstructionError(f"unsupported interior order {order}") from None
    return builder(n, h)


def apply_derivative(op: SbpOperator1D, w: np.ndarray, axis: int = 0) -> np.ndarray:
    """Return ``D w`` along ``axis`` without forming ``D``.

    Interior rows are evaluated as shifts of the flattened array: with
    ``stride`` the element stride of ``axis``, a shift by ``k * stride`` moves
    ``k`` nodes along every line at once.  Entries inside the closure zones
    pick up values from neighbouring lines and are overwritten afterwards.
    """
    w = np.ascontiguousarray(w, dtype=float)
    axis = axis % w.ndim
    if w.shape[axis] != op.n:
        raise ValueError(
            f"length {w.shape[axis]} along axis {axis} does not match operator size {op.n}"
        )
    n, bw, s = op.n, op.boundary_width, op.half_width
    stride = int(np.prod(w.shape[axis + 1 :], dtype=int))
    inv_h = 1.0 / op.h

    out = np.empty_like(w)
    src = w.reshape(-1)
    dst = out.reshape(-1)
    lo, hi = bw * stride, src.size - bw * stride
    inner = dst[lo:hi]
    tmp = np.empty_like(inner)
    first = True
    for k, c in enumerate(op.d_interior_stencil):
        if c == 0.0:
            continue
        shift = (k - s) * stride
        seg = src[lo + shift : hi + shift]
        if first:
            np.multiply(seg, c * inv_h, out=inner)
            first = False
        else:
            np.multiply(seg, c * inv_h, out=tmp)
            inner += tmp

    cols = op.d_boundary_top.shape[1]
    src_a = np.moveaxis(w, axis, -1)
    dst_a = np.moveaxis(out, axis, -1)
    dst_a[..., :bw] = src_a[..., :cols] @ (inv_h * op.d_boundary_top.T)
    dst_a[..., n - bw :] = src_a[..., n - cols :] @ (inv_h * op.d_boundary_bottom.T)
    return out


def inner_product_1d(op: SbpOperator1D, v: np.ndarray, w: np.ndarray) -> float:
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != (op.n,) or w.shape != (op.n,):
        raise ValueError(f"vectors must have length {op.n}")
    return float(op.h * np.sum(op.p_weights * v * w))
