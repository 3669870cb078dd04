"""SAT penalty terms and the semi-discrete right-hand side.

The Dirichlet scheme is

    V_t + u^1 o d_x V + u^2 o d_y V - C V + eps curl^2(V) = B (V - g) + F,

where ``B`` penalizes face values with strength ``sigma / (h p)``.  The mixed
scheme keeps only the advective part of ``B`` and adds a penalty on the
boundary curl,

    eps * ( (U - D)(I (x) P_y^-1)(curl V - h) ; -(R - L)(P_x^-1 (x) I)(curl V - h) ).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grid import BoundaryFace, SbpGrid, VectorField
from .model import (
    BCKind,
    ModelConfig,
    coupling_matrix,
    exact_jet,
    forcing_printed,
    residual_from_jet,
)


class SchemeKind(enum.Enum):
    DIRICHLET_RESISTIVE = "dirichlet"
    MIXED_RESISTIVE = "mixed"

    @classmethod
    def from_bc(cls, bc: BCKind) -> "SchemeKind":
        return cls.DIRICHLET_RESISTIVE if bc is BCKind.DIRICHLET else cls.MIXED_RESISTIVE


class ForcingSource(enum.Enum):
    NONE = "none"
    PRINTED = "printed"
    ORACLE = "oracle"


@dataclass
class PenaltyConfig:
    """Per-face penalty strengths.

    ``sigma_adv[face]`` holds node-wise values on the face (shape of the face
    slice); ``sigma_res[face]`` is a scalar multiplied by ``epsilon``.
    """

    sigma_adv: dict[BoundaryFace, np.ndarray]
    sigma_res: dict[BoundaryFace, float]
    epsilon: float
    p_corner: tuple[float, ...]
    spacings: tuple[float, ...]

    def total(self, face: BoundaryFace) -> np.ndarray:
        return self.sigma_adv[face] + self.epsilon * self.sigma_res[face]


def build_penalties(
    model: ModelConfig, sgrid: SbpGrid, kind: SchemeKind, t: float = 0.0
) -> PenaltyConfig:
    """Penalties at the stability bounds, taken with equality.

    Advective part: ``-u_n^+ / 2`` on low faces and ``u_n^- / 2`` on high faces,
    with ``u_n`` the velocity component along the face normal axis.  Resistive
    part: ``-1 / (2 p h)`` per face for the Dirichlet scheme, zero for mixed.
    """
    if kind is SchemeKind.MIXED_RESISTIVE and model.epsilon <= 0:
        raise ValueError("mixed scheme needs epsilon > 0")
    grid = sgrid.grid
    u = model.velocity.value(grid.coords(), t)
    sig_adv, sig_res = {}, {}
    for face in BoundaryFace.for_dim(grid.dim):
        un = u[face.axis][face.index(grid.dim)]
        if face.is_high:
            sig_adv[face] = 0.5 * np.minimum(un, 0.0)
        else:
            sig_adv[face] = -0.5 * np.maximum(un, 0.0)
        if kind is SchemeKind.DIRICHLET_RESISTIVE:
            op = sgrid.ops[face.axis]
            sig_res[face] = -1.0 / (2.0 * op.p_corner * op.h)
        else:
            sig_res[face] = 0.0
    return PenaltyConfig(
        sig_adv,
        sig_res,
        float(model.epsilon),
        tuple(op.p_corner for op in sgrid.ops),
        grid.spacings,
    )


def sat_dirichlet(V: VectorField, g: VectorField, pen: PenaltyConfig, sgrid: SbpGrid) -> VectorField:
    sgrid._check_vector(V)
    sgrid._check_vector(g)
    out = np.zeros_like(V)
    _add_dirichlet(out, V - g, pen, sgrid)
    return out


def _add_dirichlet(out, diff, pen, sgrid):
    dim = sgrid.dim
    for face in BoundaryFace.for_dim(dim):
        idx = (slice(None),) + face.index(dim)
        out[idx] += sgrid.boundary_inverse_weight(face) * pen.total(face) * diff[idx]


def _add_curl_penalty(out, curl_diff, sgrid, epsilon):
    # component 1 on the y-faces, component 2 on the x-faces, signed by the
    # outward normal
    for face, comp, sign in (
        (BoundaryFace.YHigh, 0, 1.0),
        (BoundaryFace.YLow, 0, -1.0),
        (BoundaryFace.XHigh, 1, -1.0),
        (BoundaryFace.XLow, 1, 1.0),
    ):
        idx = face.index(2)
        out[(comp,) + idx] += sign * epsilon * sgrid.boundary_inverse_weight(face) * curl_diff[idx]


def sat_mixed(
    V: VectorField,
    g: VectorField,
    h: np.ndarray,
    pen: PenaltyConfig,
    sgrid: SbpGrid,
    epsilon: float,
    curl: Optional[np.ndarray] = None,
) -> VectorField:
    if not epsilon > 0:
        raise ValueError("mixed SAT needs epsilon > 0")
    if sgrid.dim != 2:
        raise ValueError("mixed SAT is defined in 2D")
    sgrid._check_vector(V)
    sgrid._check_vector(g)
    sgrid._check_scalar(h)
    if any(pen.sigma_res[f] != 0.0 for f in pen.sigma_res):
        raise ValueError("mixed scheme uses the advective penalties only")
    if curl is None:
        curl = sgrid.curl_2d(V)
    out = np.zeros_like(V)
    _add_dirichlet(out, V - g, pen, sgrid)
    _add_curl_penalty(out, curl - h, sgrid, epsilon)
    return out


@dataclass
class InductionScheme:
    """Semi-discrete SBP-SAT operator ``V -> dV/dt``.

    Boundary data come from ``model.exact`` when present and are zero
    otherwise.  Velocity values, the coupling matrix and the penalties are
    cached for autonomous velocity fields.
    """

    model: ModelConfig
    sgrid: SbpGrid
    kind: SchemeKind
    forcing: ForcingSource = ForcingSource.NONE
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.model.dim != self.sgrid.dim:
            raise ValueError("model and grid dimensions differ")
        if self.kind is SchemeKind.MIXED_RESISTIVE and self.sgrid.dim != 2:
            raise ValueError("the mixed scheme is only available in 2D")
        if self.forcing is not ForcingSource.NONE:
            if self.sgrid.dim != 2:
                raise ValueError("manufactured forcing is 2D only")
            if self.forcing is ForcingSource.ORACLE and self.model.exact is None:
                raise ValueError("oracle forcing needs an exact solution")
        self.coords = self.sgrid.grid.coords()

    # time-dependent coefficient data

    def _coefficients(self, t):
        key = t if self.model.velocity.time_dependent else None
        hit = self._cache.get("coef")
        if hit is not None and hit[0] == key:
            return hit[1]
        vel = self.model.velocity
        u = vel.value(self.coords, t)
        C = coupling_matrix(vel.jacobian(self.coords, t))
        pen = build_penalties(self.model, self.sgrid, self.kind, t)
        couplings = [(i, j, C[i, j]) for i in range(C.shape[0]) for j in range(C.shape[1]) if np.any(C[i, j])]
        # face penalty strength already divided by the boundary norm weight
        scales = {
            f: self.sgrid.boundary_inverse_weight(f) * pen.total(f)
            for f in BoundaryFace.for_dim(self.sgrid.dim)
        }
        coef = (u, C, couplings, pen, scales)
        self._cache["coef"] = (key, coef)
        return coef

    def _time_data(self, t):
        """``(g, h, F)`` at time ``t``, evaluating the exact solution once."""
        hit = self._cache.get("tdata")
        if hit is not None and hit[0] == t:
            return hit[1]
        sg = self.sgrid
        exact = self.model.exact
        mixed = self.kind is SchemeKind.MIXED_RESISTIVE
        F = jet = None
        if self.forcing is ForcingSource.ORACLE or (mixed and exact is not None):
            jet = exact_jet(exact, self.coords, t)
        if self.forcing is ForcingSource.ORACLE:
            u, C = self._coefficients(t)[:2]
            F = residual_from_jet(jet, u, C, self.model.epsilon)
        if jet is not None:
            g = jet.B
        elif exact is not None:
            g = exact.value(self.coords, t)
        else:
            g = np.zeros((sg.dim, *sg.shape))
        if self.forcing is ForcingSource.PRINTED:
            F = forcing_printed(t, sg.grid, self.model.epsilon)
        h = None
        if mixed:
            # the analytic curl; a discrete curl of g would carry the
            # closure error into a penalty that scales like 1/h
            h = jet.grad[1, 0] - jet.grad[0, 1] if jet is not None else np.zeros(sg.shape)
        data = (g, h, F)
        self._cache["tdata"] = (t, data)
        return data

    def boundary_data(self, t: float):
        """``(g, h)`` at time ``t``; ``h`` is None for the Dirichlet scheme."""
        g, h, _ = self._time_data(t)
        return g, h

    def forcing_field(self, t: float) -> Optional[VectorField]:
        return self._time_data(t)[2]

    # right-hand side

    def __call__(self, V: VectorField, t: float) -> VectorField:
        return self.rhs(V, t)

    def rhs(self, V: VectorField, t: float, g=None, h=None, forcing=True) -> VectorField:
        sg = self.sgrid
        dim = sg.dim
        eps = self.model.epsilon
        u, _, couplings, _, scales = self._coefficients(t)
        F = None
        if g is None:
            g, h_t, F = self._time_data(t)
            h = h_t if h is None else h
        elif h is None and self.kind is SchemeKind.MIXED_RESISTIVE:
            h = np.zeros(sg.shape)

        out = np.empty_like(V)
        # dV[i][a] = d_a V^i
        dV = [[sg.d(a, V[i]) for a in range(dim)] for i in range(dim)]
        for i in range(dim):
            o = out[i]
            np.multiply(u[0], dV[i][0], out=o)
            for a in range(1, dim):
                o += u[a] * dV[i][a]
            np.negative(o, out=o)
        for i, j, cij in couplings:
            out[i] += cij * V[j]

        curl = None
        if dim == 2:
            curl = dV[1][0] - dV[0][1]
            if eps != 0.0:
                out[0] -= eps * sg.dy(curl)
                out[1] += eps * sg.dx(curl)
        elif eps != 0.0:
            w = [dV[2][1] - dV[1][2], dV[0][2] - dV[2][0], dV[1][0] - dV[0][1]]
            out[0] -= eps * (sg.dy(w[2]) - sg.dz(w[1]))
            out[1] -= eps * (sg.dz(w[0]) - sg.dx(w[2]))
            out[2] -= eps * (sg.dx(w[1]) - sg.dy(w[0]))

        for face, scale in scales.items():
            idx = (slice(None),) + face.index(dim)
            out[idx] += scale * (V[idx] - g[idx])
        if self.kind is SchemeKind.MIXED_RESISTIVE:
            _add_curl_penalty(out, curl - h, sg, eps)

        if forcing and F is not None:
            out += F
        return out

    def homogeneous_rhs(self, V: VectorField, t: float = 0.0) -> VectorField:
        """Right-hand side with zero boundary data and no forcing."""
        zg = np.zeros_like(V)
        zh = np.zeros(self.sgrid.shape) if self.kind is SchemeKind.MIXED_RESISTIVE else None
        return self.rhs(V, t, g=zg, h=zh, forcing=False)


def semidiscrete_rhs(
    V: VectorField,
    t: float,
    model: ModelConfig,
    sgrid: SbpGrid,
    kind: SchemeKind,
    forcing_source: ForcingSource = ForcingSource.NONE,
) -> VectorField:
    return InductionScheme(model, sgrid, kind, forcing_source)(V, t)
