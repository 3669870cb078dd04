import numpy as np
import pytest
from hypothesis import settings

from induction_sbp.grid import BoundaryFace, GridSpec, SbpGrid

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_grid(nodes, order, bounds=None):
    bounds = bounds or [(0.0, 1.0)] * len(nodes)
    return SbpGrid.build(GridSpec.box(bounds, nodes), order)


# dense Kronecker oracles; C order makes the last axis fastest, so the
# first axis carries the leftmost Kronecker factor


def kron_axis(mats_1d, axis, sizes):
    out = np.ones((1, 1))
    for a, n in enumerate(sizes):
        out = np.kron(out, mats_1d if a == axis else np.eye(n))
    return out


def dense_derivatives(sg):
    return [kron_axis(op.matrix_D(), a, sg.shape) for a, op in enumerate(sg.ops)]


def dense_norm(sg):
    P = np.ones((1, 1))
    for op in sg.ops:
        P = np.kron(P, op.matrix_P())
    return P


def face_selector(sg, face):
    """Diagonal 0/1 matrix picking the nodes of ``face``."""
    mask = np.zeros(sg.shape)
    mask[face.index(sg.dim)] = 1.0
    return np.diag(mask.ravel())


def tangential_norm(sg, face):
    """``I (x) P_y`` style factor: norm matrices on every axis but the normal one."""
    M = np.ones((1, 1))
    for a, op in enumerate(sg.ops):
        M = np.kron(M, np.eye(op.n) if a == face.axis else op.matrix_P())
    return M


def normal_inverse_norm(sg, axis):
    """``P_x^{-1} (x) I`` style factor along ``axis``."""
    return kron_axis(np.linalg.inv(sg.ops[axis].matrix_P()), axis, sg.shape)


FACES_2D = BoundaryFace.for_dim(2)


def dense_penalty(sg, velocity, eps, bc):
    """Diagonal of the boundary operator, one matrix per field component."""
    u = velocity.value(sg.grid.coords(), 0.0)
    S = np.zeros((sg.grid.size, sg.grid.size))
    for face in FACES_2D:
        op = sg.ops[face.axis]
        un = u[face.axis].ravel()
        sig = 0.5 * np.minimum(un, 0) if face.is_high else -0.5 * np.maximum(un, 0)
        if bc == "dirichlet":
            sig = sig - eps / (2 * op.p_corner * op.h)
        S += face_selector(sg, face) @ np.diag(sig) @ normal_inverse_norm(sg, face.axis)
    return S


def dense_curl_penalty(sg, eps):
    Dx, Dy = dense_derivatives(sg)
    U, Dn = face_selector(sg, BoundaryFace.YHigh), face_selector(sg, BoundaryFace.YLow)
    R, L = face_selector(sg, BoundaryFace.XHigh), face_selector(sg, BoundaryFace.XLow)
    top = eps * (U - Dn) @ normal_inverse_norm(sg, 1)
    bottom = -eps * (R - L) @ normal_inverse_norm(sg, 0)
    return top, bottom


def dense_rhs_matrix(sg, velocity, eps, bc):
    """Homogeneous right-hand side as a dense matrix on the stacked field."""
    n = sg.grid.size
    Dx, Dy = dense_derivatives(sg)
    u = velocity.value(sg.grid.coords(), 0.0)
    J = velocity.jacobian(sg.grid.coords(), 0.0)
    div = J[0, 0] + J[1, 1]
    adv = np.diag(u[0].ravel()) @ Dx + np.diag(u[1].ravel()) @ Dy
    A = np.zeros((2 * n, 2 * n))
    blocks = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            c = J[i, j] - (div if i == j else 0)
            blocks[i][j] = np.diag(np.broadcast_to(c, sg.shape).ravel())
    A[:n, :n] -= adv
    A[n:, n:] -= adv
    for i in range(2):
        for j in range(2):
            A[i * n : (i + 1) * n, j * n : (j + 1) * n] += blocks[i][j]
    curl = np.hstack([-Dy, Dx])
    cc = np.vstack([Dy @ curl, -Dx @ curl])
    A -= eps * cc
    S = dense_penalty(sg, velocity, eps, bc)
    A[:n, :n] += S
    A[n:, n:] += S
    if bc == "mixed":
        top, bottom = dense_curl_penalty(sg, eps)
        A[:n] += top @ curl
        A[n:] += bottom @ curl
    return A
