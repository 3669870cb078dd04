import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from induction_sbp.model import BCKind, ModelConfig, rotating_hump_solution, rotation_velocity, zero_velocity
from induction_sbp.sat import ForcingSource, InductionScheme, SchemeKind
from induction_sbp.timestep import (
    InstabilityError,
    RunMonitors,
    StepControl,
    divergence_norm,
    integrate,
    rk2_step,
    select_dt,
)
from conftest import make_grid


def test_select_dt_advective_example():
    sg = make_grid((100, 100), 4, [(-1, 1), (-1, 1)])
    dt = select_dt(0.5, sg, rotation_velocity(), 0.0)
    h = 2 / 99
    assert dt == pytest.approx(0.5 * h / math.sqrt(2), rel=1e-12)
    assert dt == pytest.approx(7.14e-3, abs=5e-6)


def test_select_dt_diffusive_branch_scales_with_h_squared():
    dts = []
    for n in (41, 81):
        sg = make_grid((n, n), 2, [(-1, 1), (-1, 1)])
        dts.append(select_dt(0.5, sg, rotation_velocity(), 1.0))
    assert dts[0] / dts[1] == pytest.approx(4.0, rel=1e-12)
    h = 2 / 80
    assert dts[1] == pytest.approx(0.5 * 0.9 * h * h / 4, rel=1e-12)


def test_select_dt_zero_velocity_floor():
    sg = make_grid((11, 11), 2)
    assert select_dt(0.5, sg, zero_velocity(), 0.0) == pytest.approx(0.5 * 0.1 / 1e-12)


@pytest.mark.parametrize("cfl", [0.0, -0.1, 1.5])
def test_bad_cfl(cfl):
    sg = make_grid((11, 11), 2)
    with pytest.raises(ValueError):
        select_dt(cfl, sg, zero_velocity(), 0.1)
    with pytest.raises(ValueError):
        StepControl(cfl=cfl)


def test_rk2_zero_rhs_keeps_state(rng):
    V = rng.standard_normal((2, 4, 4))
    assert np.array_equal(rk2_step(V, 0.0, 0.1, lambda v, t: np.zeros_like(v)), V)
    with pytest.raises(ValueError):
        rk2_step(V, 0.0, 0.0, lambda v, t: v)


@given(lam=st.floats(-5, 5), dt=st.floats(1e-3, 0.5))
def test_rk2_amplification_factor(lam, dt):
    y = rk2_step(np.array([1.0]), 0.0, dt, lambda v, t: lam * v)
    z = lam * dt
    assert y[0] == pytest.approx(1 + z + z * z / 2, rel=1e-13, abs=1e-15)


def test_rk2_global_order_two():
    # y' = -y + sin t, stage times enter through the forcing
    def f(v, t):
        return -v + math.sin(t)

    def exact(t):
        return 0.5 * (math.sin(t) - math.cos(t)) + 1.5 * math.exp(-t)

    errs = []
    for n in (40, 80, 160):
        dt = 2.0 / n
        v, t = np.array([1.0]), 0.0
        for _ in range(n):
            v = rk2_step(v, t, dt, f)
            t += dt
        errs.append(abs(v[0] - exact(2.0)))
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(np.abs(rates - 2) < 0.1)


def _hump_scheme(n, order=4, eps=0.01):
    sg = make_grid((n, n), order, [(-1, 1), (-1, 1)])
    model = ModelConfig(rotation_velocity(), eps, ((-1, 1),) * 2, BCKind.MIXED, rotating_hump_solution())
    return InductionScheme(model, sg, SchemeKind.MIXED_RESISTIVE, ForcingSource.ORACLE), sg


def test_integrate_t_final_zero_returns_initial_data():
    sch, sg = _hump_scheme(12)
    V0 = sch.model.initial_data(sg.grid)
    V, mon, steps = integrate(V0, sch, sg, StepControl(t_final=0.0), 0.01)
    assert steps == 0 and np.array_equal(V, V0)
    assert mon.t == [0.0]


def test_integrate_lands_on_t_final_and_is_deterministic():
    sch, sg = _hump_scheme(16)
    V0 = sch.model.initial_data(sg.grid)
    ctl = StepControl(t_final=0.105)
    a, mon, steps = integrate(V0, sch, sg, ctl, 0.01, monitor_every=3)
    assert steps == 11
    assert mon.t[-1] == pytest.approx(0.105, abs=1e-15)
    assert mon.t[:3] == pytest.approx([0.0, 0.03, 0.06])
    assert all(b >= a_ for a_, b in zip(mon.t, mon.t[1:]))
    sch2, _ = _hump_scheme(16)
    b, _, _ = integrate(V0, sch2, sg, ctl, 0.01, monitor_every=3)
    assert np.array_equal(a, b)


def test_time_refinement_is_second_order():
    """At a fixed fine grid the difference between runs with dt, dt/2 and
    dt/4 contracts by about 4."""
    sch, sg = _hump_scheme(41)
    V0 = sch.model.initial_data(sg.grid)
    ctl = StepControl(t_final=0.4)
    sols = [integrate(V0, sch, sg, ctl, dt, monitor_every=10**6)[0] for dt in (0.02, 0.01, 0.005)]
    d1 = sg.norm(sols[0] - sols[1])
    d2 = sg.norm(sols[1] - sols[2])
    assert math.log2(d1 / d2) == pytest.approx(2.0, abs=0.15)


@pytest.mark.parametrize("bc", ["dirichlet", "mixed"])
def test_energy_monotone_without_velocity(bc, rng):
    sg = make_grid((14, 14), 4)
    model = ModelConfig(zero_velocity(), 0.05, ((0, 1),) * 2, BCKind(bc))
    sch = InductionScheme(model, sg, SchemeKind.from_bc(model.bc_kind))
    V0 = rng.standard_normal((2, 14, 14))
    dt = select_dt(0.5, sg, model.velocity, model.epsilon)
    _, mon, _ = integrate(V0, sch, sg, StepControl(t_final=0.05), dt, monitor_every=1)
    e = np.array(mon.energy)
    assert np.all(np.diff(e) <= 1e-14 * e[0])


def test_zero_data_stays_zero():
    sg = make_grid((12, 12), 2)
    model = ModelConfig(rotation_velocity(), 0.01, ((0, 1),) * 2, BCKind.MIXED)
    sch = InductionScheme(model, sg, SchemeKind.MIXED_RESISTIVE)
    V, mon, _ = integrate(np.zeros((2, 12, 12)), sch, sg, StepControl(t_final=0.2), 0.01)
    assert np.all(V == 0) and max(mon.energy) == 0 and max(mon.divergence) == 0


def test_instability_is_reported():
    sg = make_grid((8, 8), 2)
    with pytest.raises(InstabilityError) as info:
        integrate(np.ones((2, 8, 8)), lambda v, t: 1e3 * v, sg, StepControl(t_final=1.0), 0.1)
    assert info.value.t > 0 and len(info.value.location) == 3


def test_monitors_reject_time_going_back():
    m = RunMonitors()
    m.record(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        m.record(0.5, 1.0, 0.0)
    assert m.as_array().shape == (1, 4)


def test_divergence_norm_weighting(rng):
    sg = make_grid((9, 11), 4)
    V = rng.standard_normal((2, 9, 11))
    d = sg.div(V)
    h = sg.grid.spacings
    assert divergence_norm(sg, V) == pytest.approx(math.sqrt(h[0] * h[1] * np.sum(d * d)))
