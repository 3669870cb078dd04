"""Experiment presets, error metrics, convergence studies and file output."""

from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .grid import GridSpec, SbpGrid, VectorField
from .model import BCKind, ModelConfig, hump_value, rotating_hump_solution, rotation_velocity
from .sat import ForcingSource, InductionScheme, SchemeKind
from .sbp import MIN_NODES
from .timestep import InstabilityError, RunMonitors, StepControl, divergence_norm, integrate, select_dt

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
FLOAT_FMT = "%.17g"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: Union[int, str] = "custom"
    order: int = 4
    bc: str = "mixed"
    epsilon: float = 0.01
    nodes: tuple[int, ...] = (40,)
    cfl: float = 0.5
    t_final: float = TWO_PI
    bounds: tuple[tuple[float, float], ...] = ((-1.0, 1.0), (-1.0, 1.0))
    forcing: str = "oracle"
    # boundary data: "exact" takes g (and the curl data h) from the rotating
    # hump, "zero" imposes homogeneous data
    boundary_data: str = "exact"
    out: Optional[str] = None
    diffusion_safety: float = 0.9
    monitor_every: int = 10
    # fixed step overriding the CFL rule
    dt: Optional[float] = None

    def __post_init__(self):
        self.nodes = tuple(int(n) for n in self.nodes)
        self.bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)

    def validate(self) -> "ExperimentConfig":
        if self.order not in MIN_NODES:
            raise ConfigError(f"order must be one of {sorted(MIN_NODES)}, got {self.order}")
        if self.bc not in ("dirichlet", "mixed"):
            raise ConfigError(f"bc must be 'dirichlet' or 'mixed', got {self.bc!r}")
        if self.forcing not in ("oracle", "printed", "none"):
            raise ConfigError(f"unknown forcing source {self.forcing!r}")
        if self.boundary_data not in ("exact", "zero"):
            raise ConfigError(f"boundary_data must be 'exact' or 'zero', got {self.boundary_data!r}")
        if self.forcing != "none" and self.boundary_data != "exact":
            raise ConfigError("manufactured forcing needs boundary data from the exact solution")
        if not self.nodes:
            raise ConfigError("at least one grid size is required")
        if min(self.nodes) < MIN_NODES[self.order]:
            raise ConfigError(f"SBP{self.order} needs at least {MIN_NODES[self.order]} nodes per axis")
        if self.epsilon < 0 or (self.bc == "mixed" and self.epsilon == 0):
            raise ConfigError("epsilon must be positive for mixed conditions and non-negative otherwise")
        if not 0 < self.cfl <= 1:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.t_final < 0:
            raise ConfigError("t_final must be non-negative")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("a fixed dt must be positive")
        if len(self.bounds) != 2 or any(not hi > lo for lo, hi in self.bounds):
            raise ConfigError(f"bad domain {self.bounds}")
        if len(self.nodes) > 1:
            check_doubling(self.nodes)
        return self


def preset(experiment: int, **overrides) -> ExperimentConfig:
    """The three experiment set-ups; keyword arguments override fields."""
    base = {
        1: dict(bc="mixed", epsilon=0.01, bounds=((-1.0, 1.0),) * 2, forcing="oracle"),
        2: dict(bc="dirichlet", epsilon=0.01, bounds=((0.0, 1.0),) * 2, forcing="oracle"),
        # unforced, homogeneous mixed data.  Heun's method is unstable at
        # CFL 0.5 once resistive damping is weak (eps = 0.001 from 80^2)
        3: dict(
            bc="mixed", epsilon=0.05, bounds=((-1.0, 1.0),) * 2, forcing="none",
            boundary_data="zero", cfl=0.25,
        ),
    }
    if experiment not in base:
        raise ConfigError(f"unknown experiment {experiment!r}")
    fields = dict(experiment=experiment, t_final=TWO_PI, **base[experiment])
    fields.update(overrides)
    return ExperimentConfig(**fields)


def check_doubling(nodes: Sequence[int]):
    if len(nodes) < 2:
        raise ConfigError("a convergence study needs at least two grids")
    for a, b in zip(nodes, nodes[1:]):
        if b != 2 * a:
            raise ConfigError(f"grid sequence must double the node count: {a} -> {b}")


# metrics


def relative_error(V_num: VectorField, V_ex: VectorField) -> float:
    """``||V_num - V_ex|| / ||V_ex||`` over all components; uniform node
    weights cancel."""
    V_num = np.asarray(V_num, dtype=float)
    V_ex = np.asarray(V_ex, dtype=float)
    if V_num.shape != V_ex.shape:
        raise ValueError(f"shape mismatch {V_num.shape} vs {V_ex.shape}")
    den = np.linalg.norm(V_ex)
    if den == 0:
        raise ZeroDivisionError("reference field is identically zero")
    return float(np.linalg.norm(V_num - V_ex) / den)


def relative_percentage_error(V_num: VectorField, V_ex: VectorField) -> float:
    return 100.0 * relative_error(V_num, V_ex)


def divergence_error(sgrid: SbpGrid, V: VectorField) -> float:
    return divergence_norm(sgrid, V)


def convergence_rate(e_prev: float, e_cur: float) -> float:
    return math.log2(e_prev / e_cur)


# building and running


def build_model(cfg: ExperimentConfig) -> ModelConfig:
    exact = rotating_hump_solution() if cfg.boundary_data == "exact" else None
    return ModelConfig(
        velocity=rotation_velocity(),
        epsilon=cfg.epsilon,
        bounds=cfg.bounds,
        bc_kind=BCKind(cfg.bc),
        exact=exact,
        initial=lambda coords: hump_value(coords, 0.0),
    )


def build_scheme(cfg: ExperimentConfig, n: int) -> InductionScheme:
    grid = GridSpec.box(cfg.bounds, (n, n))
    sgrid = SbpGrid.build(grid, cfg.order)
    model = build_model(cfg)
    return InductionScheme(model, sgrid, SchemeKind.from_bc(model.bc_kind), ForcingSource(cfg.forcing))


@dataclass
class RunResult:
    nodes: int
    dt: float
    steps: int
    V: Optional[VectorField]
    monitors: RunMonitors
    divergence_error: float = float("nan")
    relative_error: float = float("nan")
    wall_time: float = 0.0
    status: str = "ok"
    sgrid: Optional[SbpGrid] = field(default=None, repr=False)

    @property
    def relative_percentage_error(self) -> float:
        return 100.0 * self.relative_error

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def run_single(cfg: ExperimentConfig, n: int) -> RunResult:
    scheme = build_scheme(cfg, n)
    sg, model = scheme.sgrid, scheme.model
    ctl = StepControl(cfg.cfl, cfg.t_final, cfg.diffusion_safety)
    dt = cfg.dt or select_dt(cfg.cfl, sg, model.velocity, model.epsilon, cfg.diffusion_safety)
    monitors = RunMonitors()
    t0 = time.perf_counter()
    try:
        V, monitors, steps = integrate(
            model.initial_data(sg.grid), scheme, sg, ctl, dt, cfg.monitor_every, monitors
        )
    except InstabilityError as exc:
        log.warning("run with %d nodes aborted: %s", n, exc)
        return RunResult(
            n, dt, -1, None, monitors, wall_time=time.perf_counter() - t0,
            status=f"unstable: {exc}", sgrid=sg,
        )
    res = RunResult(n, dt, steps, V, monitors, wall_time=time.perf_counter() - t0, sgrid=sg)
    res.divergence_error = divergence_error(sg, V)
    if cfg.forcing != "none":
        res.relative_error = relative_error(V, model.exact.value(sg.grid.coords(), cfg.t_final))
    log.info(
        "n=%d steps=%d rel=%.3e div=%.3e (%.1fs)",
        n, steps, res.relative_error, res.divergence_error, res.wall_time,
    )
    return res


@dataclass
class ConvergenceRow:
    label: str
    nodes: int
    error: float
    rate: Optional[float] = None

    def formatted_rate(self) -> str:
        return "" if self.rate is None else f"{self.rate:.1f}"


METRICS = ("relative_error", "relative_percentage_error", "divergence_error")


def convergence_rows(results: Sequence[RunResult], metric: str = "relative_error") -> list[ConvergenceRow]:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    rows: list[ConvergenceRow] = []
    for r in results:
        err = getattr(r, metric)
        rate = None
        if rows:
            prev = rows[-1].error
            rate = convergence_rate(prev, err) if prev > 0 and err > 0 else float("nan")
        rows.append(ConvergenceRow(f"{r.nodes}x{r.nodes}", r.nodes, err, rate))
    return rows


def convergence_study(cfg: ExperimentConfig, metric: str = "relative_error") -> list[ConvergenceRow]:
    check_doubling(cfg.nodes)
    cfg.validate()
    return convergence_rows([run_single(cfg, n) for n in cfg.nodes], metric)


def format_table(rows: Sequence[ConvergenceRow], title: str = "error") -> str:
    lines = [f"{'grid':>10}  {title:>10}  rate"]
    for r in rows:
        lines.append(f"{r.label:>10}  {r.error:10.2e}  {r.formatted_rate()}")
    return "\n".join(lines)


# output files


def write_monitors(path: Path, monitors: RunMonitors):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "energy", "divergence_norm"])
        for row in zip(monitors.t, monitors.energy, monitors.divergence):
            w.writerow([FLOAT_FMT % v for v in row])


def write_snapshot(path: Path, sgrid: SbpGrid, V: VectorField):
    x, y = sgrid.grid.coords()
    mag = np.sqrt(V[0] ** 2 + V[1] ** 2)
    data = np.column_stack([a.ravel() for a in (x, y, V[0], V[1], mag)])
    np.savetxt(path, data, fmt=FLOAT_FMT, header="x y B1 B2 magnitude", comments="")


def read_snapshot(path: Path) -> np.ndarray:
    return np.loadtxt(path, skiprows=1, ndmin=2)


def _to_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return float("nan")


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    """Header and numeric body; text cells (e.g. the status) read as NaN."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return header, np.array([[_to_float(v) for v in r] for r in body], dtype=float)


SUMMARY_FIELDS = [
    "nodes", "relative_percentage_error", "relative_error", "divergence_error",
    "dt", "steps", "wall_time", "status",
]


def write_summary(path: Path, results: Sequence[RunResult]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for r in results:
            w.writerow(
                [r.nodes]
                + [FLOAT_FMT % getattr(r, k) for k in SUMMARY_FIELDS[1:5]]
                + [r.steps, "%.3f" % r.wall_time, r.status]
            )


def write_convergence(path: Path, results: Sequence[RunResult]):
    cols = {m: convergence_rows(results, m) for m in METRICS}
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["grid", "nodes"] + [k for m in METRICS for k in (m, m + "_rate")])
        for i, r in enumerate(results):
            vals = []
            for m in METRICS:
                row = cols[m][i]
                vals += [FLOAT_FMT % row.error, "" if row.rate is None else FLOAT_FMT % row.rate]
            w.writerow([f"{r.nodes}x{r.nodes}", r.nodes] + vals)


@dataclass
class RunReport:
    config: ExperimentConfig
    results: list[RunResult]
    out_dir: Optional[Path]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    """Run every grid in ``cfg.nodes`` and write the output files.

    Per grid: ``monitors_N.csv`` and ``snapshot_N.txt``; overall
    ``summary.csv`` and, for several grids, ``convergence.csv``.
    """
    cfg.validate()
    out = None
    if cfg.out is not None:
        out = Path(cfg.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    results = []
    for n in cfg.nodes:
        r = run_single(cfg, n)
        results.append(r)
        if out is not None:
            write_monitors(out / f"monitors_{n}.csv", r.monitors)
            if r.V is not None:
                write_snapshot(out / f"snapshot_{n}.txt", r.sgrid, r.V)
    if out is not None:
        write_summary(out / "summary.csv", results)
        if len(results) > 1:
            write_convergence(out / "convergence.csv", results)
    return RunReport(cfg, results, out)


def with_nodes(cfg: ExperimentConfig, nodes: Sequence[int]) -> ExperimentConfig:
    return replace(cfg, nodes=tuple(nodes))
