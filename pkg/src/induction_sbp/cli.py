"""Command line entry point.

    python -m induction_sbp run --experiment 1 --order 4 --nodes 40,80 --out runs/exp1

A ``--config`` file holds ``key = value`` lines using the flag names
(``experiment``, ``order``, ``nodes``, ``epsilon``, ``cfl``, ``tfinal``,
``bc``, ``forcing``, ``boundary_data``, ``out``, ``domain``); flags given on
the command line take precedence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .harness import ConfigError, ExperimentConfig, convergence_rows, format_table, preset, run_experiment

EXIT_OK, EXIT_UNSTABLE, EXIT_CONFIG = 0, 1, 2

KEYS = (
    "experiment", "order", "nodes", "epsilon", "cfl", "tfinal",
    "bc", "forcing", "boundary_data", "out", "domain",
)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"bad node list {text!r}") from None


def _domain(text: str) -> tuple[tuple[float, float], ...]:
    vals = [float(v) for v in str(text).split(",")]
    if len(vals) != 4:
        raise ConfigError("domain needs four numbers: xlo,xhi,ylo,yhi")
    return ((vals[0], vals[1]), (vals[2], vals[3]))


def _experiment(text) -> object:
    text = str(text).strip()
    return text if text == "custom" else int(text)


CONVERTERS = {
    "experiment": _experiment,
    "order": int,
    "nodes": _int_list,
    "epsilon": float,
    "cfl": float,
    "tfinal": float,
    "bc": str,
    "forcing": str,
    "boundary_data": str,
    "out": str,
    "domain": _domain,
}


def read_config_file(path: Path) -> dict:
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(f"{path}:{num}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(raw: dict) -> ExperimentConfig:
    try:
        vals = {k: CONVERTERS[k](v) for k, v in raw.items() if v is not None}
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    fields = {}
    renamed = {"tfinal": "t_final", "domain": "bounds"}
    for key, value in vals.items():
        if key != "experiment":
            fields[renamed.get(key, key)] = value
    exp = vals.get("experiment", "custom")
    if exp == "custom":
        return ExperimentConfig(experiment="custom", **fields).validate()
    return preset(exp, **fields).validate()


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="induction_sbp")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment or a convergence study")
    run.add_argument("--experiment", help="1, 2, 3 or custom")
    run.add_argument("--order", choices=["2", "4"])
    run.add_argument("--nodes", help="nodes per axis, comma separated for a study")
    run.add_argument("--epsilon")
    run.add_argument("--cfl")
    run.add_argument("--tfinal")
    run.add_argument("--bc", choices=["dirichlet", "mixed"])
    run.add_argument("--forcing", choices=["oracle", "printed", "none"])
    run.add_argument("--boundary-data", dest="boundary_data", choices=["exact", "zero"])
    run.add_argument("--domain", help="xlo,xhi,ylo,yhi")
    run.add_argument("--out")
    run.add_argument("--config", type=Path)
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        raw = read_config_file(args.config) if args.config else {}
        raw.update({k: getattr(args, k) for k in KEYS if getattr(args, k) is not None})
        cfg = build_config(raw)
        report = run_experiment(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    results = report.results
    print(f"experiment {cfg.experiment}, SBP{cfg.order}, {cfg.bc}, eps={cfg.epsilon:g}")
    for r in results:
        print(
            f"{r.nodes}x{r.nodes}: steps={r.steps} dt={r.dt:.3e} rel.error={r.relative_error:.3e} "
            f"div.error={r.divergence_error:.3e} [{r.status}]"
        )
    if len(results) > 1 and report.ok:
        if cfg.forcing != "none":
            print(format_table(convergence_rows(results, "relative_error"), "rel.error"))
        print(format_table(convergence_rows(results, "divergence_error"), "div.error"))
    if report.out_dir is not None:
        print(f"output written to {report.out_dir}")
    return EXIT_OK if report.ok else EXIT_UNSTABLE


if __name__ == "__main__":
    sys.exit(main())
