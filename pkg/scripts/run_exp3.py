"""Unforced rotation for two resistivities.  Writes divergence tables and
a 100x100 snapshot per (order, epsilon) for plotting."""

import argparse
import logging

from induction_sbp.harness import convergence_rows, format_table, preset, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", default="20,40,80,160")
    ap.add_argument("--out", default="runs/exp3")
    ap.add_argument("--skip-snapshots", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    nodes = tuple(int(n) for n in args.nodes.split(","))
    for eps in (0.001, 0.05):
        for order in (2, 4):
            tag = f"{args.out}/eps{eps:g}_sbp{order}"
            rep = run_experiment(preset(3, order=order, epsilon=eps, nodes=nodes, out=tag))
            print(f"SBP{order}, eps={eps:g}")
            print(format_table(convergence_rows(rep.results, "divergence_error"), "div.error"))
            if not args.skip_snapshots:
                run_experiment(preset(3, order=order, epsilon=eps, nodes=(100,), out=tag + "_100"))


if __name__ == "__main__":
    main()
