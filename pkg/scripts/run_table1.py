"""Rotating hump on [-1,1]^2 with mixed boundary conditions: errors and
divergence errors for both orders on a doubling sequence of grids."""

import argparse
import logging

from induction_sbp.harness import convergence_rows, format_table, preset, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", default="40,80,160,320")
    ap.add_argument("--out", default="runs/exp1")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    nodes = tuple(int(n) for n in args.nodes.split(","))
    for order in (2, 4):
        rep = run_experiment(preset(1, order=order, nodes=nodes, out=f"{args.out}/sbp{order}"))
        print(f"SBP{order}")
        print(format_table(convergence_rows(rep.results, "relative_error"), "rel.error"))
        print(format_table(convergence_rows(rep.results, "divergence_error"), "div.error"))


if __name__ == "__main__":
    main()
