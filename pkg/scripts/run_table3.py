"""Rotating hump on [0,1]^2 with Dirichlet data: the hump leaves and
re-enters the domain during one revolution."""

import argparse
import logging

from induction_sbp.harness import convergence_rows, format_table, preset, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", default="20,40,80,160")
    ap.add_argument("--out", default="runs/exp2")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    nodes = tuple(int(n) for n in args.nodes.split(","))
    for order in (2, 4):
        rep = run_experiment(preset(2, order=order, nodes=nodes, out=f"{args.out}/sbp{order}"))
        print(f"SBP{order}")
        print(format_table(convergence_rows(rep.results, "relative_error"), "rel.error"))
        print(format_table(convergence_rows(rep.results, "divergence_error"), "div.error"))


if __name__ == "__main__":
    main()
