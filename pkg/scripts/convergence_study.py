"""Convergence of Pi_N / h to the RK4 reference at T, over a ladder of step sizes.

    python3 scripts/convergence_study.py [--T 1.0] [--levels 4]
"""

import argparse

import numpy as np

from discrete_ep.diagnostics import convergence_study
from discrete_ep.rigid_body import InertiaSpec


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--h0", type=float, default=0.02)
    args = p.parse_args()

    J = InertiaSpec((1.0, 2.0, 3.0))
    h_list = [args.h0 / 2**i for i in range(args.levels)]
    table = convergence_study(J, J.moments * np.array([1.0, 0.5, 0.25]), args.T, h_list)
    print(f"{'h':>10} {'error':>14} {'order':>8}")
    for h, err, order in table.rows:
        print(f"{h:>10.6g} {err:>14.6e} {'' if order is None else f'{order:8.4f}'}")
    print(f"oracle steps {table.oracle_steps}, refinement change {table.oracle_rel_change:.2e}")


if __name__ == "__main__":
    main()
