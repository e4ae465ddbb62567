"""Long-horizon energy behaviour: block means of the reconstructed discrete energy.

    python3 scripts/energy_long_run.py [--steps 100000]
"""

import argparse

import numpy as np

from discrete_ep.diagnostics import trajectory_invariants
from discrete_ep.integrators import run_dep
from discrete_ep.rigid_body import InertiaSpec, MoserVeselovLagrangian


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--h", type=float, default=0.05)
    p.add_argument("--blocks", type=int, default=10)
    args = p.parse_args()

    J = InertiaSpec((1.0, 2.0, 3.0))
    traj = run_dep(MoserVeselovLagrangian(J), args.h * J.moments * np.array([1.0, 0.5, 0.25]), args.steps, h=args.h)
    e = trajectory_invariants(traj, J)["energy"]
    for i, block in enumerate(np.array_split(e, args.blocks)):
        print(f"block {i}: mean {block.mean():.15f}  spread {np.ptp(block):.3e}")


if __name__ == "__main__":
    main()
