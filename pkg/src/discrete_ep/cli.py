"""Command-line driver.

    discrete-ep run.cfg --steps 2000 --out traj.csv

Exit status: 0 on success, 1 on solver failure or a failed verification
property, 2 on an invalid configuration.
"""

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import csvio
from .config import parse_config
from .diagnostics import (
    conservation_report,
    convergence_study,
    dlp_consistency,
    spatial_momentum,
    trajectory_invariants,
    verification_suite,
)
from .errors import ConfigError, SolverError
from .integrators import (
    StepperConfig,
    TrajectoryRecord,
    dep_residual_left,
    dlp_step_left,
    run_dep,
)
from .rigid_body import MoserVeselovLagrangian

FLAG_KEYS = ("mode", "lambda", "classical", "pi0", "omega0", "h", "steps", "out", "tol", "seed", "max_iters", "samples")


def summary_path(out):
    return str(Path(out).with_suffix("")) + ".summary.txt"


def _stepper(cfg):
    return StepperConfig(
        newton_tol=cfg.tol,
        max_iters=cfg.max_iters,
        fd_jacobian=cfg.fd_jacobian,
        guess_strategy=cfg.guess,
    )


def _invariants(traj, cfg):
    inv = trajectory_invariants(traj, cfg.inertia)
    return {k: v for k, v in inv.items() if k in cfg.report}


def drift_lines(traj, cfg):
    lines = []
    for rep in conservation_report(traj, cfg.inertia):
        base = "spatial_momentum" if rep.name.startswith("spatial_momentum") else rep.name
        if base not in cfg.report:
            continue
        lines.append(
            f"{rep.name:<20} initial={rep.initial:.17g} max_rel_dev={rep.max_rel_deviation:.3e} "
            f"max_abs_dev={rep.max_abs_deviation:.3e} slope={rep.slope:.3e}"
        )
    return lines


def _trajectory_summary(traj, cfg, ell, extra=()):
    lines = [f"mode: {cfg.mode}", f"h: {traj.h:.17g}  steps: {traj.n_steps}"]
    lines += drift_lines(traj, cfg)
    if traj.iterations is not None:
        lines.append(
            f"newton iterations: mean {np.mean(traj.iterations):.2f} max {int(np.max(traj.iterations))}"
        )
        lines.append(f"max newton residual: {np.max(traj.residuals):.3e}")
    res = max(
        (float(np.linalg.norm(dep_residual_left(ell, a, b))) for a, b in zip(traj.f_seq[:-1], traj.f_seq[1:])),
        default=0.0,
    )
    lines.append(f"max DEP residual: {res:.3e}")
    lines.append(f"max DLP gap: {dlp_consistency(traj):.3e}")
    lines += list(extra)
    return lines


def _run_trajectory(cfg, out):
    ell = MoserVeselovLagrangian(cfg.inertia)
    traj = run_dep(ell, np.array(cfg.pi0), cfg.steps, _stepper(cfg), h=cfg.h)
    extra = []
    if cfg.mode == "dlp":
        pis = np.empty_like(traj.pi_seq)
        pis[0] = traj.pi_seq[0]
        for k, f in enumerate(traj.f_seq):
            pis[k + 1] = dlp_step_left(pis[k], f)
        extra.append(f"max |Pi_dlp - Pi_dep|: {np.max(np.linalg.norm(pis - traj.pi_seq, axis=1)):.3e}")
        traj = TrajectoryRecord(traj.h, traj.f_seq, pis, None, traj.iterations, traj.residuals)
    if cfg.mode == "reconstruct":
        traj = traj.with_attitudes()
        sm = spatial_momentum(traj)
        extra.append(f"spatial momentum: {' '.join(f'{x:.17g}' for x in sm[0])}")
        extra.append(f"max spatial momentum deviation: {np.max(np.linalg.norm(sm - sm[0], axis=1)):.3e}")
    csvio.write_trajectory(out, traj, _invariants(traj, cfg))
    return _trajectory_summary(traj, cfg, ell, extra)


def _run_convergence(cfg, out):
    table = convergence_study(cfg.inertia, cfg.continuous_momentum(), cfg.T, cfg.h_list, _stepper(cfg))
    csvio.write_convergence(out, table)
    lines = [f"mode: convergence  T: {cfg.T:.17g}  oracle RK4 steps: {table.oracle_steps}"]
    for h, err, order in table.rows:
        lines.append(f"h={h:<10.6g} error={err:.6e}" + ("" if order is None else f"  order={order:.4f}"))
    lines.append(f"oracle refinement relative change in errors: {table.oracle_rel_change:.3e}")
    return lines


def run(cfg, stdout=None, stderr=None):
    """Execute a validated :class:`RunConfig`; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.mode == "verify":
        results = verification_suite(cfg.seed, cfg.samples, cfg.inertia)
        for r in results:
            print(r.line(), file=stdout)
        return 0 if all(r.passed for r in results) else 1

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            if cfg.mode == "convergence":
                lines = _run_convergence(cfg, cfg.out)
            else:
                lines = _run_trajectory(cfg, cfg.out)
        except SolverError as exc:
            print(f"error: solver failure: {exc}", file=stderr)
            return 1
    for w in caught:
        print(f"warning: {w.message}", file=stderr)
    lines.append(f"warnings: {len(caught)}")
    text = "\n".join(lines) + "\n"
    stdout.write(text)
    Path(summary_path(cfg.out)).write_text(text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="discrete-ep",
        description="Discrete Euler-Poincare / Lie-Poisson integrator for the free rigid body.",
    )
    p.add_argument("config", nargs="?", help="key = value config file")
    p.add_argument("--mode", choices=("dep", "dlp", "reconstruct", "convergence", "verify"))
    p.add_argument("--lambda", dest="lambda_", metavar="L1,L2,L3")
    p.add_argument("--classical", metavar="J1,J2,J3")
    p.add_argument("--pi0", metavar="P1,P2,P3", help="initial discrete body momentum")
    p.add_argument("--omega0", metavar="W1,W2,W3", help="initial continuous angular velocity")
    p.add_argument("--h")
    p.add_argument("--steps")
    p.add_argument("--out")
    p.add_argument("--tol")
    p.add_argument("--seed")
    p.add_argument("--max-iters", dest="max_iters")
    p.add_argument("--samples")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, "lambda_" if k == "lambda" else k) for k in FLAG_KEYS}
    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text, overrides)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
