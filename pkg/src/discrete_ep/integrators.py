"""Implicit discrete Euler-Poincare stepping and the discrete Lie-Poisson update.

Left-invariant convention (the rigid body). With ``f = f_{k+1,k} = g_{k+1}^-1 g_k``
one step solves the generating system

    Pi_k     = left_momentum(f)     (solved for f by Newton)
    Pi_{k+1} = right_momentum(f)

and then ``Pi_{k+1} = coAd(f^-1, Pi_k)`` holds automatically. Attitudes are
reconstructed by ``g_{k+1} = g_k f^-1``. The right-invariant mirror swaps the
roles of the two momenta and reconstructs with ``g_{k+1} = f^-1 g_k``.

Newton runs in the chart ``f_current exp(x)`` and re-centres after each
update, so the Jacobian is always taken at ``x = 0``.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import so3
from .errors import NoConvergence, RegularityWarning, SingularJacobian, SolverError
from .lie import FD_STEP

COND_LIMIT = 1e12
DLP_TOL = 1e-10
# rad; beyond this the near-diagonal regularity assumption is suspect
MAX_STEP_ROTATION = 1.0


@dataclass(frozen=True)
class StepperConfig:
    newton_tol: float = 1e-12
    max_iters: int = 50
    fd_jacobian: bool = False
    guess_strategy: str = "previous_f"

    def __post_init__(self):
        if not self.newton_tol > 0:
            raise ValueError("newton_tol must be > 0")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be an integer >= 1")
        if self.guess_strategy not in ("previous_f", "identity"):
            raise ValueError("guess_strategy must be 'previous_f' or 'identity'")


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class TrajectoryRecord:
    """Output of :func:`run_dep`.

    ``f_seq[k]`` takes step k to k+1, so ``len(pi_seq) == len(f_seq) + 1``.
    ``g_seq`` (same length as ``pi_seq``) is filled in by :meth:`with_attitudes`.
    """

    h: float
    f_seq: np.ndarray
    pi_seq: np.ndarray
    g_seq: Optional[np.ndarray] = None
    iterations: Optional[np.ndarray] = None
    residuals: Optional[np.ndarray] = None
    side: str = "left"

    def __post_init__(self):
        for name in ("f_seq", "pi_seq", "g_seq", "iterations", "residuals"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, _frozen(val))
        if len(self.pi_seq) != len(self.f_seq) + 1:
            raise ValueError("pi_seq must have exactly one more entry than f_seq")
        if self.g_seq is not None and len(self.g_seq) != len(self.pi_seq):
            raise ValueError("g_seq must have the same length as pi_seq")

    @property
    def n_steps(self):
        return len(self.f_seq)

    @property
    def times(self):
        return self.h * np.arange(len(self.pi_seq))

    def with_attitudes(self, g0=so3.IDENTITY):
        recon = reconstruct_left if self.side == "left" else reconstruct_right
        g = recon(g0, self.f_seq)
        return TrajectoryRecord(
            self.h, self.f_seq, self.pi_seq, g, self.iterations, self.residuals, self.side
        )


def _jacobian(ell, f, momentum, use_fd):
    G = ell.group
    if not use_fd and momentum == ell.left_momentum:
        J = ell.left_jacobian(f)
        if J is not None:
            return J
    J = np.empty((G.dim, G.dim))
    e = np.zeros(G.dim)
    for j in range(G.dim):
        e[j] = FD_STEP
        J[:, j] = (momentum(G.compose(f, G.exp(e))) - momentum(G.compose(f, G.exp(-e)))) / (
            2.0 * FD_STEP
        )
        e[j] = 0.0
    return J


def _newton(ell, target, momentum, cfg, guess):
    """Solve momentum(f) = target. Returns (f, iterations, residual norm).

    Once the residual is within tolerance one extra update is tried and kept
    only if it lowers the residual; quadratic convergence then lands at
    rounding level, which the Casimir bounds over long runs need.
    """
    G = ell.group
    f = np.asarray(guess, dtype=float)
    best = np.inf
    for it in range(cfg.max_iters + 1):
        r = momentum(f) - target
        res = float(np.sqrt(r @ r))
        best = min(best, res)
        if res <= cfg.newton_tol:
            return _polish(ell, target, momentum, cfg, f, r, res, it)
        if it == cfg.max_iters:
            break
        f = G.compose(f, G.exp(_newton_update(ell, f, r, momentum, cfg, best)))
    raise NoConvergence(f"no convergence in {cfg.max_iters} Newton iterations", best)


def _newton_update(ell, f, r, momentum, cfg, best):
    J = _jacobian(ell, f, momentum, cfg.fd_jacobian)
    if np.linalg.cond(J) > COND_LIMIT:
        raise SingularJacobian("Newton Jacobian is numerically singular", best)
    return np.linalg.solve(J, -r)


def _polish(ell, target, momentum, cfg, f, r, res, it):
    if res == 0.0:
        return f, it, res
    G = ell.group
    f_new = G.compose(f, G.exp(_newton_update(ell, f, r, momentum, cfg, res)))
    r_new = momentum(f_new) - target
    res_new = float(np.sqrt(r_new @ r_new))
    if res_new < res:
        return f_new, it + 1, res_new
    return f, it, res


def _momenta(ell, side):
    if side == "left":
        return ell.left_momentum, ell.right_momentum
    if side == "right":
        return ell.right_momentum, ell.left_momentum
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def solve_generating_step(ell, Pi_k, cfg=None, guess=None, side="left"):
    """One implicit step: returns ``(f, Pi_next)``.

    For ``side="left"`` solves ``left_momentum(f) = Pi_k`` and sets
    ``Pi_next = right_momentum(f)``; ``side="right"`` is the mirror.
    """
    cfg = cfg or StepperConfig()
    solve_for, advance = _momenta(ell, side)
    if guess is None:
        guess = ell.group.identity
    f, _, _ = _newton(ell, np.asarray(Pi_k, dtype=float), solve_for, cfg, guess)
    return f, advance(f)


def dep_residual_left(ell, f_prev, f_next):
    """L*_{f_next} d ell(f_next) - R*_{f_prev} d ell(f_prev); zero on DEP solutions."""
    return ell.left_momentum(f_next) - ell.right_momentum(f_prev)


def dep_residual_right(ell, f_prev, f_next):
    """R*_{f_next} d ell(f_next) - L*_{f_prev} d ell(f_prev); zero on DEP solutions."""
    return ell.right_momentum(f_next) - ell.left_momentum(f_prev)


def dlp_step_left(Pi_k, f, group=so3.SO3):
    return group.coAd(group.inverse(f), Pi_k)


def dlp_step_right(mu_k, f, group=so3.SO3):
    return group.coAd(f, mu_k)


def run_dep(ell, Pi0, n_steps, cfg=None, h=1.0, side="left"):
    """Iterate :func:`solve_generating_step` ``n_steps`` times from ``Pi0``.

    Each step is checked against the coadjoint update to ``DLP_TOL``. Solver
    failures are re-raised with their ``step`` attribute set.
    """
    if int(n_steps) != n_steps or n_steps < 1:
        raise ValueError("n_steps must be an integer >= 1")
    cfg = cfg or StepperConfig()
    G = ell.group
    solve_for, advance = _momenta(ell, side)
    dlp = dlp_step_left if side == "left" else dlp_step_right

    f_seq = np.empty((n_steps,) + np.shape(G.identity))
    pi_seq = np.empty((n_steps + 1, G.dim))
    iters = np.empty(n_steps)
    resid = np.empty(n_steps)
    pi_seq[0] = Pi0
    f = G.identity
    warned = False
    for k in range(n_steps):
        # re-seat the guess on the group so orthogonality error cannot compound
        guess = G.exp(G.log(f)) if cfg.guess_strategy == "previous_f" else G.identity
        try:
            f, iters[k], resid[k] = _newton(ell, pi_seq[k], solve_for, cfg, guess)
        except SolverError as exc:
            exc.step = k
            raise
        pi_seq[k + 1] = advance(f)
        gap = pi_seq[k + 1] - dlp(pi_seq[k], f, G)
        if float(np.sqrt(gap @ gap)) > DLP_TOL:
            raise SolverError(
                "generating-system step disagrees with the coadjoint update",
                float(np.linalg.norm(gap)),
                step=k,
            )
        if not warned and G is so3.SO3 and so3.rotation_angle(f) > MAX_STEP_ROTATION:
            warnings.warn(
                f"step {k}: per-step rotation {so3.rotation_angle(f):.3f} rad exceeds "
                f"{MAX_STEP_ROTATION} rad; near-diagonal regularity may fail",
                RegularityWarning,
                stacklevel=2,
            )
            warned = True
        f_seq[k] = f
    return TrajectoryRecord(h, f_seq, pi_seq, iterations=iters, residuals=resid, side=side)


def reconstruct_left(g0, f_seq, group=so3.SO3):
    """g_{k+1} = g_k f_k^-1; returns ``len(f_seq) + 1`` attitudes."""
    g = np.empty((len(f_seq) + 1,) + np.shape(g0))
    g[0] = g0
    for k, f in enumerate(f_seq):
        g[k + 1] = group.compose(g[k], group.inverse(f))
    return g


def reconstruct_right(g0, f_seq, group=so3.SO3):
    """g_{k+1} = f_k^-1 g_k; returns ``len(f_seq) + 1`` attitudes."""
    g = np.empty((len(f_seq) + 1,) + np.shape(g0))
    g[0] = g0
    for k, f in enumerate(f_seq):
        g[k + 1] = group.compose(group.inverse(f), g[k])
    return g


def spatial_momentum_left(g_seq, pi_seq, group=so3.SO3):
    """pi0 = coAd(g_k^-1, Pi_k) per step; constant along exact left-invariant dynamics."""
    return np.array([group.coAd(group.inverse(g), p) for g, p in zip(g_seq, pi_seq)])


def spatial_momentum_right(g_seq, mu_seq, group=so3.SO3):
    """mu0 = coAd(g_k, mu_k) per step (inverts mu_k = coAd(g_k^-1, mu0))."""
    return np.array([group.coAd(g, m) for g, m in zip(g_seq, mu_seq)])
