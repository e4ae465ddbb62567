"""Verification harness: invariant drift, diagram commutativity, convergence.

Discrete energy is a diagnostic convention: ``xi_k = log(f_k) / h`` evaluated
in the continuous kinetic energy. It should oscillate without trend.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import so3
from .errors import AngleNearPi, RegularityWarning
from .integrators import (
    dlp_step_left,
    run_dep,
    spatial_momentum_left,
    spatial_momentum_right,
)
from .lie import FD_STEP, fd_left_momentum, fd_right_momentum
from .oracle import rk4_run
from .rigid_body import (
    MoserVeselovLagrangian,
    casimir_dual,
    casimir_group,
    energy,
    mv_legendre,
)


@dataclass(frozen=True)
class DriftReport:
    """Drift of one quantity along a trajectory.

    ``deviations[k] = (value_k - value_0) / scale`` where ``scale`` is
    ``|value_0|`` (or 1 when that is zero) unless given explicitly.
    """

    name: str
    initial: float
    deviations: np.ndarray
    max_abs_deviation: float
    slope: float
    scale: float = 1.0

    @property
    def max_rel_deviation(self):
        return float(np.max(np.abs(self.deviations))) if len(self.deviations) else 0.0


def drift_report(name, values, scale=None):
    values = np.asarray(values, dtype=float)
    v0 = float(values[0])
    if scale is None:
        scale = abs(v0) if v0 != 0.0 else 1.0
    dev = (values - v0) / scale
    if len(dev) > 1:
        slope = float(np.polyfit(np.arange(len(dev)), dev, 1)[0])
    else:
        slope = 0.0
    return DriftReport(name, v0, dev, float(np.max(np.abs(values - v0))), slope, scale)


def discrete_energy(J, f, h):
    """Kinetic energy at xi = log(f) / h; NaN (with a warning) if f is near angle pi."""
    try:
        return energy(J, so3.log(f) / h)
    except AngleNearPi:
        warnings.warn("per-step rotation near pi; discrete energy undefined", RegularityWarning)
        return float("nan")


def trajectory_invariants(traj, J):
    """Per-step casimir_group, energy (length n_steps) and casimir_dual (n_steps + 1)."""
    return {
        "casimir_group": np.array([casimir_group(J, f) for f in traj.f_seq]),
        "casimir_dual": np.array([casimir_dual(p) for p in traj.pi_seq]),
        "energy": np.array([discrete_energy(J, f, traj.h) for f in traj.f_seq]),
    }


def spatial_momentum(traj):
    if traj.g_seq is None:
        return None
    if traj.side == "left":
        return spatial_momentum_left(traj.g_seq, traj.pi_seq)
    return spatial_momentum_right(traj.g_seq, traj.pi_seq)


def conservation_report(traj, J):
    inv = trajectory_invariants(traj, J)
    reports = [drift_report(name, inv[name]) for name in ("casimir_group", "casimir_dual", "energy")]
    sm = spatial_momentum(traj)
    if sm is not None:
        norm0 = float(np.linalg.norm(sm[0])) or 1.0
        for i in range(3):
            reports.append(drift_report(f"spatial_momentum_{i + 1}", sm[:, i], scale=norm0))
    return reports


def dlp_consistency(traj):
    """max_k |Pi_{k+1} - coAd(f_k^-1, Pi_k)|."""
    if traj.n_steps == 0:
        return 0.0
    pred = np.array([dlp_step_left(p, f) for p, f in zip(traj.pi_seq[:-1], traj.f_seq)])
    return float(np.max(np.linalg.norm(traj.pi_seq[1:] - pred, axis=1)))


# --- diagram check ----------------------------------------------------------


def _exp_ld(v):
    # Rodrigues in extended precision; only used away from v = 0 by the FD step
    v = np.asarray(v, dtype=np.longdouble)
    theta = np.sqrt(v @ v)
    K = np.array(
        [[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]], dtype=np.longdouble
    )
    return (
        np.eye(3, dtype=np.longdouble)
        + (np.sin(theta) / theta) * K
        + ((1 - np.cos(theta)) / theta**2) * (K @ K)
    )


def discrete_lagrangian(ell, gk, gk1):
    """Unreduced L(g_k, g_{k+1}) = ell(g_k g_{k+1}^-1) (right-invariant quotient)."""
    return ell.eval(gk @ np.swapaxes(gk1, -1, -2))


def diagram_sides(ell, gk, gk1, fd_step=FD_STEP):
    """Both routes around the Legendre/quotient square for one pair.

    Returns ``(legendre_of_quotient, quotient_of_legendre)``: the closed-form
    right-trivialized differential of ``ell`` at ``f = g_k g_{k+1}^-1``, and
    the right translation to the identity of the slot-1 derivative of the
    unreduced Lagrangian, taken by central differences in extended precision.
    """
    gk = np.asarray(gk, dtype=float)
    gk1 = np.asarray(gk1, dtype=float)
    lhs = ell.right_momentum(gk @ gk1.T)
    gk_ld = gk.astype(np.longdouble)
    gk1_ld = gk1.astype(np.longdouble)
    rhs = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = fd_step
        plus = discrete_lagrangian(ell, _exp_ld(e) @ gk_ld, gk1_ld)
        minus = discrete_lagrangian(ell, _exp_ld(-e) @ gk_ld, gk1_ld)
        rhs[i] = float((plus - minus) / (2 * np.longdouble(fd_step)))
    return lhs, rhs


def diagram_commutes_check(ell, pairs, fd_step=FD_STEP):
    """Max over pairs of |F ell(pi_d(g_k, g_k1)) - pi(F L(g_k, g_k1))|.

    Pairs should be near the diagonal (rotation angle of g_k g_k1^-1 below 1).
    """
    worst = 0.0
    for gk, gk1 in pairs:
        lhs, rhs = diagram_sides(ell, gk, gk1, fd_step)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def random_near_diagonal_pairs(rng, n, max_angle=0.9):
    pairs = []
    for _ in range(n):
        gk1 = so3.random_rotation(rng)
        pairs.append((so3.random_rotation(rng, max_angle) @ gk1, gk1))
    return pairs


# --- convergence ------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceTable:
    h: tuple
    errors: tuple
    orders: tuple  # orders[i] compares h[i] with h[i+1]
    oracle_steps: int
    oracle_rel_change: float = float("nan")
    rows: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        rows = [(h, e, None if i == 0 else self.orders[i - 1]) for i, (h, e) in enumerate(zip(self.h, self.errors))]
        object.__setattr__(self, "rows", rows)


def _steps_for(T, h):
    n = round(T / h)
    if n < 1 or abs(n * h - T) > 1e-9 * max(1.0, abs(T)):
        raise ValueError(f"T/h must be a positive integer (T={T}, h={h})")
    return n


def discrete_finals(J, Pi0_continuous, T, h_list, cfg=None):
    """Pi_N / h at time T for each step size, runs seeded with Pi_0 = h * Pi0_continuous."""
    ell = MoserVeselovLagrangian(J)
    Pi0_continuous = np.asarray(Pi0_continuous, dtype=float)
    finals = []
    for h in h_list:
        traj = run_dep(ell, h * Pi0_continuous, _steps_for(T, h), cfg, h=h)
        finals.append(traj.pi_seq[-1] / h)
    return np.array(finals)


def convergence_study(J, Pi0_continuous, T, h_list, cfg=None, oracle_steps=None, oracle_check=True):
    """Errors of Pi_N / h against the RK4 oracle at time T, and observed orders.

    With ``oracle_check`` the oracle is rerun at twice the steps and the
    largest relative change of any measured error is recorded.
    """
    h_list = [float(h) for h in h_list]
    if any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise ValueError("h_list must be strictly decreasing")
    for h in h_list:
        _steps_for(T, h)
    if oracle_steps is None:
        oracle_steps = max(1000, int(math.ceil(4000 * abs(T))))
    finals = discrete_finals(J, Pi0_continuous, T, h_list, cfg)
    ref = rk4_run(J, Pi0_continuous, T=T, n=oracle_steps).Pi
    errors = np.linalg.norm(finals - ref, axis=1)
    orders = tuple(
        math.log(e0 / e1) / math.log(h0 / h1) if e0 > 0 and e1 > 0 else float("nan")
        for h0, h1, e0, e1 in zip(h_list, h_list[1:], errors, errors[1:])
    )
    change = float("nan")
    if oracle_check:
        ref2 = rk4_run(J, Pi0_continuous, T=T, n=2 * oracle_steps).Pi
        errors2 = np.linalg.norm(finals - ref2, axis=1)
        change = max(
            abs(e2 - e) / e if e > 0 else abs(e2 - e) for e, e2 in zip(errors, errors2)
        )
    return ConvergenceTable(
        tuple(h_list), tuple(float(e) for e in errors), orders, oracle_steps, float(change)
    )


# --- property suite ---------------------------------------------------------


@dataclass(frozen=True)
class PropertyResult:
    name: str
    value: float
    tol: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (tol {self.tol:.0e})"


def _result(name, value, tol):
    return PropertyResult(name, float(value), tol, bool(value <= tol))


def verification_suite(seed=0, n=1000, inertia=None):
    """Interface identities and the diagram check on ``n`` random samples each."""
    from .rigid_body import InertiaSpec

    rng = np.random.default_rng(seed)
    J = inertia or InertiaSpec((1.0, 2.0, 3.0))
    ell = MoserVeselovLagrangian(J)
    out = []

    gs = [so3.random_rotation(rng) for _ in range(n)]
    hs = [so3.random_rotation(rng) for _ in range(n)]
    mus = rng.normal(size=(n, 3))
    xis = rng.normal(size=(n, 3))

    out.append(_result(
        "coadjoint pairing identity",
        max(abs(so3.pairing(so3.coAd(g, m), x) - so3.pairing(m, so3.Ad(g, x)))
            for g, m, x in zip(gs, mus, xis)),
        1e-12,
    ))
    out.append(_result(
        "Ad homomorphism",
        max(np.linalg.norm(so3.Ad(g @ h, x) - so3.Ad(g, so3.Ad(h, x))) for g, h, x in zip(gs, hs, xis)),
        1e-12,
    ))
    out.append(_result(
        "Ad*_e is the identity",
        max(np.max(np.abs(so3.coAd(so3.IDENTITY, m) - m)) for m in mus),
        0.0,
    ))
    out.append(_result(
        "coAd preserves the norm",
        max(abs(np.linalg.norm(so3.coAd(g, m)) - np.linalg.norm(m)) for g, m in zip(gs, mus)),
        1e-13,
    ))

    axes = rng.normal(size=(n, 3))
    axes /= np.linalg.norm(axes, axis=1)[:, None]
    vs = axes * rng.uniform(0.0, math.pi - 0.01, size=n)[:, None]
    out.append(_result(
        "log(exp(v)) = v",
        max(np.linalg.norm(so3.log(so3.exp(v)) - v) for v in vs),
        1e-10,
    ))
    out.append(_result(
        "exp(log(R)) = R",
        max(
            np.max(np.abs(so3.exp(so3.log(g)) - g))
            for g in (so3.random_rotation(rng, math.pi - 0.01) for _ in range(n))
        ),
        1e-10,
    ))
    big = axes * rng.uniform(0.0, 10.0, size=n)[:, None]
    out.append(_result(
        "exp orthogonality",
        max(max(np.max(np.abs(R.T @ R - np.eye(3))), abs(np.linalg.det(R) - 1.0))
            for R in map(so3.exp, big)),
        1e-13,
    ))

    def rel(closed, fd):
        return np.linalg.norm(closed - fd) / max(np.linalg.norm(closed), 1.0)

    out.append(_result(
        "left differential vs finite differences",
        max(rel(ell.left_momentum(g), fd_left_momentum(ell, g)) for g in gs),
        1e-7,
    ))
    out.append(_result(
        "right differential vs finite differences",
        max(rel(ell.right_momentum(g), fd_right_momentum(ell, g)) for g in gs),
        1e-7,
    ))
    out.append(_result(
        "closed-form Legendre transform vs finite differences",
        max(np.linalg.norm(mv_legendre(J, g) - fd_left_momentum(ell, g.T)) for g in gs),
        1e-8,
    ))

    pairs = random_near_diagonal_pairs(rng, 100)
    e1 = diagram_commutes_check(ell, pairs, FD_STEP)
    e2 = diagram_commutes_check(ell, pairs, FD_STEP / 2)
    out.append(_result("Legendre/quotient diagram commutes", e1, 1e-6))
    out.append(_result("diagram error ratio on step halving, |ratio - 4|", abs(e1 / e2 - 4.0), 1.0))
    return out

