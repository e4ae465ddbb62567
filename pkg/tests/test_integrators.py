import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discrete_ep import so3
from discrete_ep.errors import NoConvergence, RegularityWarning, SingularJacobian, SolverError
from discrete_ep.integrators import (
    StepperConfig,
    TrajectoryRecord,
    dep_residual_left,
    dep_residual_right,
    dlp_step_left,
    dlp_step_right,
    reconstruct_left,
    reconstruct_right,
    run_dep,
    solve_generating_step,
    spatial_momentum_left,
    spatial_momentum_right,
)
from discrete_ep.lie import ReducedLagrangian
from discrete_ep.rigid_body import InertiaSpec, MoserVeselovLagrangian

from strategies import rotations, small_vectors

E1, E2, E3 = np.eye(3)


class FlatLagrangian(ReducedLagrangian):
    def eval(self, f):
        return 0.0


def test_stepper_config_validation():
    with pytest.raises(ValueError):
        StepperConfig(newton_tol=0.0)
    with pytest.raises(ValueError):
        StepperConfig(max_iters=0)
    with pytest.raises(ValueError):
        StepperConfig(guess_strategy="nearest")


def test_trajectory_record_length_checks():
    with pytest.raises(ValueError):
        TrajectoryRecord(0.1, np.zeros((2, 3, 3)), np.zeros((2, 3)))
    rec = TrajectoryRecord(0.1, np.array([np.eye(3)]), np.zeros((2, 3)))
    assert rec.n_steps == 1
    with pytest.raises(ValueError):
        rec.pi_seq[0, 0] = 1.0


def test_zero_momentum_fixed_point(ell):
    f, Pi_next = solve_generating_step(ell, np.zeros(3))
    assert np.array_equal(f, np.eye(3))
    assert np.array_equal(Pi_next, np.zeros(3))


@pytest.mark.parametrize("theta", [0.2, -0.7, 1.3])
def test_solve_inverts_legendre_about_e3(ell, inertia, theta):
    l1, l2, _ = inertia.lam
    Pi = np.array([0.0, 0.0, (l1 + l2) * math.sin(theta)])
    f, Pi_next = solve_generating_step(ell, Pi, guess=np.eye(3))
    # left momentum of exp(t e3) is -(l1+l2) sin(t) e3, so the root is exp(-theta e3)
    assert np.max(np.abs(f - so3.exp(-theta * E3))) <= 1e-12
    assert np.linalg.norm(ell.left_momentum(f) - Pi) <= 1e-12
    assert np.allclose(Pi_next, Pi, atol=1e-12)


def test_solver_error_types(ell):
    with pytest.raises(NoConvergence) as info:
        solve_generating_step(ell, np.array([0.3, 0.2, 0.1]), StepperConfig(max_iters=1))
    assert info.value.best_residual > 0
    with pytest.raises(SingularJacobian):
        solve_generating_step(FlatLagrangian(), np.array([1.0, 0.0, 0.0]))


def test_run_dep_reports_failing_step(ell):
    with pytest.raises(SolverError) as info:
        run_dep(ell, np.array([50.0, 20.0, 10.0]), 5)
    assert info.value.step == 0
    assert str(info.value).startswith("step 0:")


def test_run_dep_validates_steps(ell):
    with pytest.raises(ValueError):
        run_dep(ell, np.zeros(3), 0)


def test_run_dep_zero_momentum(ell):
    traj = run_dep(ell, np.zeros(3), 20)
    assert np.array_equal(traj.f_seq, np.broadcast_to(np.eye(3), (20, 3, 3)))
    assert np.array_equal(traj.pi_seq, np.zeros((21, 3)))


def test_run_dep_principal_axis(ell):
    Pi0 = np.array([0.0, 0.0, 0.03])
    traj = run_dep(ell, Pi0, 200)
    f0 = traj.f_seq[0]
    assert abs(f0[2, 2] - 1.0) <= 1e-15 and np.allclose(f0[:2, 2], 0, atol=1e-15)
    assert np.max(np.abs(traj.f_seq - f0)) <= 1e-14
    assert np.max(np.abs(traj.pi_seq - Pi0)) <= 1e-15


def test_dep_residual_trivial_and_axisymmetric():
    ell = MoserVeselovLagrangian(InertiaSpec((2.0, 2.0, 0.5)))
    assert np.array_equal(dep_residual_left(ell, np.eye(3), np.eye(3)), np.zeros(3))
    assert np.array_equal(dep_residual_right(ell, np.eye(3), np.eye(3)), np.zeros(3))
    f = so3.exp(0.4 * E3)
    assert np.linalg.norm(dep_residual_left(ell, f, f)) <= 1e-15
    assert np.linalg.norm(dep_residual_right(ell, f, f)) <= 1e-15


def test_generated_pairs_satisfy_dep(ell):
    cfg = StepperConfig()
    traj = run_dep(ell, 0.05 * np.array([1.0, 0.5, 0.25]), 300, cfg)
    res = [np.linalg.norm(dep_residual_left(ell, a, b)) for a, b in zip(traj.f_seq[:-1], traj.f_seq[1:])]
    assert max(res) <= 2 * cfg.newton_tol
    rtraj = run_dep(ell, 0.05 * np.array([1.0, 0.5, 0.25]), 300, cfg, side="right")
    res = [np.linalg.norm(dep_residual_right(ell, a, b)) for a, b in zip(rtraj.f_seq[:-1], rtraj.f_seq[1:])]
    assert max(res) <= 2 * cfg.newton_tol


def test_dlp_step_examples():
    theta = 0.6
    f = so3.exp(theta * E3)
    assert np.array_equal(dlp_step_left(E1, np.eye(3)), E1)
    assert np.array_equal(dlp_step_right(E1, np.eye(3)), E1)
    # coAd(f^-1, e1) = f e1: e1 rotated by +theta about e3
    direct = f @ E1
    assert np.allclose(direct, [math.cos(theta), math.sin(theta), 0.0], atol=1e-15)
    assert np.allclose(dlp_step_left(E1, f), direct, atol=1e-15)
    assert np.allclose(dlp_step_right(E1, f), [math.cos(theta), -math.sin(theta), 0.0], atol=1e-15)


@given(rotations(), small_vectors(10.0))
def test_dlp_step_isometry_and_inverse(f, Pi):
    n = np.linalg.norm(Pi)
    assert abs(np.linalg.norm(dlp_step_left(Pi, f)) - n) <= 1e-13 * max(1, n)
    assert abs(np.linalg.norm(dlp_step_right(Pi, f)) - n) <= 1e-13 * max(1, n)
    back = dlp_step_left(dlp_step_left(Pi, f), f.T)
    assert np.max(np.abs(back - Pi)) <= 1e-13 * max(1, n)


@settings(max_examples=30, deadline=None)
@given(small_vectors(0.2))
def test_converged_step_preserves_norm(Pi):
    ell = MoserVeselovLagrangian(InertiaSpec((1.0, 2.0, 3.0)))
    f, Pi_next = solve_generating_step(ell, Pi)
    assert abs(np.linalg.norm(Pi_next) - np.linalg.norm(Pi)) <= 1e-10
    assert np.linalg.norm(Pi_next - dlp_step_left(Pi, f)) <= 1e-10


def test_time_reversal(ell):
    traj = run_dep(ell, 0.01 * np.array([1.0, 0.5, 0.25]) * 5, 100)
    # walking the same f's backwards with f^-1 undoes the coadjoint updates
    Pi = traj.pi_seq[-1]
    for f in traj.f_seq[::-1]:
        Pi = dlp_step_left(Pi, f.T)
    assert np.linalg.norm(Pi - traj.pi_seq[0]) <= 1e-9
    # and the reverse dynamics, started from -Pi_N, retrace the forward states
    back = run_dep(ell, -traj.pi_seq[-1], 100)
    assert np.linalg.norm(back.pi_seq[-1] + traj.pi_seq[0]) <= 1e-9


def test_reconstruct_examples():
    g0 = so3.exp(np.array([0.1, -0.2, 0.3]))
    ident = np.broadcast_to(np.eye(3), (5, 3, 3))
    assert np.array_equal(reconstruct_left(g0, ident), np.broadcast_to(g0, (6, 3, 3)))
    assert np.array_equal(reconstruct_right(g0, ident), np.broadcast_to(g0, (6, 3, 3)))
    theta, n = 0.05, 40
    fs = np.broadcast_to(so3.exp(theta * E3), (n, 3, 3))
    gl = reconstruct_left(np.eye(3), fs)
    gr = reconstruct_right(np.eye(3), fs)
    assert len(gl) == n + 1
    assert np.max(np.abs(gl[-1] - so3.exp(-n * theta * E3))) <= 1e-13
    assert np.max(np.abs(gr[-1] - so3.exp(-n * theta * E3))) <= 1e-13


def test_spatial_momentum_conserved_left_and_right(ell):
    Pi0 = 0.02 * np.array([1.0, 0.5, 0.25])
    traj = run_dep(ell, Pi0, 2000).with_attitudes(so3.exp(np.array([0.3, 0.1, -0.2])))
    sm = spatial_momentum_left(traj.g_seq, traj.pi_seq)
    assert np.max(np.linalg.norm(sm - sm[0], axis=1)) <= 1e-10
    rtraj = run_dep(ell, Pi0, 2000, side="right").with_attitudes()
    sm = spatial_momentum_right(rtraj.g_seq, rtraj.pi_seq)
    assert np.max(np.linalg.norm(sm - sm[0], axis=1)) <= 1e-10


def test_identity_guess_matches_previous_guess(ell):
    Pi0 = 0.01 * np.array([1.0, 0.5, 0.25])
    a = run_dep(ell, Pi0, 50)
    b = run_dep(ell, Pi0, 50, StepperConfig(guess_strategy="identity"))
    c = run_dep(ell, Pi0, 50, StepperConfig(fd_jacobian=True))
    assert np.max(np.abs(a.pi_seq - b.pi_seq)) <= 1e-14
    assert np.max(np.abs(a.pi_seq - c.pi_seq)) <= 1e-14


def test_small_step_approximates_continuous_rotation(ell, inertia):
    # for small h the step is close to exp(-h Omega)
    h = 1e-3
    omega = np.array([0.3, -0.2, 0.5])
    Pi = h * (np.array(inertia.moments) * omega)
    f, _ = solve_generating_step(ell, Pi)
    assert np.linalg.norm(so3.log(f) + h * omega) <= 1e-6


def test_large_rotation_warns(ell):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        run_dep(ell, np.array([0.0, 0.0, 2.9]), 3)
    msgs = [w for w in caught if issubclass(w.category, RegularityWarning)]
    assert len(msgs) == 1


@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(0.5, 3.0), st.floats(0.5, 3.0), small_vectors(0.1))
def test_dual_casimir_exact_for_random_bodies(l1, l2, l3, Pi0):
    ell = MoserVeselovLagrangian(InertiaSpec((l1, l2, l3)))
    traj = run_dep(ell, Pi0, 50)
    norms = np.sum(traj.pi_seq**2, axis=1)
    assert np.max(np.abs(norms - norms[0])) <= 1e-12 * max(norms[0], 1e-300) + 1e-30
