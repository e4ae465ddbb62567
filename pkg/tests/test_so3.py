import math

import numpy as np
import pytest
from hypothesis import given, settings

from discrete_ep import so3
from discrete_ep.errors import AngleNearPi

from strategies import rotations, small_vectors, vectors

E1, E2, E3 = np.eye(3)


def test_hat_examples():
    assert np.array_equal(so3.hat(np.zeros(3)), np.zeros((3, 3)))
    assert np.array_equal(so3.hat(E3), [[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    assert np.array_equal(so3.vee(so3.hat([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])


def test_vee_rejects_non_skew():
    with pytest.raises(ValueError):
        so3.vee(np.eye(3))


@given(vectors, vectors)
def test_hat_is_cross_product(v, w):
    assert np.allclose(so3.hat(v) @ w, np.cross(v, w), atol=1e-12)


def test_exp_examples():
    assert np.array_equal(so3.exp(np.zeros(3)), np.eye(3))
    quarter = so3.exp(0.5 * math.pi * E3)
    assert np.allclose(quarter, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], atol=1e-15)


def test_exp_taylor_branch():
    v = 1e-9 * np.array([0.6, -0.8, 0.0])
    # second-order term is ~5e-19, below the tolerance
    assert np.max(np.abs(so3.exp(v) - (np.eye(3) + so3.hat(v)))) <= 1e-17


def test_exp_branches_agree_at_crossover():
    axis = np.array([1.0, 2.0, -2.0]) / 3.0
    below = so3.exp((so3.SMALL_ANGLE * (1 - 1e-12)) * axis)
    above = so3.exp((so3.SMALL_ANGLE * (1 + 1e-12)) * axis)
    assert np.max(np.abs(below - above)) <= 1e-14


def test_log_examples():
    assert np.array_equal(so3.log(np.eye(3)), np.zeros(3))
    assert np.allclose(so3.log(so3.exp(0.3 * E1)), [0.3, 0, 0], atol=1e-12, rtol=0)


def test_log_small_angle_matches_antisymmetric_part():
    v = 1e-6 * np.array([0.3, -0.2, 0.9])
    R = so3.exp(v)
    antisym = so3.vee(0.5 * (R - R.T))
    assert np.max(np.abs(so3.log(R) - antisym)) <= 1e-14


def test_log_near_pi_signals():
    with pytest.raises(AngleNearPi):
        so3.log(so3.exp(math.pi * E2))
    with pytest.raises(AngleNearPi):
        so3.log(so3.exp((math.pi - 1e-4) * E1))
    so3.log(so3.exp((math.pi - 0.01) * E1))


@given(vectors)
def test_exp_is_rotation(v):
    R = so3.exp(v)
    assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-13
    assert abs(np.linalg.det(R) - 1.0) <= 1e-13


@given(small_vectors(math.pi - 0.01))
def test_log_exp_roundtrip(v):
    assert np.max(np.abs(so3.log(so3.exp(v)) - v)) <= 1e-10


@given(rotations())
def test_exp_log_roundtrip(R):
    if R.trace() <= -1 + 1e-3:
        return
    assert np.max(np.abs(so3.exp(so3.log(R)) - R)) <= 1e-10


def test_Ad_examples():
    theta = 0.7
    xi = np.array([0.4, -1.0, 2.0])
    assert np.array_equal(so3.Ad(np.eye(3), xi), xi)
    # oracle: conjugate the matrix form directly
    g = so3.exp(theta * E3)
    direct = so3.vee(g @ so3.hat(E1) @ g.T)
    assert np.allclose(direct, [math.cos(theta), math.sin(theta), 0.0], atol=1e-15)
    assert np.allclose(so3.Ad(g, E1), direct, atol=1e-15)


@given(rotations(), rotations(), vectors)
def test_Ad_homomorphism(g1, g2, xi):
    assert np.max(np.abs(so3.Ad(g1 @ g2, xi) - so3.Ad(g1, so3.Ad(g2, xi)))) <= 1e-12 * max(1, np.linalg.norm(xi))


@given(rotations(), vectors, vectors)
def test_coadjoint_pairing_identity(g, mu, xi):
    lhs = so3.pairing(so3.coAd(g, mu), xi)
    rhs = so3.pairing(mu, so3.Ad(g, xi))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(mu) * np.linalg.norm(xi))


@given(rotations(), vectors)
def test_coAd_preserves_norm(g, mu):
    assert abs(np.linalg.norm(so3.coAd(g, mu)) - np.linalg.norm(mu)) <= 1e-13 * max(1, np.linalg.norm(mu))


def test_coAd_identity_exact():
    mu = np.array([1.5, -2.25, 1e-300])
    assert np.array_equal(so3.coAd(np.eye(3), mu), mu)


def test_pairing_is_half_trace():
    rng = np.random.default_rng(3)
    for _ in range(100):
        mu, xi = rng.normal(size=(2, 3))
        half_trace = 0.5 * np.trace(so3.hat(mu).T @ so3.hat(xi))
        assert abs(so3.pairing(mu, xi) - half_trace) <= 1e-14
    assert so3.pairing(E1, E1) == 1.0
    assert so3.pairing(E1, E2) == 0.0


@settings(max_examples=50)
@given(rotations())
def test_rotation_angle_matches_log(R):
    if R.trace() <= -1 + 1e-3:
        return
    assert abs(so3.rotation_angle(R) - np.linalg.norm(so3.log(R))) <= 1e-12
