"""Continuous-time reference for the free rigid body (Euler equations + attitude).

Body momentum obeys ``dPi/dt = Pi x Omega`` with ``Omega = Pi / J``
componentwise, and the attitude ``dg/dt = g hat(Omega)``. Integrated with
classical fixed-step RK4; used only to measure convergence of the discrete
scheme.
"""

from dataclasses import dataclass

import numpy as np

from . import so3

REORTHO_EVERY = 64


@dataclass(frozen=True)
class ContinuousState:
    Pi: np.ndarray
    g: np.ndarray
    t: float


def euler_rhs(J, Pi):
    Pi = np.asarray(Pi, dtype=float)
    return np.cross(Pi, Pi / J.moments)


def _rhs(J, Pi, g):
    omega = Pi / J.moments
    return np.cross(Pi, omega), g @ so3.hat(omega)


def _project(g):
    u, _, vt = np.linalg.svd(g)
    return u @ vt


def rk4_run(J, Pi0, g0=so3.IDENTITY, T=1.0, n=1000):
    """Integrate from t=0 to T in ``n`` equal RK4 steps."""
    if int(n) != n or n < 1:
        raise ValueError("n must be an integer >= 1")
    dt = T / n
    Pi = np.array(Pi0, dtype=float)
    g = np.array(g0, dtype=float)
    for k in range(n):
        k1p, k1g = _rhs(J, Pi, g)
        k2p, k2g = _rhs(J, Pi + 0.5 * dt * k1p, g + 0.5 * dt * k1g)
        k3p, k3g = _rhs(J, Pi + 0.5 * dt * k2p, g + 0.5 * dt * k2g)
        k4p, k4g = _rhs(J, Pi + dt * k3p, g + dt * k3g)
        Pi = Pi + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        g = g + dt / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        if (k + 1) % REORTHO_EVERY == 0:
            g = _project(g)
    return ContinuousState(Pi, _project(g), T)


def continuous_energy(J, Pi):
    Pi = np.asarray(Pi, dtype=float)
    return 0.5 * float(np.sum(Pi * Pi / J.moments))
