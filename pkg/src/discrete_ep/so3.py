"""SO(3) backend: hat/vee, Rodrigues exponential, logarithm, Ad and Ad*.

Algebra and dual elements are plain length-3 arrays; the hat map sends
``v`` to the skew matrix with ``hat(v) @ w == cross(v, w)``. The pairing
between so(3)* and so(3) is the Euclidean dot product, which equals
``0.5 * trace(hat(mu).T @ hat(xi))``.
"""

import math

import numpy as np

from .errors import AngleNearPi

# Taylor branches below this angle; the truncated series agree with the closed
# forms to ~1e-17 at the crossover.
SMALL_ANGLE = 1e-4
# log refuses rotations with trace <= -1 + NEAR_PI_TRACE.
NEAR_PI_TRACE = 1e-6

IDENTITY = np.eye(3)
IDENTITY.flags.writeable = False


def hat(v):
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(A, tol=1e-10):
    """Inverse of :func:`hat`. Raises ``ValueError`` if ``A`` is not skew to ``tol``."""
    A = np.asarray(A, dtype=float)
    if np.max(np.abs(A + A.T)) > tol:
        raise ValueError("vee: matrix is not skew-symmetric")
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


def _vee(A):
    # unchecked vee of the skew part; used in hot loops
    return 0.5 * np.array([A[2, 1] - A[1, 2], A[0, 2] - A[2, 0], A[1, 0] - A[0, 1]])


def exp(v):
    """Rodrigues exponential so(3) -> SO(3)."""
    v = np.asarray(v, dtype=float)
    theta2 = float(v @ v)
    theta = math.sqrt(theta2)
    if theta < SMALL_ANGLE:
        a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0
        b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / theta2
    K = hat(v)
    return IDENTITY + a * K + b * (K @ K)


def rotation_angle(R):
    """Rotation angle in [0, pi], computed stably near 0."""
    R = np.asarray(R, dtype=float)
    s = 0.5 * math.sqrt(
        (R[2, 1] - R[1, 2]) ** 2 + (R[0, 2] - R[2, 0]) ** 2 + (R[1, 0] - R[0, 1]) ** 2
    )
    c = 0.5 * (R[0, 0] + R[1, 1] + R[2, 2] - 1.0)
    return math.atan2(s, c)


def log(R):
    """Logarithm SO(3) -> so(3) for rotation angles below pi.

    Raises :class:`AngleNearPi` when ``trace(R) <= -1 + 1e-6``, where the axis
    sign is ill-determined.
    """
    R = np.asarray(R, dtype=float)
    tr = R[0, 0] + R[1, 1] + R[2, 2]
    if tr <= -1.0 + NEAR_PI_TRACE:
        raise AngleNearPi(f"rotation angle too close to pi (trace={tr:.17g})")
    w = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    theta = math.atan2(0.5 * math.sqrt(float(w @ w)), 0.5 * (tr - 1.0))
    if theta < SMALL_ANGLE:
        t2 = theta * theta
        k = 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0)
    else:
        k = theta / (2.0 * math.sin(theta))
    return k * w


def Ad(g, xi):
    """Adjoint action: vee(g hat(xi) g^-1), which is ``g @ xi`` in vector form."""
    return np.asarray(g, dtype=float) @ np.asarray(xi, dtype=float)


def coAd(g, mu):
    """Coadjoint action defined by <coAd(g, mu), xi> = <mu, Ad(g, xi)>.

    With the Euclidean pairing this is ``g.T @ mu``. Note it composes as a
    right action: coAd(g h, mu) = coAd(h, coAd(g, mu)).
    """
    return np.asarray(g, dtype=float).T @ np.asarray(mu, dtype=float)


def pairing(mu, xi):
    return float(np.dot(mu, xi))


def is_rotation(R, tol=1e-12):
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    return bool(
        np.max(np.abs(R.T @ R - IDENTITY)) <= tol and abs(np.linalg.det(R) - 1.0) <= tol
    )


def random_rotation(rng, max_angle=None):
    """Uniform (Haar) rotation, or a rotation with angle uniform below ``max_angle``."""
    if max_angle is None:
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        w, x, y, z = q
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
                [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
                [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
            ]
        )
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return exp(rng.uniform(0.0, max_angle) * axis)


class SO3:
    """Group-operations bundle for SO(3), satisfying :class:`discrete_ep.lie.GroupOps`."""

    dim = 3
    identity = IDENTITY

    compose = staticmethod(np.matmul)
    exp = staticmethod(exp)
    log = staticmethod(log)
    Ad = staticmethod(Ad)
    coAd = staticmethod(coAd)
    pairing = staticmethod(pairing)

    @staticmethod
    def inverse(g):
        return np.asarray(g).T
