"""Free rigid body on SO(3): inertia data, Moser-Veselov reduced Lagrangian, Casimirs.

The inertia is given by the diagonal matrix ``Lambda``; the inertia operator
``J(xi) = Lambda xi + xi Lambda`` acts on vectors componentwise with the
principal moments ``J1 = L2 + L3``, ``J2 = L1 + L3``, ``J3 = L1 + L2``.

Timestep scaling: ``ell(f) = Tr(f Lambda)`` carries no ``h``, so the discrete
body momentum is ``h`` times the continuous one. :func:`discrete_momentum`
does the conversion from a continuous angular velocity.
"""

from dataclasses import dataclass, field

import numpy as np

from . import so3
from .lie import ReducedLagrangian


@dataclass(frozen=True)
class InertiaSpec:
    lam: tuple
    classical: tuple = field(init=False)

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        if len(lam) != 3 or not all(np.isfinite(lam)):
            raise ValueError(f"lambda must be three finite numbers, got {self.lam!r}")
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if not lam[i] + lam[j] > 0.0:
                raise ValueError(
                    f"inertia condition Lambda_{i + 1} + Lambda_{j + 1} > 0 violated "
                    f"for pair ({i + 1},{j + 1}): {lam[i]} + {lam[j]} = {lam[i] + lam[j]}"
                )
        object.__setattr__(self, "lam", lam)
        object.__setattr__(
            self, "classical", (lam[1] + lam[2], lam[0] + lam[2], lam[0] + lam[1])
        )

    @classmethod
    def from_classical(cls, moments):
        J = tuple(float(x) for x in moments)
        if len(J) != 3 or not all(x > 0.0 for x in J):
            raise ValueError(f"principal moments must be three positive numbers, got {moments!r}")
        return cls(tuple(0.5 * (J[(i + 1) % 3] + J[(i + 2) % 3] - J[i]) for i in range(3)))

    @property
    def Lambda(self):
        return np.diag(self.lam)

    @property
    def moments(self):
        return np.array(self.classical)


def inertia_apply(J, xi):
    """Body momentum J(xi), i.e. (J1 xi1, J2 xi2, J3 xi3)."""
    return J.moments * np.asarray(xi, dtype=float)


def inertia_apply_matrix(J, xi):
    """Matrix-form cross-check: vee(Lambda hat(xi) + hat(xi) Lambda)."""
    L, X = J.Lambda, so3.hat(xi)
    return so3.vee(L @ X + X @ L)


def energy(J, xi):
    xi = np.asarray(xi, dtype=float)
    return 0.5 * float(np.dot(J.moments * xi, xi))


def energy_trace(J, xi):
    """Kinetic energy as 1/4 Tr(hat(xi)^T (Lambda hat(xi) + hat(xi) Lambda))."""
    L, X = J.Lambda, so3.hat(xi)
    return 0.25 * float(np.trace(X.T @ (L @ X + X @ L)))


def discrete_momentum(J, omega, h):
    """Initial discrete body momentum h * J(omega) for a continuous angular velocity."""
    return h * inertia_apply(J, omega)


class MoserVeselovLagrangian(ReducedLagrangian):
    """ell(f) = Tr(f Lambda) with closed-form momenta and Newton Jacobian."""

    group = so3.SO3

    def __init__(self, inertia):
        self.inertia = inertia
        self._L = inertia.Lambda
        self._lam = np.array(inertia.lam)

    def __repr__(self):
        return f"MoserVeselovLagrangian({self.inertia.lam})"

    def eval(self, f):
        # keeps the input precision (longdouble in the diagram check)
        f = np.asarray(f)
        lam = self._lam.astype(f.dtype)
        return f[0, 0] * lam[0] + f[1, 1] * lam[1] + f[2, 2] * lam[2]

    def left_momentum(self, f):
        # vee(f^T L - L f)
        A = f.T * self._lam  # f^T @ diag(lam)
        return so3._vee(A - A.T)

    def right_momentum(self, f):
        # vee(L f^T - f L)
        B = f * self._lam  # f @ diag(lam)
        return so3._vee(B.T - B)

    def left_jacobian(self, f):
        A = f.T * self._lam
        return A - (A[0, 0] + A[1, 1] + A[2, 2]) * so3.IDENTITY


def mv_legendre(J, f):
    """Closed-form Legendre transform vee(f Lambda - Lambda f^T).

    In this package's chart conventions this equals
    ``left_pullback_dl(ell, f.T)`` and ``-right_pullback_dl(ell, f)``.
    """
    B = np.asarray(f) @ J.Lambda
    return so3.vee(B - B.T)


def casimir_group(J, f):
    """Tr(f Lambda f Lambda); equals Tr(Lambda^2) - |mv_legendre(f)|^2."""
    B = np.asarray(f) @ J.Lambda
    return float(np.trace(B @ B))


def casimir_dual(mu):
    mu = np.asarray(mu, dtype=float)
    return float(mu @ mu)


def casimir_algebra(J, xi):
    return casimir_dual(inertia_apply(J, xi))
