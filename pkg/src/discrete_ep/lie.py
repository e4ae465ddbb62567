"""Group-generic contracts for discrete Euler-Poincare stepping.

A reduced discrete Lagrangian ``ell`` lives on the group G. Its differential
is trivialized to the dual algebra in two ways:

* left:  ``<left_momentum(f), xi>  = d/de ell(f exp(e xi))  |e=0``
* right: ``<right_momentum(f), xi> = d/de ell(exp(e xi) f)  |e=0``

Because ``f exp(e xi) = exp(e Ad_f xi) f`` the two are related by
``left_momentum(f) = coAd(f, right_momentum(f))``. The stepper in
:mod:`discrete_ep.integrators` relies on exactly this identity.
"""

from typing import Protocol

import numpy as np

from . import so3

FD_STEP = 1e-5


class GroupOps(Protocol):
    """Operations a group backend must supply (see :class:`discrete_ep.so3.SO3`)."""

    dim: int
    identity: np.ndarray

    def compose(self, g, h): ...
    def inverse(self, g): ...
    def exp(self, xi): ...
    def log(self, g): ...
    def Ad(self, g, xi): ...
    def coAd(self, g, mu): ...
    def pairing(self, mu, xi) -> float: ...


class ReducedLagrangian:
    """Base class for reduced discrete Lagrangians ``ell: G -> R``.

    Subclasses implement :meth:`eval`. The momentum maps default to central
    finite differences in the exponential chart; override them with closed
    forms where available. :meth:`left_jacobian` is optional and is used by
    the Newton solve when present.
    """

    group: GroupOps = so3.SO3

    def eval(self, f):
        raise NotImplementedError

    def __call__(self, f):
        return self.eval(f)

    def left_momentum(self, f):
        return fd_left_momentum(self, f)

    def right_momentum(self, f):
        return fd_right_momentum(self, f)

    def left_jacobian(self, f):
        """d/dx left_momentum(f exp(x)) at x=0; ``None`` means use finite differences."""
        return None


def _fd_gradient(fun, dim, step):
    out = np.empty(dim)
    e = np.zeros(dim)
    for i in range(dim):
        e[i] = step
        out[i] = (fun(e) - fun(-e)) / (2.0 * step)
        e[i] = 0.0
    return out


def fd_left_momentum(ell, f, step=FD_STEP):
    G = ell.group
    return _fd_gradient(lambda x: ell.eval(G.compose(f, G.exp(x))), G.dim, step)


def fd_right_momentum(ell, f, step=FD_STEP):
    G = ell.group
    return _fd_gradient(lambda x: ell.eval(G.compose(G.exp(x), f)), G.dim, step)


def fd_left_jacobian(ell, f, step=FD_STEP):
    """Columns j: central difference of left_momentum along f exp(step e_j)."""
    G = ell.group
    J = np.empty((G.dim, G.dim))
    e = np.zeros(G.dim)
    for j in range(G.dim):
        e[j] = step
        plus = ell.left_momentum(G.compose(f, G.exp(e)))
        minus = ell.left_momentum(G.compose(f, G.exp(-e)))
        J[:, j] = (plus - minus) / (2.0 * step)
        e[j] = 0.0
    return J


def left_pullback_dl(ell, f):
    """L*_f d ell(f): the left-trivialized differential of ``ell`` at ``f``."""
    return ell.left_momentum(f)


def right_pullback_dl(ell, f):
    """R*_f d ell(f): the right-trivialized differential of ``ell`` at ``f``."""
    return ell.right_momentum(f)


def pairing(mu, xi, group=so3.SO3):
    return group.pairing(mu, xi)
