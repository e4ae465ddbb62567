"""Discrete Euler-Poincare and Lie-Poisson integration on Lie groups.

The concrete instance is the free rigid body on SO(3) with the
Moser-Veselov reduced Lagrangian ``ell(f) = Tr(f Lambda)``.
"""

from .errors import AngleNearPi, ConfigError, NoConvergence, RegularityWarning, SingularJacobian, SolverError
from .integrators import (
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
)
from .lie import ReducedLagrangian, left_pullback_dl, pairing, right_pullback_dl
from .rigid_body import InertiaSpec, MoserVeselovLagrangian

__version__ = "0.1.0"
