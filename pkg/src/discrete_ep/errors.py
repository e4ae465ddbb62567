"""Exception and warning types shared across the package."""


class AngleNearPi(ValueError):
    """The SO(3) logarithm was asked for a rotation too close to angle pi."""


class SolverError(RuntimeError):
    """Base class for failures of the implicit step solve.

    ``best_residual`` is the smallest residual norm seen during the iteration,
    ``step`` is the trajectory step index when raised from inside a run.
    """

    def __init__(self, message, best_residual=float("nan"), step=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.step = step

    def __str__(self):
        msg = super().__str__()
        if self.step is not None:
            msg = f"step {self.step}: {msg}"
        return f"{msg} (best residual {self.best_residual:.3e})"


class NoConvergence(SolverError):
    pass


class SingularJacobian(SolverError):
    pass


class ConfigError(ValueError):
    """Invalid run configuration; message names the offending key or line."""


class RegularityWarning(UserWarning):
    """Per-step rotation left the near-diagonal region where the scheme is regular."""
