"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Input outside the supported domain (order/argument box, parameter ranges)."""


class AccuracyLossError(ArithmeticError):
    """A result could not be produced within the advertised accuracy."""


class ZeroDenominatorError(ArithmeticError):
    """A denominator underflowed to the point of being meaningless."""


class AtPoleError(ArithmeticError):
    """S-matrix requested at (or numerically on top of) a Regge pole."""


class NotAPoleError(ValueError):
    """A residue was requested at a point that does not satisfy the pole condition."""


class DegeneratePoleError(ArithmeticError):
    """The pole condition derivative vanishes; simple-pole formulas do not apply."""


class SolverError(RuntimeError):
    """Base class for root-finding and continuation failures."""


class NoConvergenceError(SolverError):
    """Newton iteration exhausted its iteration budget."""


class JumpGuardError(SolverError):
    """A solver landed farther from its seed than the continuation guard allows."""


class ContinuationLostError(SolverError):
    """Trajectory continuation failed even after maximal step refinement."""


class WrongSheetError(SolverError):
    """A Siegert solve converged on a sheet inconsistent with the requested state."""


class ClassificationError(RuntimeError):
    """The lambda = 1/2 Siegert energy fits neither trajectory class."""


class BoundaryZeroError(RuntimeError):
    """The pole condition (nearly) vanishes on a scan-region boundary."""


class NonIntegralWindingError(RuntimeError):
    """A boundary phase integral refused to settle near an integer."""


class DivergentPoleError(ValueError):
    """A resonance sum was requested for a pole with Im lambda <= 0."""


class QuadratureError(RuntimeError):
    """A quadrature failed to reach its requested tolerance."""


class EnclosureError(RuntimeError):
    """A contour integral is unstable under radius refinement (extra pole enclosed?)."""


class DetourOverlapError(RuntimeError):
    """Deformed-contour detours could not be arranged to clear all poles."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


class NearIntegerOrderWarning(UserWarning):
    """Order within the near-integer band: reflection is replaced by offset averaging."""


class TailTruncationWarning(UserWarning):
    """A partial-wave or integral tail criterion was not met inside the domain box."""
