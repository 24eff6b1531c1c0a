"""Exception hierarchy for the rogue-wave toolkit."""


class RogueWaveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RogueWaveError, ValueError):
    """An argument lies outside the domain of a function."""


class ConfigurationError(RogueWaveError, ValueError):
    """A scenario violates the ordering q_star < q_0 < q_p < q_ref."""


class NoSolutionError(RogueWaveError):
    """A root search found no sign change on its admissible bracket."""


class ConvergenceError(RogueWaveError):
    """An iterative procedure stopped before reaching its tolerance."""


class OracleError(ConvergenceError):
    """Adaptive quadrature failed to converge."""


class IntegrationError(ConvergenceError):
    """Mass integral could not be evaluated to the requested accuracy."""


class BracketError(RogueWaveError):
    """The material bracket [x1, x2] does not enclose the shock."""


class LocusError(NoSolutionError):
    """No Rankine-Hugoniot partner state exists for the given depth."""


class TrajectoryError(RogueWaveError):
    """A material trajectory left the domain of its profile branch."""


class SolverFailure(RogueWaveError):
    """The finite-volume solver produced a non-physical state."""


class AdmissibilityError(RogueWaveError):
    """The profile is too short for the shallow-water model to apply."""
