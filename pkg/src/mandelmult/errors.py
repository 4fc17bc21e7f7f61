"""Exception hierarchy shared by all subsystems."""

from __future__ import annotations


class MandelmultError(Exception):
    """Base class for all package errors."""


class DomainError(MandelmultError):
    """Input outside the mathematical domain of the operation."""


class ConvergenceError(MandelmultError):
    """An iterative solve did not converge within its step budget."""


class DerivativeOverflow(MandelmultError):
    """Orbit derivative recursion exceeded the overflow guard."""


class IncompleteEnumeration(MandelmultError):
    """Root enumeration failed its counting certificate after max restarts."""


class DegenerateMultiplier(MandelmultError):
    """Multiplier too close to 0 or 1 for the requested quantity."""


class PoleProximity(MandelmultError):
    """Evaluation point too close to a pole of the orbit function."""


class BranchPointProximity(MandelmultError):
    """Evaluation point too close to the critical value branch point."""


class ContourTooClose(MandelmultError):
    """Integration contour passes too close to the periodic orbit."""


class StepTooLarge(MandelmultError):
    """A continued orbit jumped farther than the continuation trust radius."""


class ContinuationError(MandelmultError):
    """Predictor-corrector continuation failed (orbit jump or step floor hit)."""


class DomainViolation(MandelmultError):
    """A continuation waypoint left the admissible multiplier domain."""


class SeedFailure(MandelmultError):
    """Could not seed the bifurcated orbit near the parabolic parameter."""


class LevelUnreachable(MandelmultError):
    """Requested equipotential level could not be sampled, even by pullback."""


class DistortionFailure(MandelmultError):
    """The sampled distortion certificate failed; raise lambda_star."""


class InfeasibleShrink(MandelmultError):
    """The geometric shrink budget cannot satisfy the 4^-n/16 sum bound."""


class LogspaceOverflow(MandelmultError):
    """Sequence term exponents exceed the representable log-space budget."""


class PullbackAmbiguity(MandelmultError):
    """Ray pullback passed too close to the critical point."""


class UnknownRayPair(MandelmultError):
    """No shipped external-angle pair for this component root."""


class ConfigError(MandelmultError):
    """Malformed run configuration."""
