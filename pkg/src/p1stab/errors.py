"""Exception hierarchy shared by all subpackages.

Each error carries a ``category`` used by the CLI to choose an exit code:
``validation`` -> 2, ``guard`` -> 3, ``internal`` -> 4.
"""


class P1StabError(Exception):
    category = "internal"


class ValidationError(P1StabError):
    category = "validation"


class TwistTooSmall(ValidationError):
    """Twist k below the regularity of the bundle."""


class EmptySubspace(ValidationError):
    """A subspace of sections was expected to be nonzero."""


class WindowTooShort(ValidationError):
    """Not enough tail samples for an asymptotic fit."""


class ConfigError(ValidationError):
    """Malformed experiment configuration; message names the field."""


class GuardError(P1StabError):
    category = "guard"


class DivergedMetric(GuardError):
    """Metric condition number exceeded the float-safe range; shrink the t window."""


class StepTooCoarse(GuardError):
    """Finite-difference Richardson check failed at the requested step."""


class SingularNode(GuardError):
    """Quadrature node lies on the singular locus of a filtration."""


class SingularEvaluation(P1StabError):
    """Evaluation matrix lost rank at a node; inputs violate global generation."""


class NonStabilized(P1StabError):
    """Section-count increments failed to stabilize; indicates an implementation bug."""
