"""Exception hierarchy. Every error raised on purpose derives from ``ProbCauseError``."""


class ProbCauseError(Exception):
    """Base class for all library errors."""


class ZeroTotal(ProbCauseError, ValueError):
    """All observational counts are zero."""


class EmptyArm(ProbCauseError, ValueError):
    """An experimental treatment group has no subjects."""


class UndefinedConditional(ProbCauseError, ZeroDivisionError):
    """A conditioning event has probability zero."""


class InvalidDistribution(ProbCauseError, ValueError):
    """Probabilities outside [0, 1] or not summing to one."""


class Infeasible(ProbCauseError):
    """Observational and experimental evidence cannot come from one population."""


# the CLI name for the same condition
IncompatibleEvidence = Infeasible


class MonotonicityIncompatible(Infeasible):
    """Evidence violates the necessary condition for a monotone response."""


class AssumptionContradiction(ProbCauseError):
    """A declared assumption is refuted by the evidence."""


class MissingEvidence(ProbCauseError, ValueError):
    """Neither a joint distribution nor causal effects were supplied."""


class InconsistentExogeneityDeclaration(AssumptionContradiction):
    """Exogeneity declared but the effects differ from the observational conditionals."""


class InfeasibleSystem(ProbCauseError):
    """The constraint polytope is empty."""


class FloorUnsatisfiable(ProbCauseError, ValueError):
    """The positivity floor cannot be met under the sampling constraints."""


class ParseError(ProbCauseError):
    """Malformed study file."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(ParseError):
    """Well-formed study file whose values break an invariant."""
