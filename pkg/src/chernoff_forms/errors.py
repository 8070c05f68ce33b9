"""Exception hierarchy.

Two families matter to callers: :class:`HypothesisViolation` covers inputs
that break a mathematical precondition of the bound (the CLI maps these to
exit code 2), while :class:`InvalidModel` and friends are plain data errors.
"""

from __future__ import annotations


class ChernoffError(Exception):
    """Base class for every error raised by this package."""


class InvalidModel(ChernoffError, ValueError):
    """A probability model failed validation at construction."""


class SupportMismatch(ChernoffError, ValueError):
    """Two discrete models do not share the same support."""


class InternalInvariantViolation(ChernoffError, RuntimeError):
    """Something that cannot happen for a genuine tilt happened anyway."""


class SolverError(ChernoffError, RuntimeError):
    """The tilt solver ran out of iterations."""


class HypothesisViolation(ChernoffError):
    """A mathematical precondition of the requested quantity does not hold."""


class EvaluationError(HypothesisViolation):
    """v(X) is not finite on a region carrying positive mass."""


class InvalidValueFunction(HypothesisViolation):
    """v is not non-decreasing and concave on the model's support."""


class DivergentMGF(HypothesisViolation):
    """E exp(theta v(X)) is infinite at the requested theta."""


class BelowMeanError(HypothesisViolation):
    """The threshold a lies below E X, so the bound hypothesis a >= EX fails."""


class InfeasibleTarget(HypothesisViolation):
    """v(a) exceeds every value v takes on the support; the tail is zero."""


class DegenerateValueFunction(HypothesisViolation):
    """v(X) is almost surely constant, so no tilt can move its mean."""


class NotAnAtom(HypothesisViolation):
    """The discrete ratio form needs a to be a support point."""


class RatioUndefined(HypothesisViolation):
    """A density or mass in the ratio form is zero at a."""


class GeneralizedProjectionOnly(HypothesisViolation):
    """The minimizing theta is at infinity; only the limiting value exists.

    The limit of the bound is available as :attr:`limit`.
    """

    def __init__(self, message: str, limit: float):
        super().__init__(message)
        self.limit = limit


class ImpossibleSample(HypothesisViolation):
    """The sample hits an atom that has zero probability under the model."""


class MLBoundary(HypothesisViolation):
    """The sample mean of v sits at an extreme of v; the ML estimate diverges."""
