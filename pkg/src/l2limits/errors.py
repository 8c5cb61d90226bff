"""Exception hierarchy shared across the package.

Each class maps to one CLI exit code, so library code should raise the
most specific type that applies.
"""

from __future__ import annotations


class L2LimitsError(Exception):
    """Base class for all package-specific errors."""


class MalformedInputError(L2LimitsError):
    """Input data could not be parsed: bad .scx line, bad JSON, duplicate
    vertices inside one simplex, malformed weight string."""


class ValidationError(L2LimitsError):
    """Structurally valid input that violates a contract: missing root,
    disconnected complex where a rooted class is required, degree above a
    declared bound, size beyond the dense-solver cap."""


class HypothesisViolationError(L2LimitsError):
    """A convergence-theorem hypothesis does not hold for the supplied data
    (typically: no uniform degree bound along a sequence)."""


class CrossCheckError(L2LimitsError):
    """Two independent computation routes disagreed beyond tolerance.

    This is deliberately fatal: a disagreement between the exact rational
    path and the floating-point path means at least one result is wrong.
    """
