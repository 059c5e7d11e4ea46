"""Exception types shared across the package."""


class PosetMetricsError(Exception):
    """Base class for all package errors."""


class ValidationError(PosetMetricsError):
    """Malformed input: bad instance data, unknown label, broken construction invariant."""


class BoundExceeded(PosetMetricsError):
    """An enumeration would exceed its configured resource bound."""


class PropertyViolation(PosetMetricsError):
    """An internal replay or cross-check failed; indicates a bug, not bad input."""


class PredicateUnavailable(PosetMetricsError):
    """No closed-form verdict covers this input; brute force is the only route."""


class AllSolutionsTrivial(PosetMetricsError):
    """The lattice admits no nontrivial indicator-equation solutions."""
