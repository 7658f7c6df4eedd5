class ValidationError(ValueError):
    """Input data violates a structural requirement (metric axioms, nesting, ...)."""


class InconsistencyError(RuntimeError):
    """Two routes that must agree by a theorem disagreed: an implementation bug."""
