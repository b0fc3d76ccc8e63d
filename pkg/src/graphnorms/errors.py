"""Exceptions shared across the toolkit."""


class UsageError(ValueError):
    """Caller violated an operation contract (bad parameters, malformed input)."""


class SizeGuardError(Exception):
    """An enumeration guard was exceeded; the computation is inconclusive, not wrong."""
