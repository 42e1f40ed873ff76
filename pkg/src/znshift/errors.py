class ZNError(Exception):
    """Base class for errors raised by znshift."""


class InputError(ZNError, ValueError):
    """Malformed arguments: bad symbols, out-of-range levels, length mismatches."""


class BudgetExceeded(ZNError, RuntimeError):
    """A brute-force enumeration would exceed the configured budget."""


class ConsistencyError(ZNError, RuntimeError):
    """An internal cross-check failed; the computed data contradicts itself."""
