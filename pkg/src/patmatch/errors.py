class PatmatchError(Exception):
    """Base class for all library errors."""


class StructuralError(PatmatchError, ValueError):
    """Ring tag/arity mismatch or otherwise malformed instance."""


class BudgetExceeded(PatmatchError, RuntimeError):
    """A brute-force scan would exceed the configured tuple budget."""


class PatternError(PatmatchError, ValueError):
    """Pattern violates the preconditions of its matching problem."""


class FormatError(PatmatchError, ValueError):
    """Malformed input file or number literal."""
