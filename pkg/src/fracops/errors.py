"""Exception hierarchy shared by every fracops module."""


class FracOpsError(ValueError):
    """Base class for invalid inputs to fracops routines."""


class DomainError(FracOpsError):
    """Argument outside the domain where a function is defined."""


class OrderError(FracOpsError):
    """Fractional order not admissible for the requested kernel."""


class IntervalError(FracOpsError):
    """Integration or analysis interval is empty, reversed or out of range."""


class GridMismatchError(FracOpsError):
    """Sampled source and evaluation grid disagree."""


class TruncationError(FracOpsError):
    """Signal too short for the requested Laplace variable."""


class SpanError(FracOpsError):
    """Time span too short for the requested analysis."""


class UnknownPresetError(FracOpsError, KeyError):
    """Preset name not in the registry."""


class ConvergenceError(ArithmeticError):
    """Series did not meet its tolerance within the term cap."""
