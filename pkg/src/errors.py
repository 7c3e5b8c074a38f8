"""Exception types raised across the moduli toolkit."""
from __future__ import annotations


class PatternError(ValueError):
    """Malformed gluing pattern or an invalid move on one."""


class WordError(ValueError):
    """Unknown letter or inconsistent word data."""


class ChartError(ValueError):
    """No usable free-generator chart for a pattern."""


class GroupConstraintError(ValueError):
    """Matrix outside its group, or values from mismatched group models."""


class SolveError(RuntimeError):
    """A linear solve whose residual or conditioning certifies failure."""
