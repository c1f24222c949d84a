"""
Error hierarchy
===============

Every failure a caller can act on maps to one class here, and every class
carries the process exit code the CLI uses for it.
"""


class PairnetError(Exception):
    """Base class for all pairnet failures."""

    exit_code = 1


class UsageError(PairnetError):
    """Bad input: out-of-range ids, malformed instances, wrong metric kind."""

    exit_code = 2


class InfeasibleError(PairnetError):
    """The requested structure cannot exist (odd sides, no perfect matching)."""

    exit_code = 3


class CapacityError(PairnetError):
    """Input exceeds an exact-solver or oracle size limit."""

    exit_code = 4


class InvariantError(PairnetError):
    """An internal post-condition failed. Indicates a bug, never bad input."""

    exit_code = 1
