"""Exception types shared across the package.

The CLI maps every ``OverlapnetError`` to exit code 2 (bad input /
bad parameters); anything else escapes as a genuine crash.
"""
from __future__ import annotations


class OverlapnetError(Exception):
    """Base class for all errors raised on bad input or parameters."""


class FormatError(OverlapnetError):
    """A file does not parse: malformed line, ragged row, non-square matrix."""


class ValidationError(OverlapnetError):
    """Parsed values violate a constraint (weight range, self-loop, ...)."""


class ParameterError(OverlapnetError):
    """A function argument is out of its documented domain."""


class DimensionError(ParameterError):
    """Two inputs that must index the same node set disagree on N."""


class DegenerateStructureError(OverlapnetError):
    """Division generation found fewer than two distinct bipartitions."""


class UndefinedRatioError(ParameterError):
    """Size ratio requested against an empty intersection."""
