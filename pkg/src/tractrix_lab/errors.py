"""Exception hierarchy shared across the package.

Validation failures (bad curve data, violated preconditions) and numerical
failures (residual caps exceeded, scans that never find a transition) are kept
distinct so the command-line layer can map them to separate exit codes.
"""

from __future__ import annotations


class TractrixLabError(Exception):
    """Base class for all package errors."""


class ValidationError(TractrixLabError, ValueError):
    """Invalid input data or a violated precondition."""


class InvalidCurveError(ValidationError):
    """A curve specification that cannot produce a usable track."""


class ResidualError(TractrixLabError, RuntimeError):
    """A numerical check failed beyond its configured cap."""


class ScanError(ResidualError):
    """A parameter scan terminated without finding what it was asked for."""
