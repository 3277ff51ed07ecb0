"""Exception hierarchy shared by the library and the command line front-end."""
from __future__ import annotations


class SoftcoverError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SoftcoverError):
    """Invalid input: malformed model, bad parameter domain, guard exceeded."""

    exit_code = 1


class SolverError(SoftcoverError):
    """An optimizer failed to produce a usable result."""

    exit_code = 2


class BoundViolationError(SoftcoverError):
    """A proved inequality failed numerically beyond tolerance."""

    exit_code = 3
