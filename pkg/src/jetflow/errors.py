"""Exceptions shared across the package.

The four "mathematical" errors (NotDivisibleError, InconsistentJetError,
NotOnSubgroupError, NoSuchFactorError) correspond to the failure modes the
CLI reports with exit code 3.  Misuse of an API (dimension mismatches, mixed
scalar modes, bad preconditions) raises plain ValueError.
"""

from __future__ import annotations


class JetflowError(Exception):
    """Base class for the package's mathematical errors."""

    kind = "error"


class NotDivisibleError(JetflowError):
    """Exact polynomial division has a nonzero remainder."""

    kind = "NotDivisible"


class InconsistentJetError(JetflowError):
    """A jet is not of the form id + P*omega at some order.

    Carries the failing order and the residual (the part of the jet that
    cannot be matched), so callers can tell a non-shift input apart from a
    vector field violating the non-divisibility hypothesis.
    """

    kind = "Inconsistent"

    def __init__(self, message, order=None, residual=None):
        super().__init__(message)
        self.order = order
        self.residual = residual


class NotOnSubgroupError(JetflowError):
    """No time t in the search window puts e^{Lt} within tolerance of A."""

    kind = "NotOnSubgroup"


class NoSuchFactorError(JetflowError):
    """No polynomial factor eta satisfies eta*F = H."""

    kind = "NoSuchFactor"


class ParseError(ValueError):
    """Syntax error in a polynomial expression, with a byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset
