"""Exception types shared across the engine.

Two failure families map onto the CLI exit codes: bad or incomplete input
(:class:`ValidationError`, exit 2) and numerical degeneracy inside the
computation chain (:class:`DegeneracyError`, exit 3).  Degeneracies carry the
number of the formula, from the engine's formula catalog (see README), whose
preconditions broke down, so error messages can name the failing equation.
"""

from __future__ import annotations


class DayAheadError(Exception):
    """Base class for all engine errors."""


class ValidationError(DayAheadError):
    """Input data or configuration violates a documented precondition."""


class DegeneracyError(DayAheadError):
    """A numerical quantity left the domain where the formula chain is defined.

    `equation` is a string like "(8)" identifying the formula in the engine's
    catalog; it is included in the rendered message.
    """

    def __init__(self, message: str, equation: str):
        self.equation = equation
        super().__init__(f"{message} (Eq. {equation})")
