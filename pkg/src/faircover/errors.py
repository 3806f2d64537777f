"""Exception types shared across the package.

Every error raised on purpose derives from FairCoverError so callers can
catch the package's failures with one handler while programming mistakes
(TypeError, ValueError from bad arguments) stay separate.
"""

from __future__ import annotations


class FairCoverError(Exception):
    """Base class for all deliberate failures in this package."""


class SumNotOne(FairCoverError):
    """Group fractions do not sum to exactly one."""


class NegativeFraction(FairCoverError):
    """A group fraction is negative."""


class PCapExceeded(FairCoverError):
    """Per-round tuple size exceeds the number of sets; no fair cover can exist."""


class InsufficientColor(FairCoverError):
    """A group ran out of unpicked sets before its quota was met."""

    def __init__(self, color: int, needed: int, available: int):
        self.color = color
        self.needed = needed
        self.available = available
        super().__init__(
            f"group {color} has {available} unpicked set(s) but {needed} are needed"
        )


class ZeroFractionViolated(FairCoverError):
    """A cover selects sets from a group whose target fraction is zero."""


class DimensionMismatch(FairCoverError):
    """LP components disagree on variable or constraint counts."""


class NumericalFailure(FairCoverError):
    """The LP solver or sampler left its numerical comfort zone."""


class NoProgress(FairCoverError):
    """A round could not add any new coverage despite retries."""


class ResampleCapExceeded(FairCoverError):
    """Rejection sampling failed to meet the coverage threshold within its cap."""


class AllTauInfeasible(FairCoverError):
    """No coverage target in the sweep admits a feasible relaxation."""


class AllTuplesZeroCoverage(FairCoverError):
    """Every candidate tuple has zero marginal coverage; cannot price a pick."""


class InfeasibleRequirement(FairCoverError):
    """An element demands more covers than there are sets containing it."""

    def __init__(self, element: int, required: int, available: int):
        self.element = element
        self.required = required
        self.available = available
        super().__init__(
            f"element {element} requires {required} cover(s) but only "
            f"{available} set(s) contain it"
        )


class AuditFailure(FairCoverError):
    """A pricing or fairness audit identity failed to hold."""


class BudgetExceeded(FairCoverError):
    """An exhaustive routine refused to run past its enumeration budget."""


class ParseError(FairCoverError):
    """Malformed instance file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class InvalidMatrix(ParseError):
    """A membership cell is not 0 or 1."""
