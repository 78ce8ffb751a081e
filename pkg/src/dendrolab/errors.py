"""Exception hierarchy shared by all dendrolab modules."""

from __future__ import annotations


class DendrolabError(Exception):
    """Base class for all dendrolab errors."""


class InvalidPointError(DendrolabError):
    """A point does not describe a valid location on the given tree."""


class AmbientMismatchError(DendrolabError):
    """Two objects that must share an ambient tree do not."""


class PreconditionError(DendrolabError):
    """An operation was called on inputs violating its stated precondition."""


class RefineNeeded(DendrolabError):
    """The current finite approximation is too coarse to satisfy a constraint.

    Carries the failing constraint so callers (or the CLI auto-refine loop)
    can decide whether a deeper refinement could help.
    """

    def __init__(self, constraint: str):
        super().__init__(constraint)
        self.constraint = constraint
