"""Exception types shared across the library.

Every error raised on bad input derives from SympfiltError so callers can
catch one type at the CLI boundary.  Internal "cannot happen" conditions
(e.g. an unsolvable Jacobson-Morozov system in characteristic zero) raise
InternalError instead of being silently repaired.
"""


class SympfiltError(Exception):
    pass


class InvalidInput(SympfiltError):
    pass


class Unsupported(SympfiltError):
    pass


class NotNilpotent(InvalidInput):
    pass


class NotSelfAdjoint(InvalidInput):
    pass


class NotFilteredSymplectic(InvalidInput):
    pass


class HypothesisViolated(InvalidInput):
    """A lemma's hypothesis failed; .which names the offending hypothesis."""

    def __init__(self, which, message=""):
        super().__init__(message or which)
        self.which = which


class DegreeViolation(InvalidInput):
    pass


class Singular(InvalidInput):
    pass


class InvalidShape(InvalidInput):
    pass


class InvalidIdempotents(InvalidInput):
    pass


class OutOfHypothesis(InvalidInput):
    pass


class NoSolution(SympfiltError):
    pass


class NoLift(SympfiltError):
    pass


class InternalError(SympfiltError):
    pass
