"""
Domain Errors

Every failure the library reports on purpose derives from EscapeRateError, so
callers (the CLI, the suite executor) can tell a domain error from a bug.
The CLI prints the class name next to the message.
"""


class EscapeRateError(Exception):
    """Base class for all domain errors raised by subshift_escape."""


class ConfigurationError(EscapeRateError):
    """An environment variable or config file holds an unusable value."""


class InsufficientAlphabet(EscapeRateError):
    """A word or collection needs more symbols than the alphabet provides."""


class BadCharacter(EscapeRateError):
    """A word contains a character outside the selected text mode."""


class NotReduced(EscapeRateError):
    """A collection repeats a word or contains a word inside another."""


class SingularCorrelationMatrix(EscapeRateError):
    """The determinant of the correlation matrix vanishes identically."""


class DivisionByZero(EscapeRateError, ZeroDivisionError):
    """A rational function was evaluated at one of its poles."""


class NonExpandable(EscapeRateError):
    """The numerator degree exceeds the denominator degree, so there is no
    expansion in powers of 1/z."""


class CapExceeded(EscapeRateError):
    """An enumeration would exceed its configured size cap."""


class NonConvergence(EscapeRateError):
    """Power iteration hit its iteration cap before the bracket closed."""


class NoRealRootFound(EscapeRateError):
    """The Perron polynomial has no real root in [1, q]."""


class EmptySubshift(EscapeRateError):
    """The subshift has no infinite sequences (no recurrent states)."""


class EmptySurvivorSet(EscapeRateError):
    """Every orbit falls into the hole, so the escape rate is infinite."""


class InvalidHole(EscapeRateError):
    """A hole word is not an allowed word of the ambient subshift."""


class NotIrreducible(EscapeRateError):
    """The recurrent part of the subshift splits into several components."""


class NotAllowedWord(EscapeRateError):
    """A cylinder word does not occur in the subshift."""


class HypothesisViolation(EscapeRateError):
    """Suite parameters fall outside the range the checked theorem covers."""


class SuiteError(EscapeRateError):
    """A verification suite could not be set up or crashed outside any single instance."""
