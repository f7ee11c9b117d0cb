"""Exception hierarchy shared by all engine layers.

Exit-code mapping used by the CLI: InputError -> 1, ResourceCapError -> 2,
CrossCheckError -> 3.  Everything else is a plain bug.
"""


class HomcheckError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HomcheckError):
    """Bad user input: malformed text, unknown names, violated preconditions."""


class ParseError(InputError):
    """Malformed polynomial or workspace text."""


class RingMismatchError(InputError):
    """Operands live in different ambient rings."""


class ExponentOverflowError(HomcheckError):
    """Monomial exponent left the checked 32-bit range; never silent."""


class ResourceCapError(HomcheckError):
    """A configured size/degree cap was exceeded; result would be truncated."""


class CrossCheckError(HomcheckError):
    """Two independent routes disagreed, or a proven theorem was contradicted.

    This always indicates a bug in the engine (or a miscertified input), so
    callers must abort rather than report a verdict.
    """
