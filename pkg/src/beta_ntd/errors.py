"""Exception classes shared across the package."""


class ParseError(ValueError):
    """A file could not be parsed; the message names the offending line."""


class NumericalDomainError(ArithmeticError):
    """A value left the numerical domain of an operation (zero denominator,
    undefined divergence term, non-finite loss)."""
