"""Exact rational parsing and formatting shared by every file format."""

from fractions import Fraction


class MalformedInputError(ValueError):
    """Raised when an input document cannot be parsed."""


def parse_rational(value) -> Fraction:
    """Parses an int, a decimal string or a "p/q" string into a Fraction.

    Floats are rejected: every value in a document must be exact.

    Raises:
        MalformedInputError: If the value is not an exact rational.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise MalformedInputError(f"Expected an exact rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedInputError(
                f"Not a rational number: {value!r}") from e
    raise MalformedInputError(f"Expected an exact rational, got {value!r}")


def format_rational(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"
