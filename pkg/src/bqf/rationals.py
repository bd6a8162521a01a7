"""Parsing and formatting of exact rationals as p/q strings."""

from fractions import Fraction

from .errors import DomainError


def parse_rational(text: str) -> Fraction:
    """Parse strings like "3/4", "-2" or "9/10" into a Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r}") from exc


def format_rational(value) -> str:
    """Render a rational as "p/q", or just "p" when the denominator is 1."""
    return str(Fraction(value))


def parse_rational_list(text: str) -> list[Fraction]:
    """Parse a comma-separated rational list like "1,-1/2,0"."""
    pieces = [piece.strip() for piece in str(text).split(",")]
    pieces = [piece for piece in pieces if piece]
    if not pieces:
        raise DomainError(f"empty rational list: {text!r}")
    return [parse_rational(piece) for piece in pieces]
