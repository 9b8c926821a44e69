"""
Utility functions for ncinequality.

This module provides the formatting helpers shared by the file formats and
reports: exact fractions as "p/q" strings and floats at a fixed precision.
"""

import math
from fractions import Fraction
from numbers import Rational, Real
from typing import Union

FLOAT_FORMAT = "%.15g"


def format_fraction(value: Rational) -> str:
    """
    Render an exact rational as a "p/q" string.

    Args:
        value: Fraction or int

    Returns:
        String of the form "p/q" with q > 0, always including the denominator

    Example:
        >>> format_fraction(Fraction(4, 5))
        '4/5'
        >>> format_fraction(1)
        '1/1'
        >>> format_fraction(Fraction(-2, 4))
        '-1/2'
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int]) -> Fraction:
    """
    Parse a "p/q" string (or a bare integer) into an exact Fraction.

    Floats are refused: every coefficient must be stated exactly.

    Args:
        text: "p/q" string, integer string, or int

    Returns:
        Reduced Fraction

    Raises:
        ValueError: If the text is not an exact rational

    Example:
        >>> parse_fraction("1/5")
        Fraction(1, 5)
        >>> parse_fraction("2")
        Fraction(2, 1)
    """
    if isinstance(text, bool):
        raise ValueError(f"Not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Expected a 'p/q' string, got {type(text).__name__}")
    stripped = text.strip()
    if "/" in stripped:
        num, _, den = stripped.partition("/")
        try:
            numerator, denominator = int(num), int(den)
        except ValueError:
            raise ValueError(f"Not a rational: {text!r}") from None
        if denominator == 0:
            raise ValueError(f"Zero denominator in {text!r}")
        return Fraction(numerator, denominator)
    try:
        return Fraction(int(stripped))
    except ValueError:
        raise ValueError(f"Not a rational: {text!r}") from None


def format_float(value: Real) -> str:
    """
    Format a float with 15 significant digits.

    Scientific notation (lowercase) is used outside [1e-4, 1e15).

    Example:
        >>> format_float(0.1 + 0.2)
        '0.3'
        >>> format_float(1.5e-7)
        '1.5e-07'
    """
    return FLOAT_FORMAT % float(value)


def round_float(value: Real) -> float:
    """Round a float to 15 significant digits so JSON output is reproducible."""
    value = float(value)
    if not math.isfinite(value):
        return value
    return float(FLOAT_FORMAT % value)


def format_bool(value: bool) -> str:
    """Lowercase boolean for CSV cells."""
    return "true" if value else "false"
