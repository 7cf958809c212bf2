"""Arithmetic-mode plumbing.

Every run works over a single scalar field chosen up front: exact rationals
(`fractions.Fraction`, always in lowest terms with positive denominator) or
binary64 floats.  Mixing modes inside one state is a bug, so construction
paths funnel through :func:`as_scalar`, which refuses silent coercions.

The shift parameter of a run is always kept as an exact ratio (a
``Fraction``), even in binary64 runs; it is cast to the run mode only at the
point of arithmetic use.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RATIONAL = "rational"
BINARY64 = "binary64"

MODES = (RATIONAL, BINARY64)

Scalar = Union[Fraction, float]


def as_scalar(value, mode: str) -> Scalar:
    """Coerce ``value`` into the run mode.

    Rational mode accepts ints, Fractions and "p/q" strings; a plain float is
    rejected unless it is integral, because a rounded float silently entering
    an exact computation is almost always an error.
    """
    if mode == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        if isinstance(value, float):
            if value.is_integer():
                return Fraction(int(value))
            raise TypeError(
                f"rational mode needs exact input, got float {value!r}; "
                "pass a Fraction or a 'p/q' string"
            )
        raise TypeError(f"cannot use {type(value).__name__} as a rational scalar")
    if mode == BINARY64:
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def mode_of(value) -> str:
    if isinstance(value, Fraction):
        return RATIONAL
    if isinstance(value, float):
        return BINARY64
    raise TypeError(f"{type(value).__name__} is not a run scalar")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    return mode


def zero(mode: str) -> Scalar:
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str) -> Scalar:
    return Fraction(1) if mode == RATIONAL else 1.0


def scalar_to_json(value: Scalar):
    """Rational scalars serialize as "p/q" strings, binary64 as numbers."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def scalar_from_json(raw) -> Scalar:
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(raw, int):
        # bare JSON integers are only unambiguous in binary64 payloads
        return float(raw)
    if isinstance(raw, float):
        return raw
    raise TypeError(f"cannot parse scalar from {raw!r}")


def parse_ratio(text) -> Fraction:
    """Parse an exact ratio such as ``1/2`` or ``0.4`` is *not* accepted."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text)
    raise TypeError(f"expected an exact ratio, got {text!r}")


def fmt_csv(value: Scalar, mode: str) -> str:
    """CSV text for one scalar.

    Binary64 uses the shortest round-trip decimal; rationals print a decimal
    with 17 significant digits (the exact "p/q" form goes in a separate
    column when requested).
    """
    if value is None:
        return ""
    if mode == RATIONAL and isinstance(value, Fraction):
        return f"{float(value):.17g}"
    return repr(float(value))
