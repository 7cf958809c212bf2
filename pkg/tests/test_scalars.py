from fractions import Fraction

import pytest

from antidiff.scalars import (
    BINARY64,
    RATIONAL,
    as_scalar,
    fmt_csv,
    parse_ratio,
    scalar_from_json,
    scalar_to_json,
)


def test_rational_accepts_exact_inputs():
    assert as_scalar("3/4", RATIONAL) == Fraction(3, 4)
    assert as_scalar(2, RATIONAL) == Fraction(2)
    assert as_scalar(Fraction(1, 3), RATIONAL) == Fraction(1, 3)
    assert as_scalar(2.0, RATIONAL) == Fraction(2)


def test_rational_rejects_inexact_floats():
    with pytest.raises(TypeError):
        as_scalar(0.1, RATIONAL)


def test_binary64_coerces():
    assert as_scalar("1/2", BINARY64) == 0.5
    assert as_scalar(Fraction(1, 4), BINARY64) == 0.25
    assert isinstance(as_scalar(1, BINARY64), float)


def test_json_round_trip():
    assert scalar_from_json(scalar_to_json(Fraction(-7, 3))) == Fraction(-7, 3)
    assert scalar_to_json(Fraction(5)) == "5"
    assert scalar_to_json(0.25) == 0.25
    assert scalar_from_json(0.25) == 0.25


def test_parse_ratio():
    assert parse_ratio("2/5") == Fraction(2, 5)
    with pytest.raises(TypeError):
        parse_ratio(0.4)


def test_csv_formatting():
    assert fmt_csv(0.1, BINARY64) == repr(0.1)
    text = fmt_csv(Fraction(1, 3), RATIONAL)
    assert text.startswith("0.3333333333333333")
    assert fmt_csv(None, RATIONAL) == ""
