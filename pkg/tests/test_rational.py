from fractions import Fraction

import pytest

from liftgap.rational import decimal_string, format_rational, parse_rational


@pytest.mark.parametrize(
    "text,value",
    [("2/3", Fraction(2, 3)), ("-1/3", Fraction(-1, 3)), ("7", Fraction(7)),
     ("4/6", Fraction(2, 3)), ("0", Fraction(0))],
)
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize(
    "value,text",
    [(Fraction(2, 3), "2/3"), (Fraction(4), "4"), (Fraction(-1, 2), "-1/2"),
     (Fraction(0), "0")],
)
def test_format_canonical(value, text):
    assert format_rational(value) == text
    assert parse_rational(format_rational(value)) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("one half")


def test_decimal_rendering_half_even():
    assert decimal_string(Fraction(1, 3), 5) == "0.33333"
    assert decimal_string(Fraction(1, 2)) == "0.5"
    # exactly representable values render exactly
    assert decimal_string(Fraction(28)) == "28"
