"""Rational string forms used throughout reports and the CLI."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfaccel.rationals import format_rational, parse_rational, rat_arith


def test_format_integer_drops_slash():
    assert format_rational(Fraction(8, 2)) == "4"
    assert format_rational(-3) == "-3"
    assert format_rational(0) == "0"


def test_format_fraction():
    assert format_rational(Fraction(-11925, 229376)) == "-11925/229376"
    assert format_rational(Fraction(1, 4)) == "1/4"


def test_parse_basic():
    assert parse_rational("21/64") == Fraction(21, 64)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational("  15 / 7 ") == Fraction(15, 7)


@pytest.mark.parametrize("bad", ["", "1/0", "a/b", "1.5", "1/2/3", "--3"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_rat_arith_ops():
    assert rat_arith(Fraction(1, 2), Fraction(1, 3), "+") == Fraction(5, 6)
    assert rat_arith(1, Fraction(1, 3), "-") == Fraction(2, 3)
    assert rat_arith(Fraction(2, 3), 6, "*") == 4
    assert rat_arith(1, 16, "/") == Fraction(1, 16)
    with pytest.raises(ValueError):
        rat_arith(1, 2, "%")
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "/")


def test_format_handles_huge_values():
    # Exact report values routinely exceed the interpreter's default
    # 4300-digit int/str guard; formatting must still succeed.
    x = Fraction(7**9000, 3**9000 + 1)
    text = format_rational(x)
    assert text.count("/") == 1
    assert parse_rational(text) == x


@given(
    num=st.integers(min_value=-(10**9), max_value=10**9),
    den=st.integers(min_value=1, max_value=10**9),
)
def test_round_trip(num, den):
    x = Fraction(num, den)
    assert parse_rational(format_rational(x)) == x
