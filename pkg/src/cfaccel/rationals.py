"""Small helpers around fractions.Fraction.

The whole library computes over exact rationals; this module only adds
the bits the standard library does not have: a string form used in
reports ("num/den", integers without the slash) and a checked parser
for that form.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _ensure_digit_capacity(digits: int) -> None:
    """Grow the interpreter's int/str conversion cap when needed.

    Exact report values routinely exceed the default 4300-digit guard;
    the guard targets untrusted input, while everything rendered here is
    the library's own arithmetic.  The cap is only ever raised.
    """
    if not hasattr(sys, "get_int_max_str_digits"):
        return
    if digits + 16 > sys.get_int_max_str_digits():
        sys.set_int_max_str_digits(digits + 16)


def rat_arith(a: Rational, b: Rational, op: str) -> Fraction:
    """Apply one of '+', '-', '*', '/' to two rationals.

    Division by zero raises ZeroDivisionError, as usual.
    """
    a = Fraction(a)
    b = Fraction(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def format_rational(x: Rational) -> str:
    """Render a rational as 'num/den', or just 'num' for integers."""
    x = Fraction(x)
    bits = max(x.numerator.bit_length(), x.denominator.bit_length())
    _ensure_digit_capacity(bits // 3 + 1)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse 'num/den' or a bare integer; whitespace around parts is fine."""
    s = text.strip()
    _ensure_digit_capacity(len(s))
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            return Fraction(int(num.strip()), int(den.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {text!r}: {exc}") from None
    try:
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"bad rational literal {text!r}") from None
