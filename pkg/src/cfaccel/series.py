"""Truncated asymptotic expansions at m -> infinity.

A series with leading exponent e and coefficients (c_0, ..., c_T) stands
for sum_i c_i / m**(e+i) with error O(1/m**(e+T+1)); T is the truncation
order, so a series carries T+1 coefficients.  Exponents grow downward:
larger e means smaller terms.

Expansion of a rational function substitutes m = 1/x and divides the
reversed coefficient lists as power series in x; that division is the
integer kernel from cfaccel.kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .kernels import series_div
from .polynomials import Polynomial, RationalFunction, Scalar, _int_form


@dataclass(frozen=True)
class AsymptoticSeries:
    """Truncated expansion sum_i coefficients[i] / m**(leading_exponent+i).

    Invariants: coefficients[0] != 0 unless the tuple is empty (the
    series is zero to its truncation order), and truncation_order >= 0
    with len(coefficients) == truncation_order + 1 for nonzero series.
    """

    leading_exponent: int
    coefficients: tuple[Fraction, ...]
    truncation_order: int

    @classmethod
    def make(cls, e: int, coeffs: Sequence[Scalar], known_through: int | None = None) -> "AsymptoticSeries":
        """Build from raw coefficients, stripping leading zeros.

        known_through fixes the last exponent with a known coefficient;
        it defaults to e + len(coeffs) - 1.  Stripping k leading zeros
        moves the leading exponent up by k without losing accuracy.
        """
        cs = [Fraction(c) for c in coeffs]
        if known_through is None:
            known_through = e + len(cs) - 1
        while cs and cs[0] == 0:
            cs.pop(0)
            e += 1
        if not cs:
            return cls(known_through + 1, (), 0)
        t = known_through - e
        if t < 0:
            raise ValueError("known_through precedes the leading exponent")
        cs = cs[: t + 1]
        cs += [Fraction(0)] * (t + 1 - len(cs))
        return cls(e, tuple(cs), t)

    @classmethod
    def zero(cls, known_through: int) -> "AsymptoticSeries":
        """The zero series, known to vanish through exponent known_through."""
        return cls(known_through + 1, (), 0)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def known_through(self) -> int:
        """Largest exponent whose coefficient this truncation determines."""
        if self.is_zero:
            return self.leading_exponent - 1
        return self.leading_exponent + self.truncation_order

    def coefficient_at(self, exponent: int) -> Fraction:
        """Coefficient of 1/m**exponent; errors beyond the known range."""
        if exponent > self.known_through:
            raise ValueError(
                f"coefficient at exponent {exponent} exceeds truncation "
                f"(known through {self.known_through})"
            )
        idx = exponent - self.leading_exponent
        if idx < 0:
            return Fraction(0)
        return self.coefficients[idx]

    def evaluate(self, m: Scalar) -> Fraction:
        """Exact value of the truncated sum at a specific m."""
        m = Fraction(m)
        acc = Fraction(0)
        for i, c in enumerate(self.coefficients):
            acc += c / m ** (self.leading_exponent + i)
        return acc


def expand_at_infinity(r: RationalFunction, order: int) -> AsymptoticSeries:
    """Expand a canonical rational function to truncation order `order`.

    The leading exponent is deg(den) - deg(num) and the leading
    coefficient is the ratio of leading coefficients, so the result
    never needs stripping.
    """
    if order < 0:
        raise ValueError("truncation order must be nonnegative")
    if r.is_zero:
        return AsymptoticSeries.zero(known_through=order)
    e = r.den.degree - r.num.degree
    return _expand_pair(r.num, r.den, e + order)


def _expand_pair(num: Polynomial, den: Polynomial, through: int) -> AsymptoticSeries:
    """Expansion of num/den with coefficients known through `through`.

    Works on possibly unreduced pairs: the apparent leading exponent
    deg(den) - deg(num) may be far above the true one when massive
    cancellation occurs, so leading zeros are stripped afterwards.
    """
    if num.is_zero:
        return AsymptoticSeries.zero(known_through=through)
    e0 = den.degree - num.degree
    n = through - e0 + 1
    if n <= 0:
        return AsymptoticSeries.zero(known_through=through)
    na, da = _int_form(num.coeffs)
    nb, db = _int_form(den.coeffs)
    p_rev = na[::-1]
    q_rev = nb[::-1]
    scaled = series_div(p_rev, q_rev, n)
    q0 = q_rev[0]
    mul = Fraction(db, da)
    coeffs = [Fraction(c, q0 ** (k + 1)) * mul for k, c in enumerate(scaled)]
    return AsymptoticSeries.make(e0, coeffs, known_through=through)


def series_combine(a: AsymptoticSeries, b: AsymptoticSeries, op: str) -> AsymptoticSeries:
    """Combine two truncations with '+', '-' or '*'.

    The result's truncation order is conservative: it never claims a
    coefficient either input cannot support.
    """
    if op == "+":
        return _series_add(a, b, 1)
    if op == "-":
        return _series_add(a, b, -1)
    if op == "*":
        return _series_mul(a, b)
    raise ValueError(f"unknown series operation {op!r}")


def _series_add(a: AsymptoticSeries, b: AsymptoticSeries, sign: int) -> AsymptoticSeries:
    through = min(a.known_through, b.known_through)
    if a.is_zero and b.is_zero:
        return AsymptoticSeries.zero(through)
    e = min(
        a.leading_exponent if not a.is_zero else through + 1,
        b.leading_exponent if not b.is_zero else through + 1,
    )
    if e > through:
        return AsymptoticSeries.zero(through)
    out = []
    for expo in range(e, through + 1):
        ca = a.coefficient_at(expo) if expo <= a.known_through else Fraction(0)
        cb = b.coefficient_at(expo) if expo <= b.known_through else Fraction(0)
        out.append(ca + sign * cb)
    return AsymptoticSeries.make(e, out, known_through=through)


def _series_mul(a: AsymptoticSeries, b: AsymptoticSeries) -> AsymptoticSeries:
    if a.is_zero or b.is_zero:
        # Error of the product is bounded by the larger omitted tail
        # times the other factor's leading term.
        if a.is_zero and b.is_zero:
            return AsymptoticSeries.zero(a.known_through + b.known_through + 1)
        zero, other = (a, b) if a.is_zero else (b, a)
        return AsymptoticSeries.zero(zero.known_through + other.leading_exponent)
    e = a.leading_exponent + b.leading_exponent
    through = min(
        a.known_through + b.leading_exponent,
        b.known_through + a.leading_exponent,
    )
    out = [Fraction(0)] * (through - e + 1)
    for i, ca in enumerate(a.coefficients):
        if ca == 0:
            continue
        for j, cb in enumerate(b.coefficients):
            k = i + j
            if e + k > through:
                break
            out[k] += ca * cb
    return AsymptoticSeries.make(e, out, known_through=through)
