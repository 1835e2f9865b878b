"""Exact univariate polynomials and rational functions over Q.

Polynomials are dense, lowest degree first, with Fraction coefficients.
The arithmetic that dominates runtime (products, Taylor shifts, series
division) runs on integer coefficient lists via cfaccel.kernels; this
module clears denominators on the way in and restores them on the way
out.

RationalFunction is kept canonical: numerator and denominator coprime
(integer primitive-PRS gcd) and the denominator monic.  A private
unreduced constructor exists for internally built sign-certificate
subjects, where reduction is pointless work; sign analysis is unchanged
by common factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .kernels import poly_mul, taylor_shift

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _int_form(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    """Common-denominator form: (integer coefficients, positive denominator)."""
    if not coeffs:
        return [], 1
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _content(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g if g else 1


def _primitive(a: list[int]) -> list[int]:
    g = _content(a)
    if g > 1:
        return [x // g for x in a]
    return list(a)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b (b nonzero), all over the integers."""
    db = len(b) - 1
    lcb = b[-1]
    r = list(a)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        top = r[-1]
        r = [lcb * x for x in r[:-1]]
        for i in range(db):
            r[i + k] -= top * b[i]
        _trim(r)
    return r


def _int_poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive PRS gcd of two nonzero integer polynomials."""
    a = _primitive(_trim(list(a)))
    b = _primitive(_trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def _int_poly_exact_div(a: list[int], g: list[int]) -> list[int]:
    """Exact division of integer polynomials; raises if not exact."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    r = list(a)
    dg = len(g) - 1
    lcg = g[-1]
    q = [0] * (len(a) - dg)
    for k in range(len(q) - 1, -1, -1):
        top = r[dg + k]
        if top % lcg != 0:
            raise ArithmeticError("inexact polynomial division")
        c = top // lcg
        q[k] = c
        if c:
            for i in range(dg + 1):
                r[i + k] -= c * g[i]
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return q


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial over Q.  coeffs[i] multiplies m**i.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading (last) coefficient is nonzero.
    """

    coeffs: tuple[Fraction, ...]

    @classmethod
    def make(cls, coeffs: Iterable[Scalar]) -> "Polynomial":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls.make([c])

    @classmethod
    def identity(cls) -> "Polynomial":
        """The polynomial m."""
        return cls.make([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x: Scalar) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return Fraction(acc)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial.make(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial(())
        na, da = _int_form(self.coeffs)
        nb, db = _int_form(other.coeffs)
        prod = poly_mul(na, nb)
        den = da * db
        return Polynomial.make(Fraction(c, den) for c in prod)

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial(())
        return Polynomial(tuple(x * c for x in self.coeffs))

    def pow(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        out = Polynomial.make([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, s: Scalar) -> "Polynomial":
        """The polynomial p(m + s)."""
        return poly_taylor_shift(self, s)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ValueError("zero polynomial cannot be made monic")
        lc = self.leading
        if lc == 1:
            return self
        return Polynomial(tuple(c / lc for c in self.coeffs))


def poly_taylor_shift(p: Polynomial, s: Scalar) -> Polynomial:
    """Expand p(m + s) exactly for rational s.

    For s = u/v the integer kernel shifts the rescaled polynomial
    sum_j A_j v^(d-j) x^j by the integer u; dividing coefficient k by
    v^(d-k) (and the cleared denominator) undoes the scaling.
    """
    s = Fraction(s)
    if p.is_zero or s == 0:
        return p
    ints, den = _int_form(p.coeffs)
    u, v = s.numerator, s.denominator
    d = len(ints) - 1
    if v == 1:
        shifted = taylor_shift(ints, u)
        return Polynomial.make(Fraction(c, den) for c in shifted)
    scaled = [ints[j] * v ** (d - j) for j in range(d + 1)]
    shifted = taylor_shift(scaled, u)
    vd = v ** d
    return Polynomial.make(
        Fraction(shifted[k] * v**k, vd * den) for k in range(d + 1)
    )


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of two polynomials, canonical unless built unreduced.

    Canonical means gcd(num, den) = 1 and den monic, so dataclass
    equality is mathematical equality.
    """

    num: Polynomial
    den: Polynomial

    @classmethod
    def make(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            return cls(Polynomial(()), Polynomial.make([1]))
        na, da = _int_form(num.coeffs)
        nb, db = _int_form(den.coeffs)
        # num/den == (na/nb) * (db/da)
        scalar = Fraction(db, da)
        ca, cb = _content(na), _content(nb)
        na = [x // ca for x in na]
        nb = [x // cb for x in nb]
        scalar *= Fraction(ca, cb)
        g = _int_poly_gcd(na, nb)
        if len(g) > 1:
            na = _int_poly_exact_div(na, g)
            nb = _int_poly_exact_div(nb, g)
        lcb = nb[-1]
        den_out = Polynomial.make(Fraction(x, lcb) for x in nb)
        mul = scalar / lcb
        num_out = Polynomial.make(Fraction(x) * mul for x in na)
        return cls(num_out, den_out)

    @classmethod
    def from_parts_unreduced(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        """Skip reduction and normalization.

        Meant for large internally built sign-certificate subjects where
        the gcd would dominate runtime and nothing downstream needs the
        canonical form.  Do not compare such instances for equality.
        """
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        return cls(num, den)

    @classmethod
    def constant(cls, c: Scalar) -> "RationalFunction":
        return cls.make(Polynomial.make([c]), Polynomial.make([1]))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls.make(p, Polynomial.make([1]))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __call__(self, x: Scalar) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return self.num(x) / d

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction.make(self.num * other.den, self.den * other.num)

    def scale(self, c: Scalar) -> "RationalFunction":
        return RationalFunction.make(self.num.scale(c), self.den)

    def shift(self, s: Scalar) -> "RationalFunction":
        """Substitute m -> m + s.  Preserves canonical form."""
        return RationalFunction(self.num.shift(s), self.den.shift(s))


def ratfunc_degree(r: RationalFunction) -> int:
    """Degree of a rational function: deg(num) - deg(den).

    The zero function has no degree; asking for one is an error.
    """
    if r.is_zero:
        raise ValueError("degree of the zero rational function is undefined")
    return r.num.degree - r.den.degree
