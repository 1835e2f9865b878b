"""Sign certificates for rational functions on integer rays.

The workhorse is a shift-until-positive search: Taylor-shift the numerator
and denominator until every coefficient of each shares one sign, which
proves the sign of the function for all rational arguments past the shift
point; the finitely many integers skipped over are checked by exact
evaluation.  On top of that sit two certified consequences used by the
enclosure machinery and the verification commands: two-sided telescoping
bounds for power-times-geometric tails, and second-order brackets for the
residual of a correction fraction.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .model import BBPTerm
from .polynomials import Polynomial, RationalFunction, poly_taylor_shift
from .rationals import Rational, format_rational
from .solver import CorrectionCF, ResidualInfo, build_correction, residual_pair

__all__ = [
    "Verdict",
    "SignCertificate",
    "TailBoundPair",
    "TailBoundReport",
    "BracketReport",
    "prove_sign_on_ray",
    "certify_tail_bound",
    "certify_second_order_bracket",
]

_SHIFT_SEARCH_CAP = 256


class Verdict(Enum):
    PROVEN_POSITIVE = "ProvenPositive"
    PROVEN_NEGATIVE = "ProvenNegative"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class SignCertificate:
    """Proof that subject(m) keeps one sign for every integer m >= ray_start.

    For m >= witness_shift the sign follows from single-signed Taylor
    coefficients (valid for rational m as well); the integers recorded in
    checked_prefix were verified one by one.  Unknown certificates carry
    no witness and assert nothing.
    """

    subject: RationalFunction
    ray_start: Rational
    verdict: Verdict
    witness_shift: Optional[Rational]
    checked_prefix: tuple[int, ...]

    @property
    def proven(self) -> bool:
        return self.verdict is not Verdict.UNKNOWN

    def sign(self) -> int:
        if self.verdict is Verdict.PROVEN_POSITIVE:
            return 1
        if self.verdict is Verdict.PROVEN_NEGATIVE:
            return -1
        raise ValueError("Unknown verdict has no sign")

    def payload(self) -> dict:
        """JSON-ready summary of the certificate."""
        witness = self.witness_shift
        return {
            "subject_hash": _subject_hash(self.subject),
            "m0": format_rational(self.ray_start),
            "verdict": self.verdict.value,
            "witness_shift": None if witness is None else format_rational(witness),
            "prefix_points": list(self.checked_prefix),
        }


def _subject_hash(subject: RationalFunction) -> str:
    text = "num={};den={}".format(
        ",".join(format_rational(c) for c in subject.num.coeffs),
        ",".join(format_rational(c) for c in subject.den.coeffs),
    )
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _coefficient_sign(p: Polynomial) -> int:
    """+1 or -1 when all nonzero coefficients agree and the constant term
    is nonzero; 0 otherwise."""
    if p.is_zero or p.coeffs[0] == 0:
        return 0
    sign = 1 if p.coeffs[0] > 0 else -1
    for c in p.coeffs[1:]:
        if c and (c > 0) != (sign > 0):
            return 0
    return sign


def _shift_witness(
    p: Polynomial, m0: Fraction
) -> Optional[tuple[Fraction, int]]:
    """Smallest s in {m0, m0+1, ...} within the cap whose shift of p has
    single-signed coefficients, together with that sign."""
    shifted = poly_taylor_shift(p, m0)
    for step in range(_SHIFT_SEARCH_CAP + 1):
        sign = _coefficient_sign(shifted)
        if sign:
            return m0 + step, sign
        shifted = poly_taylor_shift(shifted, 1)
    return None


def _as_ratfunc(f: Union[Polynomial, RationalFunction]) -> RationalFunction:
    if isinstance(f, Polynomial):
        return RationalFunction.from_polynomial(f)
    return f


def _unknown(subject: RationalFunction, m0: Fraction) -> SignCertificate:
    return SignCertificate(subject, m0, Verdict.UNKNOWN, None, ())


def prove_sign_on_ray(
    f: Union[Polynomial, RationalFunction], m0: Rational
) -> SignCertificate:
    """Certify the sign of f on the ray m >= m0 (integers and beyond).

    Numerator and denominator are certified separately and the verdicts
    multiplied, so an unreduced quotient with a sign-changing denominator
    is handled without any root isolation.  A denominator zero at an
    integer of the ray raises ZeroDivisionError.
    """
    subject = _as_ratfunc(f)
    m0 = Fraction(m0)
    if subject.is_zero:
        return _unknown(subject, m0)
    witness_num = _shift_witness(subject.num, m0)
    witness_den = _shift_witness(subject.den, m0)
    if witness_num is None or witness_den is None:
        _scan_for_poles(subject.den, m0)
        return _unknown(subject, m0)
    witness = max(witness_num[0], witness_den[0])
    overall = witness_num[1] * witness_den[1]
    checked = []
    for m in range(math.ceil(m0), math.ceil(witness)):
        value = subject(m)  # raises ZeroDivisionError on a pole
        if (value > 0) != (overall > 0) or value == 0:
            return SignCertificate(subject, m0, Verdict.UNKNOWN, None, tuple(checked))
        checked.append(m)
    verdict = Verdict.PROVEN_POSITIVE if overall > 0 else Verdict.PROVEN_NEGATIVE
    return SignCertificate(subject, m0, verdict, witness, tuple(checked))


def _scan_for_poles(den: Polynomial, m0: Fraction) -> None:
    start = math.ceil(m0)
    for m in range(start, start + _SHIFT_SEARCH_CAP + 1):
        if den(m) == 0:
            raise ZeroDivisionError(f"denominator vanishes at {m}")


# --------------------------------------------------------------------------
# telescoping tail bounds
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TailBoundPair:
    """Candidate comparators u, v for the tail sum_{m>=n} (m+c)^-p q^-m.

    Nothing is assumed about u and v at construction; only
    certify_tail_bound turns them into the two-sided bound
    q^-n u(n) < tail(n) < q^-n v(n).
    """

    u: RationalFunction
    v: RationalFunction
    power: int
    shift: Rational
    q: Rational


@dataclass(frozen=True)
class TailBoundReport:
    pair: TailBoundPair
    n0: int
    lower_certificate: SignCertificate
    upper_certificate: SignCertificate
    lower_vanishes: bool
    upper_vanishes: bool

    @property
    def certified(self) -> bool:
        return not self.failing_sides

    @property
    def failing_sides(self) -> tuple[str, ...]:
        bad = []
        if (
            self.lower_certificate.verdict is not Verdict.PROVEN_NEGATIVE
            or not self.lower_vanishes
        ):
            bad.append("u")
        if (
            self.upper_certificate.verdict is not Verdict.PROVEN_POSITIVE
            or not self.upper_vanishes
        ):
            bad.append("v")
        return tuple(bad)

    def payload(self) -> dict:
        return {
            "n0": self.n0,
            "certified": self.certified,
            "failing_sides": list(self.failing_sides),
            "lower": self.lower_certificate.payload(),
            "upper": self.upper_certificate.payload(),
        }


def _one_step_difference(
    w: RationalFunction, power: int, shift: Rational, q: Rational
) -> RationalFunction:
    """w(m) - (1/q) w(m+1) - 1/(m+shift)^power as an unreduced quotient."""
    q = Fraction(q)
    wn, wd = w.num, w.den
    wn1, wd1 = wn.shift(1), wd.shift(1)
    node = Polynomial.make([shift, 1]).pow(power)
    num = (wn * wd1).scale(q) * node - (wn1 * wd) * node - (wd * wd1).scale(q)
    den = (wd * wd1).scale(q) * node
    return RationalFunction.from_parts_unreduced(num, den)


def certify_tail_bound(pair: TailBoundPair, n0: int) -> TailBoundReport:
    """Prove q^-n u(n) < sum_{m>=n} (m+c)^-p q^-m < q^-n v(n) for n >= n0.

    Per side, the one-step difference w(m) - w(m+1)/q - (m+c)^-p must keep
    the right strict sign on the ray (u below, v above); telescoped from n
    upward, and with u, v -> 0 at infinity so the boundary term drops out,
    this yields the two-sided tail bound.
    """
    lower = prove_sign_on_ray(
        _one_step_difference(pair.u, pair.power, pair.shift, pair.q), n0
    )
    upper = prove_sign_on_ray(
        _one_step_difference(pair.v, pair.power, pair.shift, pair.q), n0
    )
    return TailBoundReport(
        pair=pair,
        n0=n0,
        lower_certificate=lower,
        upper_certificate=upper,
        lower_vanishes=pair.u.num.degree < pair.u.den.degree,
        upper_vanishes=pair.v.num.degree < pair.v.den.degree,
    )


# --------------------------------------------------------------------------
# second-order residual brackets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BracketReport:
    """Outcome of a two-sided residual bracket certification.

    The claim: with g(m) the depth-k residual plus Ck/m^K0, both
    g(m) + D/(m+lower_beta)^(K0+1) > 0 and
    g(m) + D/(m+upper_beta)^(K0+1) < 0 hold for m >= m0, which brackets g
    between the two shifted power terms.  derived_constant is the
    solver's own next-order coefficient; its comparison against D is
    informational.
    """

    series: str
    k: int
    constant: Fraction
    derived_constant: Optional[Fraction]
    lower_beta: Fraction
    upper_beta: Fraction
    m0: int
    lower_certificate: SignCertificate
    upper_certificate: SignCertificate

    @property
    def certified(self) -> bool:
        return not self.failing_sides

    @property
    def failing_sides(self) -> tuple[str, ...]:
        bad = []
        if self.lower_certificate.verdict is not Verdict.PROVEN_POSITIVE:
            bad.append("lower")
        if self.upper_certificate.verdict is not Verdict.PROVEN_NEGATIVE:
            bad.append("upper")
        return tuple(bad)

    @property
    def constant_agrees(self) -> bool:
        return self.derived_constant is not None and self.constant == self.derived_constant

    def payload(self) -> dict:
        return {
            "series": self.series,
            "k": self.k,
            "constant": format_rational(self.constant),
            "derived_constant": None
            if self.derived_constant is None
            else format_rational(self.derived_constant),
            "constant_agrees": self.constant_agrees,
            "lower_beta": format_rational(self.lower_beta),
            "upper_beta": format_rational(self.upper_beta),
            "m0": self.m0,
            "certified": self.certified,
            "failing_sides": list(self.failing_sides),
            "lower": self.lower_certificate.payload(),
            "upper": self.upper_certificate.payload(),
        }


def certify_second_order_bracket(
    term: BBPTerm,
    k: int,
    D: Rational,
    beta_lo: Rational,
    beta_hi: Rational,
    m0: int,
    prepared: Optional[tuple[CorrectionCF, ResidualInfo]] = None,
) -> BracketReport:
    """Certify -D/(m+b1)^(K0+1) < g(m) < -D/(m+b2)^(K0+1) on m >= m0.

    Here g(m) = MC_k(m) - kernel(m) MC_k(m+1) - R(m) + Ck/m^K0, built
    exactly from the solved correction.  The offsets b1, b2 are assigned
    from {beta_lo, beta_hi} by the sign of D: the side whose shifted
    power must sit below g takes the offset that shrinks |D|/(m+b)^(K0+1)
    the most.  Passing a precomputed (cf, info) avoids re-solving.
    """
    D = Fraction(D)
    beta_lo, beta_hi = Fraction(beta_lo), Fraction(beta_hi)
    if prepared is None:
        prepared = build_correction(term, k)
    cf, info = prepared
    f_num, f_den = residual_pair(term, cf)
    power_k0 = Polynomial.identity().pow(info.K0)
    g_num = f_num * power_k0 + f_den.scale(info.Ck)
    g_den = f_den * power_k0
    if D > 0:
        lower_beta, upper_beta = min(beta_lo, beta_hi), max(beta_lo, beta_hi)
    else:
        lower_beta, upper_beta = max(beta_lo, beta_hi), min(beta_lo, beta_hi)

    def braced(beta: Fraction) -> RationalFunction:
        node = Polynomial.make([beta, 1]).pow(info.K0 + 1)
        return RationalFunction.from_parts_unreduced(
            g_num * node + g_den.scale(D), g_den * node
        )

    lower = prove_sign_on_ray(braced(lower_beta), m0)
    upper = prove_sign_on_ray(braced(upper_beta), m0)
    return BracketReport(
        series=term.name,
        k=k,
        constant=D,
        derived_constant=info.next_order_coefficient,
        lower_beta=lower_beta,
        upper_beta=upper_beta,
        m0=m0,
        lower_certificate=lower,
        upper_certificate=upper,
    )
