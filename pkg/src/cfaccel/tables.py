"""Recorded reference data for the verify and certify commands.

Three kinds of fixtures live here, all exact rationals:

* coefficient tables: the expected correction-fraction cells for the four
  catalog series with recorded expansions.  The verify command re-derives
  every cell and reports each disagreement with both values; the recorded
  values are kept verbatim even where the derivation is known to differ.
* closed-form families: a_k / b_k formulas claimed for the three series
  whose corrections follow a pattern in k.
* certified-bound fixtures: comparator pairs for geometric tails, residual
  bracket constants, and double-sided error-bound offsets, each consumed
  by the positivity or evaluator machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .polynomials import Polynomial, RationalFunction
from .positivity import TailBoundPair

F = Fraction

__all__ = [
    "CoefficientTable",
    "ClosedFormFamily",
    "TailBoundFixture",
    "BracketFixture",
    "TheoremBoundFixture",
    "COEFFICIENT_TABLES",
    "CLOSED_FORM_FAMILIES",
    "TAIL_BOUND_FIXTURES",
    "LEMMA2_V_ALTERNATE",
    "BRACKET_FIXTURES",
    "THEOREM_BOUND_FIXTURES",
]


# --------------------------------------------------------------------------
# coefficient tables
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientTable:
    """Expected correction cells for one series: head, levels, limits."""

    verify_id: str
    series: str
    head_kind: str
    lambda0: Fraction
    head_poly: tuple[Fraction, ...]
    levels: tuple[tuple[Fraction, Fraction], ...]
    limit_constants: tuple[Fraction, ...]
    k0_slope: int
    k0_offset: int

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def max_k(self) -> int:
        return len(self.limit_constants) - 1

    def k0(self, k: int) -> int:
        return self.k0_slope * k + self.k0_offset


_PI_TABLE = CoefficientTable(
    verify_id="thm1-coefficients",
    series="pi-bbp",
    head_kind="reciprocal",
    lambda0=F(1, 4),
    head_poly=(F(-3, 32), F(7, 8), F(1)),
    levels=(
        (F(21, 64), F(15, 7)),
        (F(-265, 392), F(9299, 2968)),
        (F(-3381, 2809), F(20517, 4876)),
        (F(-18921, 8464), F(94519, 21896)),
        (F(-3260043, 453152), F(25408967, 7496524)),
        (F(-3740382415, 496062002), F(482484243355, 72002790104)),
        (F(-435259601465, 326597391169), F(133863589556959, 4859799720860)),
        # a_8 flips positive and b_8 negative; recorded as-is, the
        # verification checks the irregular signs rather than assuming a
        # pattern.
        (
            F(18170745077870217, 36157137144200),
            F(-550189873911066313, 30042487323672220),
        ),
        (
            F(1184188272901493239625, 399390489791710771232),
            F(55409761792537711960915, 5291704918098810592904),
        ),
    ),
    limit_constants=(
        F(-315, 4096),
        F(-11925, 229376),
        F(-108675, 1736704),
        F(-1686825, 12058624),
        F(-287025525, 285212672),
        F(-4009909971375, 528448749568),
        F(-27702923551875, 2739417382912),
        F(580053423565590975, 114135803101184),
        F(-457280686810171702603125, 30346857643463671808),
        F(-197080602286603349404715625, 1608316872287169019904),
    ),
    k0_slope=2,
    k0_offset=5,
)

_INV_PI_TABLE = CoefficientTable(
    verify_id="sect2-coefficients",
    series="ramanujan-inv-pi",
    head_kind="polynomial",
    lambda0=F(128, 3),
    head_poly=(F(128, 27), F(128, 3)),
    levels=(
        (F(32, 81), F(10, 9)),
        (F(-7, 324), F(27, 7)),
        (F(19856, 3969), F(-145795, 156366)),
        (F(1396171, 4620243), F(15549372115, 4455381114)),
        (F(-818973874600, 3222301435929), F(24496617933181, 3948754138854)),
        (
            F(7676419604757068, 881904503553129),
            F(-535521415681420831, 571477212182467206),
        ),
    ),
    limit_constants=(
        F(7, 18),
        F(49, 5832),
        F(-2482, 59049),
        F(2792342, 219839427),
        F(9239028400, 2861932547871),
        F(-15394944382400, 547865648052993),
        F(5377668984891011200, 100647847362777935517),
    ),
    k0_slope=2,
    k0_offset=1,
)

_CATALAN_TABLE = CoefficientTable(
    verify_id="thm3-coefficients",
    series="catalan-bbp",
    head_kind="reciprocal",
    lambda0=F(-3, 128),
    head_poly=(F(661, 5184), F(13, 36), F(1)),
    levels=(
        (F(-517, 23328), F(156655, 148896)),
        (F(366823315, 821111808), F(-73939238279831, 163855572930720)),
        (
            F(-975884794104398189, 98093762087712545025),
            F(-1932406340618716298628867667, 299122227350085279497481360),
        ),
        (
            F(
                1518828040567790867982188908085299115,
                24627466973909279332577879325543168,
            ),
            F(
                10414320422851149518238529301402392329619615007,
                1125439555781241535752796061860324225756510608,
            ),
        ),
    ),
    limit_constants=(
        F(-235235, 248832),
        F(166904608325, 395200954368),
        F(-171770824494197747, 40882919041278148608),
        F(
            1883922668487810936804537501055,
            7270540656226904507330240446464,
        ),
        F(
            -59816694319657990230589749754634406261775,
            191377827680729835340592443669705291028496384,
        ),
    ),
    k0_slope=2,
    k0_offset=5,
)

_PI2_TABLE = CoefficientTable(
    verify_id="thm5-coefficients",
    series="pi2-bbp",
    head_kind="reciprocal",
    lambda0=F(-10935, 5824),
    head_poly=(F(8318813, 59623200), F(3473, 5460), F(1)),
    levels=(
        (F(1704001969, 54257112000), F(2133779424499, 12405134334320)),
        (
            F(
                -22377711469278547658588675,
                55399448826908967430750464,
            ),
            F(
                7838462085871364023219390913487412021,
                6662364404905290370545187619443579824,
            ),
        ),
        (
            F(
                -338155884480620847387677263213133005773122041905270,
                6634895805691977782779752766105114022452560309751729,
            ),
            F(
                518071383229948104130947807715226040921415380062488629146343414684409,
                258632973680067531610825571620741735163688602840992494501823795966560,
            ),
        ),
    ),
    limit_constants=(
        F(1704001969, 28937126400),
        F(895108458771141906343547, 37631431943365237081767936),
        F(
            33074676617409163665475129038532721493305,
            27282731409796850283137568847626580833927168,
        ),
        F(
            51782290831323026508865202336606730861855228893902257466379094191,
            25645536505061295272046603371156784994696908444725810442196683325440,
        ),
    ),
    k0_slope=2,
    k0_offset=5,
)

COEFFICIENT_TABLES: dict[str, CoefficientTable] = {
    t.verify_id: t for t in (_PI_TABLE, _INV_PI_TABLE, _CATALAN_TABLE, _PI2_TABLE)
}


# --------------------------------------------------------------------------
# closed-form families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedFormFamily:
    """Claimed a_k / b_k pattern for a series whose levels follow one."""

    series: str
    lambda0: Fraction
    head_poly: tuple[Fraction, ...]
    a_formula: Callable[[int], Fraction]
    b_formula: Callable[[int], Fraction]


def _central_binomial_a(k: int) -> Fraction:
    return F(2 * k**3 * (2 * k - 1) ** 3, (4 * k + 1) * (4 * k - 1) ** 2 * (4 * k - 3))


def _central_binomial_b(k: int) -> Fraction:
    return F(4 * k * k + 2 * k - 1, 2 * (4 * k - 1) * (4 * k + 3))


CLOSED_FORM_FAMILIES: tuple[ClosedFormFamily, ...] = (
    ClosedFormFamily(
        series="catalan-central-binomial",
        lambda0=F(1, 2),
        head_poly=(F(1, 6), F(1)),
        a_formula=_central_binomial_a,
        b_formula=_central_binomial_b,
    ),
    ClosedFormFamily(
        series="ln2-mercator",
        lambda0=F(2),
        head_poly=(F(1), F(1)),
        a_formula=lambda k: F(-2 * k * k),
        b_formula=lambda k: F(3 * k - 2),
    ),
    ClosedFormFamily(
        series="inverse-squares-4m1",
        lambda0=F(1, 16),
        head_poly=(F(-1, 4), F(1)),
        a_formula=lambda k: F(k**4, 4 * (2 * k - 1) * (2 * k + 1)),
        b_formula=lambda k: F(-1, 4),
    ),
)


# --------------------------------------------------------------------------
# tail-bound fixtures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TailBoundFixture:
    certify_id: str
    pair: TailBoundPair
    n0: int


def _quotient(num_coeffs, den_coeffs) -> RationalFunction:
    return RationalFunction.make(Polynomial.make(num_coeffs), Polynomial.make(den_coeffs))


def _power_reciprocal(scale: Fraction, shift: Fraction, power: int) -> RationalFunction:
    return RationalFunction.make(
        Polynomial.constant(scale), Polynomial.make([shift, 1]).pow(power)
    )


def _tail_fixture(certify_id, q, power, shift, n0, u, v) -> TailBoundFixture:
    return TailBoundFixture(
        certify_id=certify_id,
        pair=TailBoundPair(u=u, v=v, power=power, shift=shift, q=q),
        n0=n0,
    )


TAIL_BOUND_FIXTURES: dict[str, tuple[TailBoundFixture, ...]] = {
    "lemma2": (
        _tail_fixture(
            "lemma2",
            q=F(16),
            power=23,
            shift=F(0),
            n0=4,
            u=_quotient([1], [0] * 22 + [F(23, 16), F(15, 16)]),
            v=_quotient([1], [0] * 21 + [F(-4163, 240), F(23, 16), F(15, 16)]),
        ),
    ),
    "lemma4": (
        _tail_fixture(
            "lemma4",
            q=F(16),
            power=24,
            shift=F(55, 32),
            n0=1,
            u=_power_reciprocal(F(16, 15), F(63, 32), 24),
            v=_power_reciprocal(F(16, 15), F(55, 32), 24),
        ),
        _tail_fixture(
            "lemma4",
            q=F(16),
            power=24,
            shift=F(71, 32),
            n0=1,
            u=_power_reciprocal(F(16, 15), F(79, 32), 24),
            v=_power_reciprocal(F(16, 15), F(71, 32), 24),
        ),
    ),
    "lemma6": (
        _tail_fixture(
            "lemma6",
            q=F(4096),
            power=13,
            shift=F(0),
            n0=1,
            u=_quotient([1], [0] * 12 + [F(13, 4096), F(4095, 4096)]),
            v=_quotient(
                [1], [0] * 11 + [F(-14333, 645120), F(13, 4096), F(4095, 4096)]
            ),
        ),
    ),
    "lemma8": (
        _tail_fixture(
            "lemma8",
            q=F(4096),
            power=14,
            shift=F(1, 4),
            n0=1,
            u=_power_reciprocal(F(4096, 4095), F(1, 2), 14),
            v=_power_reciprocal(F(4096, 4095), F(1, 4), 14),
        ),
        _tail_fixture(
            "lemma8",
            q=F(4096),
            power=14,
            shift=F(3, 4),
            n0=1,
            u=_power_reciprocal(F(4096, 4095), F(1), 14),
            v=_power_reciprocal(F(4096, 4095), F(3, 4), 14),
        ),
    ),
    "lemma10": (
        _tail_fixture(
            "lemma10",
            q=F(729),
            power=11,
            shift=F(0),
            n0=1,
            u=_quotient([1], [0] * 10 + [F(11, 729), F(728, 729)]),
            v=_quotient(
                [1], [0] * 9 + [F(-48059, 530712), F(11, 729), F(728, 729)]
            ),
        ),
    ),
    "lemma12": (
        _tail_fixture(
            "lemma12",
            q=F(729),
            power=12,
            shift=F(0),
            n0=1,
            u=_quotient([1], [0] * 11 + [F(4, 243), F(728, 729)]),
            v=_quotient([1], [0] * 12 + [F(728, 729)]),
        ),
        _tail_fixture(
            "lemma12",
            q=F(729),
            power=12,
            shift=F(1, 2),
            n0=1,
            u=_power_reciprocal(F(729, 728), F(3, 4), 12),
            v=_quotient([1], [0] * 11 + [F(1460, 243), F(728, 729)]),
        ),
    ),
}

# The lemma2 comparator v also circulates written with every denominator
# coefficient multiplied by 16 and a numerator of 16; as a rational
# function that is the same object.  The certify command checks the exact
# equality and certifies the shared function once.
LEMMA2_V_ALTERNATE: RationalFunction = _quotient(
    [16], [0] * 21 + [F(-4163, 15), 23, 15]
)


# --------------------------------------------------------------------------
# bracket fixtures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BracketFixture:
    """Second-order residual bracket: constants and ray for one series."""

    certify_id: str
    series: str
    k: int
    reference_constant: Fraction
    beta_lo: Fraction
    beta_hi: Fraction
    m0: int
    # When True, certification must run with the freshly derived
    # next-order coefficient; the recorded constant does not describe the
    # derived residual (the comparison is still reported).
    use_derived_constant: bool = False


BRACKET_FIXTURES: dict[str, BracketFixture] = {
    "lemma3": BracketFixture(
        certify_id="lemma3",
        series="pi-bbp",
        k=9,
        reference_constant=F(
            28928763399211176287296777111194638413125,
            2409036421853659622126333496131584,
        ),
        beta_lo=F(55, 32),
        beta_hi=F(71, 32),
        m0=41,
    ),
    "lemma7": BracketFixture(
        certify_id="lemma7",
        series="catalan-bbp",
        k=4,
        reference_constant=F(
            1688333983180439467559656563442776672937656721610720727013667676284669255,
            342315876957165258079588638702247355650182866279601922774818539625196290048,
        ),
        beta_lo=F(1, 4),
        beta_hi=F(3, 4),
        m0=2,
    ),
    "lemma11": BracketFixture(
        certify_id="lemma11",
        series="pi2-bbp",
        k=3,
        reference_constant=F(
            -124280353667510106220979748750667909695624573786666800114069359390500727018449872352585153675322995125291007697,
            7410030933045371437546343001038973984710540812824724996194805971487253427817067830381380462371074531080221491200,
        ),
        beta_lo=F(0),
        beta_hi=F(1, 2),
        m0=1,
        use_derived_constant=True,
    ),
}


# --------------------------------------------------------------------------
# double-sided error-bound fixtures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremBoundFixture:
    """Offsets for rate * q^-n * (n+offset)^-K0 error bounds on a ray."""

    verify_id: str
    series: str
    k: int
    threshold: int
    offsets: tuple[Fraction, Fraction]

    def sweep(self) -> tuple[int, int, int]:
        return (self.threshold, self.threshold + 2, self.threshold + 12)


THEOREM_BOUND_FIXTURES: dict[str, TheoremBoundFixture] = {
    "thm2-bounds": TheoremBoundFixture(
        verify_id="thm2-bounds",
        series="pi-bbp",
        k=9,
        threshold=88,
        offsets=(F(1), F(5)),
    ),
    "thm4-bounds": TheoremBoundFixture(
        verify_id="thm4-bounds",
        series="catalan-bbp",
        k=4,
        threshold=12,
        offsets=(F(0), F(5)),
    ),
    "thm6-bounds": TheoremBoundFixture(
        verify_id="thm6-bounds",
        series="pi2-bbp",
        k=3,
        threshold=15,
        offsets=(F(3, 2), F(1, 2)),
    ),
}
