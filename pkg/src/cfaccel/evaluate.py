"""Exact partial sums, rigorous enclosures, and error-law verification.

The reference value of every constant is an enclosure computed from its
own series: once the tail terms are certified sign-definite with a
certified geometric ratio bound r_bar < 1, the tail after N is trapped
between 0 and t_N/(1 - r_bar).  Everything downstream (error terms,
scaled-limit checks, double-sided bound verification, digit printing) is
exact interval arithmetic over that enclosure.

Module-level caches memoize per-term tail certificates and partial-sum
prefixes.  All operations stay pure; the caches only shortcut identical
recomputation and are safe to share across threads on the usual
one-writer-wins terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .model import (
    BBPTerm,
    factorial_part,
    kernel,
    resolve_series,
    term_ratio,
    term_value,
)
from .polynomials import RationalFunction
from .positivity import SignCertificate, Verdict, prove_sign_on_ray
from .rationals import Rational
from .solver import CorrectionCF, ResidualInfo, build_correction, mc_eval
from . import tables

__all__ = [
    "Enclosure",
    "ErrorReport",
    "EnclosureError",
    "RateCheckResult",
    "BoundEntry",
    "BoundsCheckResult",
    "DigitResult",
    "partial_sum",
    "alpha_enclosure",
    "error_term",
    "error_report",
    "rate_limit_constant",
    "rate_check",
    "theorem_bounds_check",
    "digits",
]


class EnclosureError(ValueError):
    """Raised when no rigorous tail bound can be certified."""


@dataclass(frozen=True)
class Enclosure:
    """Exact rational interval [lo, hi] containing the true value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("enclosure ends out of order")

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def subset_of(self, other: "Enclosure") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def shifted(self, x: Rational) -> "Enclosure":
        return Enclosure(self.lo + x, self.hi + x)

    def scaled(self, c: Rational) -> "Enclosure":
        ends = (self.lo * c, self.hi * c)
        return Enclosure(min(ends), max(ends))


@dataclass(frozen=True)
class ErrorReport:
    """Error-term enclosure at one n with its scaled-limit comparison."""

    n: int
    k: int
    E: Enclosure
    scaled: Enclosure
    expected_limit: Fraction


# --------------------------------------------------------------------------
# partial sums
# --------------------------------------------------------------------------

_SUM_CACHE: dict[BBPTerm, dict[int, Fraction]] = {}


def partial_sum(term: BBPTerm, n: int) -> Fraction:
    """Exact sum of t_m for m in [start, n).  The prefactor is excluded."""
    if n < term.start_index:
        raise ValueError(f"n={n} precedes start index {term.start_index}")
    cache = _SUM_CACHE.setdefault(term, {term.start_index: Fraction(0)})
    if n in cache:
        return cache[n]
    base = max(m for m in cache if m <= n)
    acc = cache[base]
    for m in range(base, n):
        acc += term_value(term, m)
    cache[n] = acc
    return acc


# --------------------------------------------------------------------------
# certified geometric tails
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TailCertificate:
    """Everything needed to trap a series tail geometrically.

    For m >= ray_start, R keeps the certified sign and consecutive terms
    satisfy |t_{m+1}| <= ratio_bound * |t_m|; the ratio_bound stays fixed
    per term so that refined enclosures nest exactly.
    """

    ray_start: int
    ratio_bound: Fraction
    sign: int
    sign_certificate: SignCertificate
    ratio_certificate: SignCertificate


_TAIL_CACHE: dict[BBPTerm, Optional[TailCertificate]] = {}
_RATIO_LADDER = tuple(range(10, 0, -1))
_RAY_SEARCH_SPAN = 8
_PRESCAN_SPAN = 40


def _kernel_limit(term: BBPTerm) -> Optional[Fraction]:
    """lim kernel(m) as m -> infinity, or None when it diverges."""
    k = kernel(term)
    if k.num.degree < k.den.degree:
        return Fraction(0)
    if k.num.degree == k.den.degree:
        return k.num.leading / k.den.leading
    return None


def _prescan_ok(f: RationalFunction, n0: int, want_positive: bool) -> bool:
    """Cheap exact spot check before paying for a shift certificate."""
    for m in range(n0, n0 + _PRESCAN_SPAN):
        try:
            value = f(m)
        except ZeroDivisionError:
            return False
        if value == 0 or (value > 0) != want_positive:
            return False
    return True


def tail_certificate(term: BBPTerm) -> Optional[TailCertificate]:
    """Certify a fixed geometric majorant for the term's tail, or None.

    Tries the tightest ratio bound first (limit plus a 2^-10 sliver of
    the headroom), loosening stepwise, and for each candidate searches a
    few ray starts for simultaneous success of the R-sign certificate and
    the ratio-bound certificate.  Terms whose consecutive-term ratio
    tends to 1 (or beyond) admit no such bound and yield None.
    """
    if term in _TAIL_CACHE:
        return _TAIL_CACHE[term]
    certificate = _search_tail_certificate(term)
    _TAIL_CACHE[term] = certificate
    return certificate


def _search_tail_certificate(term: BBPTerm) -> Optional[TailCertificate]:
    r = _kernel_limit(term)
    if r is None or r >= 1:
        return None
    ratio = term_ratio(term)
    sign_certs: dict[int, Optional[SignCertificate]] = {}
    for j in _RATIO_LADDER:
        r_bar = r + (1 - r) / 2**j
        margin = RationalFunction.constant(r_bar) - ratio
        for n0 in range(term.start_index, term.start_index + _RAY_SEARCH_SPAN):
            if n0 not in sign_certs:
                positive_first = term.R(n0) > 0
                if not _prescan_ok(term.R, n0, positive_first):
                    sign_certs[n0] = None
                else:
                    cert = prove_sign_on_ray(term.R, n0)
                    sign_certs[n0] = cert if cert.proven else None
            sign_cert = sign_certs[n0]
            if sign_cert is None:
                continue
            if not _prescan_ok(margin, n0, True):
                continue
            ratio_cert = prove_sign_on_ray(margin, n0)
            if ratio_cert.verdict is Verdict.PROVEN_POSITIVE:
                return TailCertificate(
                    ray_start=n0,
                    ratio_bound=r_bar,
                    sign=sign_cert.sign(),
                    sign_certificate=sign_cert,
                    ratio_certificate=ratio_cert,
                )
    return None


def alpha_enclosure(term: BBPTerm, N: int) -> Enclosure:
    """Enclosure of the full series value using the certified tail bound.

    Returns [prefactor*S_N, prefactor*(S_N + t_N/(1-r_bar))] with the
    ends ordered (the tail keeps t_N's sign, so one end is the bare
    partial sum and the other absorbs the whole geometric majorant).
    """
    certificate = tail_certificate(term)
    if certificate is None or N < certificate.ray_start:
        raise EnclosureError(f"cannot certify tail at N={N}")
    s = partial_sum(term, N)
    t = term_value(term, N)
    far = s + t / (1 - certificate.ratio_bound)
    ends = (term.prefactor * s, term.prefactor * far)
    return Enclosure(min(ends), max(ends))


# --------------------------------------------------------------------------
# error terms and their scaled limits
# --------------------------------------------------------------------------


def _default_reference(n: int) -> int:
    return max(4 * n, n + 60)


def corrected_value(term: BBPTerm, cf: Optional[CorrectionCF], n: int) -> Fraction:
    """prefactor * (S_n + F(n) q^-n MC(n)), or the bare prefixed sum."""
    value = partial_sum(term, n)
    if cf is not None:
        scale = factorial_part(term, n) / term.base_q**n
        value = value + scale * mc_eval(cf, n)
    return term.prefactor * value


def error_term(
    term: BBPTerm,
    cf: CorrectionCF,
    n: int,
    N_ref: Optional[int] = None,
) -> Enclosure:
    """Enclosure of E_k(n) = alpha - prefactor*(S_n + F(n) q^-n MC_k(n))."""
    if n < term.start_index:
        raise ValueError(f"n={n} precedes start index {term.start_index}")
    certificate = tail_certificate(term)
    if certificate is None:
        raise EnclosureError(f"cannot certify tail at N={n}")
    if N_ref is None:
        N_ref = max(_default_reference(n), certificate.ray_start)
    alpha = alpha_enclosure(term, N_ref)
    return alpha.shifted(-corrected_value(term, cf, n))


def rate_limit_constant(term: BBPTerm, info: ResidualInfo) -> Fraction:
    """Expected limit of the scaled error: prefactor * Ck / (1 - r)."""
    r = _kernel_limit(term)
    if r is None or abs(r) >= 1:
        raise ValueError(f"no limiting term ratio below 1 for {term.name!r}")
    return term.prefactor * info.Ck / (1 - r)


def error_report(
    term: BBPTerm,
    cf: CorrectionCF,
    info: ResidualInfo,
    n: int,
    N_ref: Optional[int] = None,
) -> ErrorReport:
    """Error enclosure at n together with its scaled-limit comparison.

    The scale factor is q^n n^K0 / F(n); dividing by the factorial part
    mirrors how the factorial-series limit statement is normalized.
    """
    if n <= 0:
        raise ValueError("scaled reports need n >= 1")
    E = error_term(term, cf, n, N_ref)
    scale = term.base_q**n * Fraction(n) ** info.K0 / factorial_part(term, n)
    return ErrorReport(
        n=n,
        k=cf.depth,
        E=E,
        scaled=E.scaled(scale),
        expected_limit=rate_limit_constant(term, info),
    )


@dataclass(frozen=True)
class RateCheckResult:
    reports: tuple[ErrorReport, ...]
    deviations: tuple[Fraction, ...]
    within: tuple[bool, ...]
    monotone: bool
    rel_tol: Fraction

    @property
    def all_within(self) -> bool:
        return all(self.within)


def rate_check(
    term: BBPTerm,
    cf: CorrectionCF,
    info: ResidualInfo,
    n_list: Sequence[int],
    rel_tol: Rational = Fraction(1, 10),
) -> RateCheckResult:
    """Check the scaled error against its expected limit over an n sweep.

    Each n gets a within-tolerance flag for |midpoint/expected - 1|, and
    the sweep as a whole a strict-monotone-approach flag.
    """
    if list(n_list) != sorted(set(n_list)):
        raise ValueError("n_list must be strictly ascending")
    rel_tol = Fraction(rel_tol)
    reports = tuple(error_report(term, cf, info, n) for n in n_list)
    deviations = tuple(
        abs(r.scaled.midpoint() / r.expected_limit - 1) for r in reports
    )
    within = tuple(d <= rel_tol for d in deviations)
    monotone = all(b < a for a, b in zip(deviations, deviations[1:]))
    return RateCheckResult(
        reports=reports,
        deviations=deviations,
        within=within,
        monotone=monotone,
        rel_tol=rel_tol,
    )


# --------------------------------------------------------------------------
# double-sided bound verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    n: int
    E: Enclosure
    lower_bound: Fraction
    upper_bound: Fraction
    verdict: str  # "pass" | "fail" | "indeterminate"
    nearer_gap: Optional[Fraction]
    width_ok: bool


@dataclass(frozen=True)
class BoundsCheckResult:
    fixture_id: str
    k: int
    entries: tuple[BoundEntry, ...]

    @property
    def verdict(self) -> str:
        verdicts = {e.verdict for e in self.entries}
        if verdicts == {"pass"}:
            return "pass"
        if "fail" in verdicts:
            return "fail"
        return "indeterminate"

    @property
    def all_width_ok(self) -> bool:
        return all(e.width_ok for e in self.entries)


_REFINEMENT_CAP = 16


def theorem_bounds_check(
    fixture_id: str, n_list: Optional[Sequence[int]] = None
) -> BoundsCheckResult:
    """Verify rate*q^-n*(n+offset)^-K0 double bounds on the error term.

    The two offsets give the two bound values (their order sorts itself
    out by magnitude).  An enclosure that straddles a bound triggers
    N_ref doubling up to 16x the default before the entry is reported
    indeterminate.
    """
    try:
        fixture = tables.THEOREM_BOUND_FIXTURES[fixture_id]
    except KeyError:
        raise ValueError(f"unknown bounds fixture {fixture_id!r}") from None
    term = resolve_series(fixture.series)
    cf, info = build_correction(term, fixture.k)
    rate = rate_limit_constant(term, info)
    if n_list is None:
        n_list = fixture.sweep()
    entries = []
    for n in n_list:
        if n < fixture.threshold:
            raise ValueError(
                f"n={n} is below the {fixture_id} threshold {fixture.threshold}"
            )
        scale = factorial_part(term, n) / term.base_q**n
        bounds = sorted(
            rate * scale / (n + offset) ** info.K0 for offset in fixture.offsets
        )
        lower, upper = bounds
        base_ref = max(_default_reference(n), 1)
        n_ref = base_ref
        while True:
            E = error_term(term, cf, n, N_ref=n_ref)
            if lower < E.lo and E.hi < upper:
                verdict = "pass"
                break
            if E.hi < lower or E.lo > upper:
                verdict = "fail"
                break
            if n_ref >= _REFINEMENT_CAP * base_ref:
                verdict = "indeterminate"
                break
            n_ref *= 2
        nearer = min(E.lo - lower, upper - E.hi) if verdict == "pass" else None
        width_ok = verdict == "pass" and E.width() * 10 <= nearer
        entries.append(
            BoundEntry(
                n=n,
                E=E,
                lower_bound=lower,
                upper_bound=upper,
                verdict=verdict,
                nearer_gap=nearer,
                width_ok=width_ok,
            )
        )
    return BoundsCheckResult(fixture_id=fixture_id, k=fixture.k, entries=tuple(entries))


# --------------------------------------------------------------------------
# certified digit rendering
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DigitResult:
    text: str
    certified: int


_DIGIT_CHARS = "0123456789abcdef"
_DIGIT_CAP = 240


def digits(
    term: BBPTerm,
    cf: Optional[CorrectionCF],
    n: int,
    base: int = 10,
) -> DigitResult:
    """Digits of the (optionally corrected) approximation at n that are
    provably digits of the series value.

    The approximation is compared against a tight enclosure of the full
    value; the returned string stops at the last digit on which the
    approximation and both enclosure ends agree.  With nothing certified
    the result is "0" with zero digits.
    """
    if base not in (10, 16):
        raise ValueError("base must be 10 or 16")
    if n < term.start_index:
        raise ValueError(f"n={n} precedes start index {term.start_index}")
    approx = corrected_value(term, cf, n)
    certificate = tail_certificate(term)
    if certificate is None:
        return DigitResult("0", 0)
    reference = max(n, _default_reference(n), certificate.ray_start)
    enclosure = alpha_enclosure(term, reference)
    return _certified_digits(approx, enclosure, base)


def _certified_digits(approx: Fraction, enclosure: Enclosure, base: int) -> DigitResult:
    if approx <= 0 or enclosure.lo <= 0:
        return DigitResult("0", 0)
    whole = int(approx)
    if int(enclosure.lo) != whole or int(enclosure.hi) != whole:
        return DigitResult("0", 0)
    parts = [approx - whole, enclosure.lo - whole, enclosure.hi - whole]
    rendered = []
    while len(rendered) < _DIGIT_CAP:
        parts = [p * base for p in parts]
        ds = [int(p) for p in parts]
        if len(set(ds)) != 1:
            break
        rendered.append(_DIGIT_CHARS[ds[0]])
        parts = [p - d for p, d in zip(parts, ds)]
    if not rendered:
        return DigitResult(str(whole), 0)
    return DigitResult(f"{whole}." + "".join(rendered), len(rendered))
