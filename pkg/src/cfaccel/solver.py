"""Derivation of finite continued-fraction correction terms.

Given a term t_m = R(m) F(m) / q**m, the tail y*(n) = q**n / F(n) *
sum_{m>=n} t_m satisfies the difference equation

    y(m) - kernel(m) * y(m+1) - R(m) = 0,

with kernel(m) = F(m+1)/(q F(m)).  The solver builds an approximate
solution MC_k of continued-fraction shape

    head(m) + a_1/(m + b_1 + a_2/(m + b_2 + ...))

level by level, choosing every unknown so that the residual

    MC_k(m) - kernel(m) MC_k(m+1) - R(m)

vanishes to the highest possible order as m -> infinity.  Each residual
coefficient is an affine function of the next unknown, so evaluating it
at two points pins the root; no general linear algebra is needed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from .model import BBPTerm, kernel
from .polynomials import Polynomial, RationalFunction
from .rationals import Rational
from .series import AsymptoticSeries, _expand_pair


class SolverError(Exception):
    """Base class for derivation failures."""


class TieError(SolverError):
    """Two head candidates cancel the residual equally well."""


class DegenerateLevel(SolverError):
    """A level's linear solve has a vanishing pivot on a nonzero residual."""


class BudgetExceeded(SolverError):
    """The expansion budget was doubled past its cap without resolving."""


class ExactTermination(SolverError):
    """The residual vanished identically before the requested depth.

    This is a success state, not a failure: the tail is exactly a
    rational function times F(n)/q**n.  The completed correction is
    carried on the exception.
    """

    def __init__(self, cf: "CorrectionCF", level: int):
        super().__init__(
            f"residual vanished identically before level {level}; "
            "the correction is exact"
        )
        self.cf = cf
        self.level = level


@dataclass(frozen=True)
class CorrectionCF:
    """A correction function in nested continued-fraction form.

    head_kind selects the outer shape: "reciprocal" means
    lambda0 / (head_poly(m) + tail) with head_poly monic of degree
    kappa0 > 0; "polynomial" means head_poly(m) + tail with head_poly of
    degree -kappa0 and leading coefficient lambda0.  levels holds the
    (a_j, b_j) pairs, outermost first.
    """

    head_kind: str
    head_poly: Polynomial
    lambda0: Fraction
    kappa0: int
    levels: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if self.head_kind not in ("reciprocal", "polynomial"):
            raise ValueError(f"bad head_kind {self.head_kind!r}")
        expected = self.kappa0 if self.head_kind == "reciprocal" else -self.kappa0
        if self.head_poly.degree != expected:
            raise ValueError(
                f"head degree {self.head_poly.degree} does not match "
                f"kappa0={self.kappa0}"
            )

    @property
    def depth(self) -> int:
        return len(self.levels)

    def as_pair(self) -> tuple[Polynomial, Polynomial]:
        """The whole fraction as an unreduced numerator/denominator pair.

        Built bottom-up: the innermost tail a_k/(m+b_k) is widened one
        level at a time, then the head wraps the result.
        """
        tail_num = Polynomial.make([])
        tail_den = Polynomial.make([1])
        for a, b in reversed(self.levels):
            tail_num, tail_den = (
                tail_den.scale(a),
                Polynomial.make([b, 1]) * tail_den + tail_num,
            )
        if self.head_kind == "reciprocal":
            return tail_den.scale(self.lambda0), self.head_poly * tail_den + tail_num
        return self.head_poly * tail_den + tail_num, tail_den


@dataclass(frozen=True)
class ResidualInfo:
    """Leading behavior of the residual after k correction levels.

    The residual expands as -Ck/m**K0 - next/m**(K0+1) - ..., so Ck is
    minus the leading coefficient; the error term inherits the sign of
    Ck.  next_order_coefficient is None when the expansion budget did
    not reach one order past the leading term.
    """

    K0: int
    Ck: Fraction
    next_order_coefficient: Fraction | None


@dataclass(frozen=True)
class SolverState:
    """Everything the step functions thread through."""

    term: BBPTerm
    cf: CorrectionCF
    residual_series: AsymptoticSeries
    expansion_budget: int


_BUDGET_ENV = "CFACCEL_BUDGET"
_BUDGET_GROWTH_CAP = 8


def _base_budget(k: int) -> int:
    env = os.environ.get(_BUDGET_ENV)
    if env:
        return int(env)
    return 2 * k + 12


def _difference_pair(
    cf: CorrectionCF, kern: RationalFunction, R: RationalFunction
) -> tuple[Polynomial, Polynomial]:
    """MC(m) - kernel(m) MC(m+1) - R(m) as one unreduced pair.

    Reduction is deliberately skipped: the pair only feeds the series
    expander and exact pointwise evaluation, and the gcd of these
    products is expensive out of all proportion to either use.
    """
    n1, d1 = cf.as_pair()
    n2 = n1.shift(1)
    d2 = d1.shift(1)
    den = d1 * d2 * kern.den * R.den
    t1 = n1 * d2 * kern.den * R.den
    t2 = kern.num * n2 * d1 * R.den
    t3 = R.num * d1 * d2 * kern.den
    return t1 - t2 - t3, den


def residual_pair(term: BBPTerm, cf: CorrectionCF) -> tuple[Polynomial, Polynomial]:
    """Public access to the unreduced residual pair for a term."""
    return _difference_pair(cf, kernel(term), term.R)


def _expand(num: Polynomial, den: Polynomial, budget: int) -> AsymptoticSeries:
    """Expand num/den at infinity, budget coefficients past the apparent order."""
    if num.is_zero:
        return AsymptoticSeries.zero(known_through=den.degree + budget)
    e0 = den.degree - num.degree
    return _expand_pair(num, den, e0 + budget - 1)


def _leading(series: AsymptoticSeries) -> tuple[int, Fraction, Fraction | None] | None:
    """(exponent, coefficient, next coefficient) or None if zero throughout."""
    if series.is_zero:
        return None
    e = series.leading_exponent
    c = series.coefficients[0]
    nxt = series.coefficients[1] if series.truncation_order >= 1 else None
    return e, c, nxt


def _coefficient(series: AsymptoticSeries, exponent: int) -> Fraction:
    return series.coefficient_at(exponent)


def initial_exponent(term: BBPTerm) -> tuple[int, Fraction]:
    """Choose the zeroth-correction shape (kappa0, lambda0).

    Candidates kappa in a window around the decay order of R are scored
    by how many orders of the residual lambda * G_kappa - R cancel,
    where G_kappa(m) = 1/m**kappa - kernel(m)/(m+1)**kappa (positive
    kappa) or m**kappa's polynomial analogue (kappa <= 0).  lambda is
    forced by matching leading coefficients.  A tie between two best
    candidates is an error rather than a guess.
    """
    kern = kernel(term)
    R = term.R
    e_R = R.den.degree - R.num.degree
    c_R = R.num.leading / R.den.leading
    budget = _base_budget(0)
    scored: list[tuple[int, int, Fraction]] = []
    for kappa in range(e_R - 3, e_R + 4):
        d = abs(kappa)
        mono = Polynomial.make([0] * d + [1])
        mono_shift = mono.shift(1)
        if kappa >= 0:
            g_num = mono_shift * kern.den - kern.num * mono
            g_den = mono * mono_shift * kern.den
        else:
            g_num = mono * kern.den - kern.num * mono_shift
            g_den = kern.den
        lead = _leading(_expand(g_num, g_den, budget))
        if lead is None or lead[0] != e_R:
            continue
        lam = c_R / lead[1]
        res_num = g_num.scale(lam) * R.den - R.num * g_den
        res_den = g_den * R.den
        lead_res = _leading(_expand(res_num, res_den, budget))
        score = 10**9 if lead_res is None else lead_res[0]
        scored.append((score, kappa, lam))
    if not scored:
        raise SolverError("no head exponent matches the decay order of R")
    scored.sort(key=lambda t: (-t[0], t[1]))
    if len(scored) > 1 and scored[0][0] == scored[1][0]:
        raise TieError(
            f"head candidates kappa={scored[0][1]} and kappa={scored[1][1]} "
            "cancel the residual to the same order"
        )
    _, kappa0, lambda0 = scored[0]
    return kappa0, lambda0


def _initial_cf(kappa0: int, lambda0: Fraction) -> CorrectionCF:
    if kappa0 > 0:
        head = Polynomial.make([0] * kappa0 + [1])
        return CorrectionCF("reciprocal", head, lambda0, kappa0, ())
    head = Polynomial.make([0] * (-kappa0) + [lambda0])
    return CorrectionCF("polynomial", head, lambda0, kappa0, ())


class _NeedMoreTerms(Exception):
    pass


def _residual_leading_with_budget(
    term: BBPTerm, cf: CorrectionCF, budget: int
) -> tuple[AsymptoticSeries, tuple[int, Fraction, Fraction | None] | None, bool]:
    """Expanded residual, its leading data, and structural-zero flag.

    A residual whose numerator polynomial is identically zero is exact;
    one that merely expands to zero within the budget is not, and the
    distinction decides between ExactTermination and a budget retry.
    """
    num, den = _difference_pair(cf, kernel(term), term.R)
    series = _expand(num, den, budget)
    return series, _leading(series), num.is_zero


def _solve_affine(
    term: BBPTerm,
    make: Callable[[Fraction], CorrectionCF],
    target_exponent: int,
    budget: int,
) -> Fraction:
    """Root of the affine map u -> residual coefficient at target_exponent.

    Two evaluations determine the line; a zero pivot means the
    coefficient does not depend on this unknown at all.
    """

    def coeff(u: Fraction) -> Fraction:
        num, den = _difference_pair(make(u), kernel(term), term.R)
        series = _expand(num, den, budget)
        if series.known_through < target_exponent:
            raise _NeedMoreTerms
        return _coefficient(series, target_exponent)

    c0 = coeff(Fraction(0))
    c1 = coeff(Fraction(1))
    pivot = c1 - c0
    if pivot == 0:
        raise DegenerateLevel(
            f"coefficient at order {target_exponent} is independent of the unknown"
        )
    return -c0 / pivot


def _with_budget_retry(k: int, fn: Callable[[int], "SolverState"]) -> "SolverState":
    budget = _base_budget(k)
    cap = budget * _BUDGET_GROWTH_CAP
    while True:
        try:
            return fn(budget)
        except _NeedMoreTerms:
            budget *= 2
            if budget > cap:
                raise BudgetExceeded(
                    f"expansion budget exceeded {cap} coefficients"
                ) from None


def solve_head(term: BBPTerm, budget: int | None = None) -> SolverState:
    """Derive the zeroth correction: shape choice plus head coefficients.

    Unknown head coefficients are filled highest degree first, the
    constant term included, each chosen to kill the current leading
    residual order.
    """
    kappa0, lambda0 = initial_exponent(term)

    def run(b: int) -> SolverState:
        cf = _initial_cf(kappa0, lambda0)
        unknown_degrees = list(range(abs(kappa0) - 1, -1, -1))
        for deg in unknown_degrees:
            _, lead, exact = _residual_leading_with_budget(term, cf, b)
            if lead is None:
                if exact:
                    break
                raise _NeedMoreTerms
            target = lead[0]

            def rebuild(u: Fraction, deg=deg, cf=cf) -> CorrectionCF:
                coeffs = list(cf.head_poly.coeffs)
                coeffs[deg] = u
                return replace(cf, head_poly=Polynomial.make(coeffs))

            u = _solve_affine(term, rebuild, target, b)
            cf = rebuild(u)
        series, _, _ = _residual_leading_with_budget(term, cf, b)
        return SolverState(term=term, cf=cf, residual_series=series, expansion_budget=b)

    return _with_budget_retry(0, run)


def extend_level(state: SolverState) -> SolverState:
    """Append one correction level (a_j, b_j) to the fraction.

    a_j kills the current leading residual order with b_j held at 0;
    b_j then kills the next.  A residual that is already identically
    zero raises ExactTermination carrying the finished fraction.
    """
    term = state.term
    j = state.cf.depth + 1

    def run(b: int) -> SolverState:
        cf = state.cf
        series, lead, exact = _residual_leading_with_budget(term, cf, b)
        if lead is None:
            if exact:
                raise ExactTermination(cf, j)
            raise _NeedMoreTerms

        def with_a(u: Fraction) -> CorrectionCF:
            return replace(cf, levels=cf.levels + ((u, Fraction(0)),))

        a = _solve_affine(term, with_a, lead[0], b)
        if a == 0:
            raise ExactTermination(cf, j)
        _, lead_after_a, exact_a = _residual_leading_with_budget(term, with_a(a), b)
        if lead_after_a is None:
            if exact_a:
                raise ExactTermination(with_a(a), j)
            raise _NeedMoreTerms

        def with_b(u: Fraction) -> CorrectionCF:
            return replace(cf, levels=cf.levels + ((a, u),))

        bj = _solve_affine(term, with_b, lead_after_a[0], b)
        new_cf = with_b(bj)
        new_series, _, _ = _residual_leading_with_budget(term, new_cf, b)
        return SolverState(
            term=term, cf=new_cf, residual_series=new_series, expansion_budget=b
        )

    return _with_budget_retry(j, run)


def residual_leading(state: SolverState) -> ResidualInfo:
    """Read (K0, Ck, next) off the residual series, re-expanding if needed."""
    series = state.residual_series
    lead = _leading(series)
    if lead is None or lead[2] is None:
        k = state.cf.depth

        def run(b: int) -> SolverState:
            s, l, exact = _residual_leading_with_budget(state.term, state.cf, b)
            if exact:
                raise SolverError(
                    "residual is identically zero; there is no leading order "
                    "(use the ExactTermination path)"
                )
            if l is None or l[2] is None:
                raise _NeedMoreTerms
            return replace(state, residual_series=s, expansion_budget=b)

        try:
            state = _with_budget_retry(k + 1, run)
        except BudgetExceeded:
            if lead is None:
                raise SolverError(
                    "residual is zero to the maximum budget; "
                    "use the ExactTermination path"
                ) from None
            return ResidualInfo(K0=lead[0], Ck=-lead[1], next_order_coefficient=None)
        lead = _leading(state.residual_series)
    e, c, nxt = lead
    return ResidualInfo(
        K0=e, Ck=-c, next_order_coefficient=None if nxt is None else -nxt
    )


def build_correction(term: BBPTerm, k: int) -> tuple[CorrectionCF, ResidualInfo]:
    """Head plus k levels, with the final residual's leading data.

    ExactTermination propagates to the caller: a terminating series is
    better than requested, and the caller decides how to present that.
    """
    if k < 0:
        raise ValueError("correction depth must be nonnegative")
    state = solve_head(term)
    for _ in range(k):
        state = extend_level(state)
    _raise_if_exact(term, state.cf)
    return state.cf, residual_leading(state)


def _raise_if_exact(term: BBPTerm, cf: CorrectionCF) -> None:
    num, _ = _difference_pair(cf, kernel(term), term.R)
    if num.is_zero:
        raise ExactTermination(cf, cf.depth + 1)


def correction_profile(
    term: BBPTerm, k_max: int
) -> list[tuple[CorrectionCF, ResidualInfo]]:
    """One solver pass recording (cf, residual info) at every depth 0..k_max.

    Equivalent to calling build_correction for each depth, but each level
    is derived once, which keeps whole-table verification roughly linear
    in k_max instead of quadratic.
    """
    if k_max < 0:
        raise ValueError("correction depth must be nonnegative")
    state = solve_head(term)
    profile = []
    for k in range(k_max + 1):
        _raise_if_exact(term, state.cf)
        profile.append((state.cf, residual_leading(state)))
        if k < k_max:
            state = extend_level(state)
    return profile


def mc_eval(cf: CorrectionCF, n: Rational) -> Fraction:
    """Exact value of the fraction at n, innermost level outward.

    Matches the nested form literally so that a vanishing intermediate
    denominator is reported with its level index instead of surfacing
    as a bare division error.
    """
    n = Fraction(n)
    tail = Fraction(0)
    for idx in range(len(cf.levels), 0, -1):
        a, b = cf.levels[idx - 1]
        den = n + b + tail
        if den == 0:
            raise ZeroDivisionError(f"denominator of level {idx} vanishes at n={n}")
        tail = a / den
    if cf.head_kind == "reciprocal":
        den = cf.head_poly(n) + tail
        if den == 0:
            raise ZeroDivisionError(f"head denominator vanishes at n={n}")
        return cf.lambda0 / den
    return cf.head_poly(n) + tail


def verify_closed_form(
    term: BBPTerm,
    k_max: int,
    a_of: Callable[[int], Rational],
    b_of: Callable[[int], Rational] | None = None,
) -> list[tuple[int, str, Fraction, Fraction]]:
    """Compare derived levels against closed-form families a_k, b_k.

    Returns a list of mismatches (k, which, derived, expected); empty
    means the family reproduces the solver exactly up to k_max.
    """
    state = solve_head(term)
    mismatches = []
    for k in range(1, k_max + 1):
        state = extend_level(state)
        a, b = state.cf.levels[-1]
        ea = Fraction(a_of(k))
        if a != ea:
            mismatches.append((k, "a", a, ea))
        if b_of is not None:
            eb = Fraction(b_of(k))
            if b != eb:
                mismatches.append((k, "b", b, eb))
    return mismatches
