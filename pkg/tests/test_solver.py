"""Correction-fraction derivation against the recorded tables.

Two kinds of assertions live here.  Regression tests pin the solver's
own exact output, including the places where it disagrees with the
recorded reference cells; those disagreements are stable and documented.
Strict-xfail tests state the recorded cells verbatim, so the suite will
flag loudly if the derivation ever starts matching them.
"""

from fractions import Fraction

import pytest

from cfaccel import tables
from cfaccel.model import parse_series, resolve_series
from cfaccel.polynomials import Polynomial
from cfaccel.solver import (
    CorrectionCF,
    ExactTermination,
    build_correction,
    correction_profile,
    mc_eval,
    verify_closed_form,
)

F = Fraction

_PROFILES = {}


def profile_for(verify_id):
    if verify_id not in _PROFILES:
        table = tables.COEFFICIENT_TABLES[verify_id]
        term = resolve_series(table.series)
        _PROFILES[verify_id] = correction_profile(term, table.max_k)
    return _PROFILES[verify_id]


# -- fully reproduced tables ----------------------------------------------


def test_pi_table_reproduced_exactly():
    table = tables.COEFFICIENT_TABLES["thm1-coefficients"]
    profile = profile_for("thm1-coefficients")
    head = profile[0][0]
    assert head.head_kind == "reciprocal"
    assert head.lambda0 == table.lambda0
    assert head.head_poly == Polynomial.make(table.head_poly)
    assert profile[-1][0].levels == table.levels
    for k, (_, info) in enumerate(profile):
        assert info.Ck == table.limit_constants[k]
        assert info.K0 == 2 * k + 5


def test_pi_sign_irregularities_are_derived():
    # The recorded table has two breaks in the sign pattern; both come
    # straight out of the derivation rather than being copied.
    profile = profile_for("thm1-coefficients")
    levels = profile[-1][0].levels
    a8, b8 = levels[7]
    assert a8 > 0 and all(a < 0 for a, _ in levels[1:7])
    assert b8 < 0 and all(b > 0 for _, b in levels[:7])
    cks = [info.Ck for _, info in profile]
    assert cks[7] > 0
    assert all(c < 0 for c in cks[:7]) and cks[8] < 0 and cks[9] < 0


def test_inverse_pi_table_reproduced_exactly():
    table = tables.COEFFICIENT_TABLES["sect2-coefficients"]
    profile = profile_for("sect2-coefficients")
    head = profile[0][0]
    assert head.head_kind == "polynomial"
    assert head.lambda0 == table.lambda0
    assert head.head_poly == Polynomial.make(table.head_poly)
    assert profile[-1][0].levels == table.levels
    for k, (_, info) in enumerate(profile):
        assert info.Ck == table.limit_constants[k]
        assert info.K0 == 2 * k + 1


# -- catalan: levels match, head and two limits do not ---------------------


def test_catalan_levels_match_recorded():
    table = tables.COEFFICIENT_TABLES["thm3-coefficients"]
    profile = profile_for("thm3-coefficients")
    assert profile[-1][0].levels == table.levels
    for k in (0, 1, 4):
        assert profile[k][1].Ck == table.limit_constants[k]
    for k, (_, info) in enumerate(profile):
        assert info.K0 == 2 * k + 5


def test_catalan_derived_diverges_from_recorded():
    table = tables.COEFFICIENT_TABLES["thm3-coefficients"]
    profile = profile_for("thm3-coefficients")
    head = profile[0][0]
    # recorded head constant is the reciprocal of the derived one
    assert head.lambda0 == F(-128, 3)
    assert table.lambda0 == F(-3, 128)
    assert head.lambda0 == 1 / table.lambda0
    assert head.head_poly == Polynomial.make(table.head_poly)
    # two limit constants differ from the recorded cells by sign only
    assert profile[2][1].Ck == -table.limit_constants[2]
    assert profile[3][1].Ck == -table.limit_constants[3]


@pytest.mark.xfail(
    strict=True,
    reason="recorded head constant and C_2/C_3 signs differ from the exact derivation",
)
def test_catalan_recorded_cells_verbatim():
    table = tables.COEFFICIENT_TABLES["thm3-coefficients"]
    profile = profile_for("thm3-coefficients")
    assert profile[0][0].lambda0 == table.lambda0
    for k, (_, info) in enumerate(profile):
        assert info.Ck == table.limit_constants[k]


# -- pi^2: the recorded table describes a different expansion --------------

PI2_TRUTH = {
    "lambda0": F(-81, 32),
    "head_poly": (F(13, 96), F(3, 4), F(1)),
    "levels": (
        (F(23, 576), F(971, 3312)),
        (F(-4295915, 10969344), F(15490236131, 14228070480)),
        (
            F(-5009509891746, 18454885687225),
            F(16641957056110748669, 14970732999373925280),
        ),
    ),
    "limits": (
        F(2093, 20736),
        F(390928265, 9889579008),
        F(28233952691, 2631288913920),
        F(155135944386058218583, 23974929356596552138752),
    ),
}


def test_pi2_solver_truth_regression():
    profile = profile_for("thm5-coefficients")
    head = profile[0][0]
    assert head.head_kind == "reciprocal"
    assert head.lambda0 == PI2_TRUTH["lambda0"]
    assert head.head_poly == Polynomial.make(PI2_TRUTH["head_poly"])
    assert profile[-1][0].levels == PI2_TRUTH["levels"]
    for k, (_, info) in enumerate(profile):
        assert info.Ck == PI2_TRUTH["limits"][k]
        assert info.K0 == 2 * k + 5


def test_pi2_recorded_cells_all_differ():
    table = tables.COEFFICIENT_TABLES["thm5-coefficients"]
    profile = profile_for("thm5-coefficients")
    assert profile[0][0].lambda0 != table.lambda0
    assert profile[0][0].head_poly != Polynomial.make(table.head_poly)
    derived_levels = profile[-1][0].levels
    for (da, db), (ra, rb) in zip(derived_levels, table.levels):
        assert da != ra and db != rb
    for k, (_, info) in enumerate(profile):
        assert info.Ck != table.limit_constants[k]


@pytest.mark.xfail(
    strict=True,
    reason="recorded cells do not describe this series' correction at any depth",
)
def test_pi2_recorded_cells_verbatim():
    table = tables.COEFFICIENT_TABLES["thm5-coefficients"]
    profile = profile_for("thm5-coefficients")
    assert profile[-1][0].levels == table.levels


# -- closed-form families --------------------------------------------------


def test_ln2_derived_levels():
    term = resolve_series("ln2")
    cf, info = build_correction(term, 3)
    assert cf.head_kind == "reciprocal"
    assert cf.lambda0 == 2
    assert cf.head_poly == Polynomial.make([1, 1])
    assert cf.levels == ((F(-2), F(4)), (F(-8), F(7)), (F(-18), F(10)))
    assert info.K0 == 9
    assert info.Ck == 9216


def test_central_binomial_family_reproduced():
    term = resolve_series("catalan-cb")
    family = next(
        f for f in tables.CLOSED_FORM_FAMILIES
        if f.series == "catalan-central-binomial"
    )
    assert verify_closed_form(term, 10, family.a_formula, family.b_formula) == []


def test_inverse_squares_family_reproduced():
    term = resolve_series("sq4m1")
    family = next(
        f for f in tables.CLOSED_FORM_FAMILIES if f.series == "inverse-squares-4m1"
    )
    assert verify_closed_form(term, 10, family.a_formula, family.b_formula) == []
    cf, _ = build_correction(term, 3)
    assert all(b == F(-1, 4) for _, b in cf.levels)


def test_ln2_family_a_matches_b_does_not():
    term = resolve_series("ln2")
    family = next(
        f for f in tables.CLOSED_FORM_FAMILIES if f.series == "ln2-mercator"
    )
    mismatches = verify_closed_form(term, 10, family.a_formula, family.b_formula)
    assert mismatches == [
        (k, "b", F(3 * k + 1), F(3 * k - 2)) for k in range(1, 11)
    ]


@pytest.mark.xfail(
    strict=True,
    reason="recorded b_k formula is offset by 3 from the derived partial denominators",
)
def test_ln2_recorded_b_formula_verbatim():
    term = resolve_series("ln2")
    family = next(
        f for f in tables.CLOSED_FORM_FAMILIES if f.series == "ln2-mercator"
    )
    assert verify_closed_form(term, 5, family.a_formula, family.b_formula) == []


# -- solver mechanics ------------------------------------------------------


def test_determinism():
    term = resolve_series("pi-bbp")
    assert build_correction(term, 3) == build_correction(term, 3)


def test_profile_matches_per_depth_builds():
    term = resolve_series("catalan-bbp")
    profile = correction_profile(term, 2)
    for k, (cf, info) in enumerate(profile):
        assert (cf, info) == build_correction(term, k)


def test_exact_termination_on_geometric_series():
    term = parse_series("[series]\nname=g\nbase=2\nr_num=1\nr_den=1\n")
    with pytest.raises(ExactTermination) as exc_info:
        build_correction(term, 2)
    exc = exc_info.value
    assert exc.level == 1
    cf = exc.cf
    assert cf.depth == 0
    assert cf.head_kind == "polynomial"
    assert cf.head_poly == Polynomial.constant(2)
    # the exact tail: sum_{m>=n} 2^-m = 2^-n * 2
    assert mc_eval(cf, 9) == 2
    with pytest.raises(ExactTermination):
        build_correction(term, 0)


def test_budget_env_override_is_neutral(monkeypatch):
    term = resolve_series("pi-bbp")
    reference = build_correction(term, 2)
    monkeypatch.setenv("CFACCEL_BUDGET", "40")
    assert build_correction(term, 2) == reference


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        build_correction(resolve_series("pi-bbp"), -1)
    with pytest.raises(ValueError):
        correction_profile(resolve_series("pi-bbp"), -1)


def test_mc_eval_pole_messages():
    cf = CorrectionCF(
        head_kind="reciprocal",
        head_poly=Polynomial.make([0, 1]),
        lambda0=F(1),
        kappa0=1,
        levels=((F(1), F(-5)),),
    )
    with pytest.raises(ZeroDivisionError, match="denominator of level 1 vanishes at n=5"):
        mc_eval(cf, 5)
    head_only = CorrectionCF(
        head_kind="reciprocal",
        head_poly=Polynomial.make([-3, 1]),
        lambda0=F(1),
        kappa0=1,
        levels=(),
    )
    with pytest.raises(ZeroDivisionError, match="head denominator vanishes at n=3"):
        mc_eval(head_only, 3)
