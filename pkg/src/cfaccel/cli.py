"""Command-line front end: compute, solve, verify, certify, catalog.

Every command funnels its result through one payload dict, so the text
rendering and the JSON rendering always carry the same verdicts.  Exit
codes: 0 all checks pass, 1 operational error or failed check, 2 a
certificate or verification came back indeterminate (nothing failed,
but nothing was proven either).

All rationals in output are exact "num/den" strings; where a human
summary wants a magnitude, an exactly truncated decimal is printed with
a tilde.  No floating point is involved anywhere.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import tables
from .evaluate import (
    EnclosureError,
    digits,
    rate_check,
    rate_limit_constant,
    theorem_bounds_check,
)
from .model import SeriesFormatError, catalog, factorial_part, resolve_series
from .polynomials import Polynomial
from .positivity import certify_second_order_bracket, certify_tail_bound
from .rationals import format_rational
from .reports import from_error_report, report_entry
from .solver import (
    CorrectionCF,
    ExactTermination,
    ResidualInfo,
    SolverError,
    build_correction,
    correction_profile,
    verify_closed_form,
)

__all__ = ["RunConfig", "main", "parse_n_spec", "format_poly"]


@dataclass
class RunConfig:
    """Parsed invocation: one command plus its knobs."""

    command: str
    series: Optional[str] = None
    k: Optional[int] = None
    n: Optional[str] = None
    base: int = 10
    output: str = "text"
    report_path: Optional[str] = None
    fixture: Optional[str] = None
    lemma: Optional[str] = None


def parse_n_spec(spec: str) -> list[int]:
    """Parse an n list: "12", "15,25,50", "88..92", or mixes thereof."""
    values: list[int] = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        try:
            if ".." in chunk:
                lo_text, _, hi_text = chunk.partition("..")
                lo, hi = int(lo_text), int(hi_text)
                if hi < lo:
                    raise ValueError
                values.extend(range(lo, hi + 1))
            else:
                values.append(int(chunk))
        except ValueError:
            raise ValueError(f"bad n spec {spec!r}") from None
    return values


def format_poly(p: Polynomial, var: str = "m") -> str:
    """Human form, highest power first: "m^2 + 7/8*m - 3/32"."""
    if p.is_zero:
        return "0"
    pieces = []
    for e in range(p.degree, -1, -1):
        c = p.coeffs[e]
        if c == 0:
            continue
        if e == 0:
            body = format_rational(abs(c))
        else:
            lead = "" if abs(c) == 1 else f"{format_rational(abs(c))}*"
            power = f"^{e}" if e > 1 else ""
            body = f"{lead}{var}{power}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def _approx_decimal(x: Fraction, places: int = 4) -> str:
    """Exactly truncated decimal for human-readable magnitudes."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    scaled = abs(x) * 10**places
    whole, frac = divmod(int(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def _cf_payload(cf: CorrectionCF, info: Optional[ResidualInfo]) -> dict[str, Any]:
    """Full correction fraction, coefficients lowest power first."""
    out: dict[str, Any] = {
        "head_kind": cf.head_kind,
        "lambda0": format_rational(cf.lambda0),
        "kappa0": cf.kappa0,
        "head_poly": [format_rational(c) for c in cf.head_poly.coeffs],
        "levels": [
            [format_rational(a), format_rational(b)] for a, b in cf.levels
        ],
        "k": cf.depth,
    }
    if info is not None:
        out["K0"] = info.K0
        out["Ck"] = format_rational(info.Ck)
        out["next_order_coefficient"] = (
            None
            if info.next_order_coefficient is None
            else format_rational(info.next_order_coefficient)
        )
    return out


def _emit(cfg: RunConfig, payload: dict[str, Any], lines: list[str]) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)
    if cfg.report_path:
        with open(cfg.report_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


# --------------------------------------------------------------------------
# compute
# --------------------------------------------------------------------------


def cmd_compute(cfg: RunConfig) -> int:
    term = resolve_series(cfg.series)
    n_values = parse_n_spec(cfg.n)
    if len(n_values) != 1:
        raise ValueError("compute takes a single n")
    n = n_values[0]
    k = 0 if cfg.k is None else cfg.k
    try:
        cf, _ = build_correction(term, k)
    except ExactTermination as exc:
        cf = exc.cf
    corrected = digits(term, cf, n, cfg.base)
    plain = digits(term, None, n, cfg.base)
    payload = {
        "series": term.name,
        "k": k,
        "n": n,
        "base": cfg.base,
        "corrected": {"digits": corrected.text, "certified": corrected.certified},
        "uncorrected": {"digits": plain.text, "certified": plain.certified},
    }
    lines = [
        f"{corrected.text} ({corrected.certified} digits certified, "
        f"k={k} correction)",
        f"uncorrected: {plain.text} ({plain.certified} digits certified)",
    ]
    _emit(cfg, payload, lines)
    return 0


# --------------------------------------------------------------------------
# solve
# --------------------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> int:
    term = resolve_series(cfg.series)
    k = 0 if cfg.k is None else cfg.k
    note = None
    try:
        cf, info = build_correction(term, k)
    except ExactTermination as exc:
        cf, info = exc.cf, None
        note = str(exc)
    payload: dict[str, Any] = {"series": term.name, "correction": _cf_payload(cf, info)}
    if note:
        payload["note"] = note
    lines = [f"series: {term.name}", f"k: {cf.depth}"]
    if note:
        lines.append(f"note: {note}")
    if cf.head_kind == "reciprocal":
        lines.append(
            f"head: {format_rational(cf.lambda0)} / ({format_poly(cf.head_poly)} + tail)"
        )
    else:
        lines.append(f"head: {format_poly(cf.head_poly)} + tail")
    for j, (a, b) in enumerate(cf.levels, start=1):
        lines.append(
            f"level {j}: a = {format_rational(a)}, b = {format_rational(b)}"
        )
    if info is not None:
        nxt = (
            "unresolved"
            if info.next_order_coefficient is None
            else format_rational(info.next_order_coefficient)
        )
        lines.append(f"K0 = {info.K0}")
        lines.append(f"C_k = {format_rational(info.Ck)}")
        lines.append(f"next order coefficient = {nxt}")
    _emit(cfg, payload, lines)
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _verify_coefficients(cfg: RunConfig, table: tables.CoefficientTable) -> int:
    term = resolve_series(table.series)
    profile = correction_profile(term, table.max_k)
    deep_cf = profile[-1][0]
    rows: list[dict[str, Any]] = []

    def row(cell: str, derived: str, expected: str) -> None:
        rows.append(
            {
                "cell": cell,
                "derived": derived,
                "expected": expected,
                "equal": derived == expected,
            }
        )

    head = profile[0][0]
    row("head_kind", head.head_kind, table.head_kind)
    row("lambda0", format_rational(head.lambda0), format_rational(table.lambda0))
    row(
        "head_poly",
        format_poly(head.head_poly),
        format_poly(Polynomial.make(table.head_poly)),
    )
    for j, (a, b) in enumerate(table.levels, start=1):
        if j <= deep_cf.depth:
            da, db = deep_cf.levels[j - 1]
            row(f"a_{j}", format_rational(da), format_rational(a))
            row(f"b_{j}", format_rational(db), format_rational(b))
    for k, (_, info) in enumerate(profile):
        row(f"C_{k}", format_rational(info.Ck), format_rational(table.limit_constants[k]))
        row(f"K0_{k}", str(info.K0), str(table.k0(k)))
    mismatches = [r for r in rows if not r["equal"]]
    payload = {
        "fixture": table.verify_id,
        "series": table.series,
        "rows": rows,
        "mismatches": len(mismatches),
        "pass": not mismatches,
    }
    lines = [f"fixture: {table.verify_id} (series {table.series})"]
    for r in rows:
        if r["equal"]:
            lines.append(f"  ok {r['cell']} = {r['derived']}")
        else:
            lines.append(
                f"  MISMATCH {r['cell']}: derived {r['derived']}, "
                f"recorded {r['expected']}"
            )
    lines.append(
        "PASS: all cells reproduced"
        if not mismatches
        else f"FAIL: {len(mismatches)} cells differ"
    )
    _emit(cfg, payload, lines)
    return 0 if not mismatches else 1


def _verify_bounds(cfg: RunConfig, fixture: tables.TheoremBoundFixture) -> int:
    n_list = parse_n_spec(cfg.n) if cfg.n else None
    result = theorem_bounds_check(fixture.verify_id, n_list)
    term = resolve_series(fixture.series)
    cf, info = build_correction(term, fixture.k)
    rate = rate_limit_constant(term, info)
    entries = []
    for entry in result.entries:
        scale = term.base_q ** entry.n * Fraction(entry.n) ** info.K0 / factorial_part(
            term, entry.n
        )
        scaled = entry.E.scaled(scale)
        entries.append(
            {
                **report_entry(
                    fixture.verify_id,
                    fixture.k,
                    entry.n,
                    entry.E.lo,
                    entry.E.hi,
                    scaled.lo,
                    scaled.hi,
                    rate,
                    entry.verdict == "pass" and entry.width_ok,
                ),
                "verdict": entry.verdict,
                "width_ok": entry.width_ok,
            }
        )
    overall = result.verdict == "pass" and result.all_width_ok
    payload = {
        "fixture": fixture.verify_id,
        "series": fixture.series,
        "k": fixture.k,
        "entries": entries,
        "verdict": result.verdict,
        "pass": overall,
    }
    lines = [f"fixture: {fixture.verify_id} (series {fixture.series}, k={fixture.k})"]
    for entry in result.entries:
        margin = (
            "enclosure 10x narrower than nearer gap: "
            + ("yes" if entry.width_ok else "no")
        )
        lines.append(f"  n={entry.n}: {entry.verdict} ({margin})")
    lines.append("PASS" if overall else f"verdict: {result.verdict}")
    _emit(cfg, payload, lines)
    if overall:
        return 0
    return 2 if result.verdict == "indeterminate" else 1


def _verify_closed_forms(cfg: RunConfig) -> int:
    k_max = 20 if cfg.k is None else cfg.k
    families = []
    lines = [f"fixture: sect6-closed-forms (k = 1..{k_max})"]
    total = 0
    for family in tables.CLOSED_FORM_FAMILIES:
        term = resolve_series(family.series)
        mismatches = verify_closed_form(term, k_max, family.a_formula, family.b_formula)
        total += len(mismatches)
        families.append(
            {
                "series": family.series,
                "mismatches": [
                    {
                        "k": k,
                        "which": which,
                        "derived": format_rational(derived),
                        "expected": format_rational(expected),
                    }
                    for k, which, derived, expected in mismatches
                ],
                "pass": not mismatches,
            }
        )
        if not mismatches:
            lines.append(f"  {family.series}: ok for k = 1..{k_max}")
        else:
            lines.append(f"  {family.series}: {len(mismatches)} mismatches")
            for k, which, derived, expected in mismatches:
                lines.append(
                    f"    k={k} {which}: derived {format_rational(derived)}, "
                    f"recorded {format_rational(expected)}"
                )
    payload = {
        "fixture": "sect6-closed-forms",
        "k_max": k_max,
        "families": families,
        "pass": total == 0,
    }
    lines.append("PASS" if total == 0 else f"FAIL: {total} mismatches")
    _emit(cfg, payload, lines)
    return 0 if total == 0 else 1


def _verify_rates(cfg: RunConfig) -> int:
    if not cfg.series or not cfg.n:
        raise ValueError("rates verification needs --series and --n")
    term = resolve_series(cfg.series)
    k = 0 if cfg.k is None else cfg.k
    cf, info = build_correction(term, k)
    result = rate_check(term, cf, info, parse_n_spec(cfg.n))
    rows = [
        {
            **from_error_report(f"rates:{term.name}", rep, within),
            "deviation": format_rational(dev),
        }
        for rep, dev, within in zip(result.reports, result.deviations, result.within)
    ]
    overall = result.all_within and result.monotone
    payload = {
        "fixture": f"rates:{term.name}",
        "k": k,
        "rel_tol": format_rational(result.rel_tol),
        "rows": rows,
        "monotone": result.monotone,
        "pass": overall,
    }
    lines = [f"fixture: rates (series {term.name}, k={k})"]
    for rep, dev, within in zip(result.reports, result.deviations, result.within):
        lines.append(
            f"  n={rep.n}: |scaled/expected - 1| ~ {_approx_decimal(dev)} "
            f"(tol {format_rational(result.rel_tol)}): {'yes' if within else 'NO'}"
        )
    lines.append(f"  monotone approach: {'yes' if result.monotone else 'NO'}")
    lines.append("PASS" if overall else "FAIL")
    _emit(cfg, payload, lines)
    return 0 if overall else 1


def cmd_verify(cfg: RunConfig) -> int:
    fixture_id = cfg.fixture
    if fixture_id in tables.COEFFICIENT_TABLES:
        return _verify_coefficients(cfg, tables.COEFFICIENT_TABLES[fixture_id])
    if fixture_id in tables.THEOREM_BOUND_FIXTURES:
        return _verify_bounds(cfg, tables.THEOREM_BOUND_FIXTURES[fixture_id])
    if fixture_id == "sect6-closed-forms":
        return _verify_closed_forms(cfg)
    if fixture_id == "rates":
        return _verify_rates(cfg)
    raise ValueError(f"unknown verify fixture {fixture_id!r}")


# --------------------------------------------------------------------------
# certify
# --------------------------------------------------------------------------


def _certify_tail_fixtures(cfg: RunConfig, lemma: str) -> int:
    reports = [
        certify_tail_bound(fx.pair, fx.n0) for fx in tables.TAIL_BOUND_FIXTURES[lemma]
    ]
    certified = all(r.certified for r in reports)
    payload = {
        "lemma": lemma,
        "pairs": [r.payload() for r in reports],
        "certified": certified,
    }
    lines = [f"lemma: {lemma}"]
    for r in reports:
        shift = format_rational(r.pair.shift)
        lines.append(
            f"  pair (shift {shift}): lower {r.lower_certificate.verdict.value}, "
            f"upper {r.upper_certificate.verdict.value} -> "
            + (f"certified for n >= {r.n0}" if r.certified else
               f"NOT certified (failing sides: {', '.join(r.failing_sides)})")
        )
    lines.append("certified" if certified else "indeterminate")
    _emit(cfg, payload, lines)
    return 0 if certified else 2


def _certify_v_variant(cfg: RunConfig) -> int:
    fixture = tables.TAIL_BOUND_FIXTURES["lemma2"][0]
    variants_equal = tables.LEMMA2_V_ALTERNATE == fixture.pair.v
    report = certify_tail_bound(fixture.pair, fixture.n0)
    certifying = []
    if report.certified:
        certifying.append("denominator scaled by 1 (coefficient 4163/240)")
        if variants_equal:
            certifying.append("denominator scaled by 16 (coefficient 4163/15)")
    payload = {
        "lemma": "lemma2-v-variant",
        "variants_equal": variants_equal,
        "certifying_variants": certifying,
        "report": report.payload(),
        "certified": report.certified and variants_equal,
    }
    lines = [
        "lemma: lemma2-v-variant",
        "the two circulating v forms reduce to the same rational function: "
        + ("yes" if variants_equal else "NO"),
        f"  certified for n >= {fixture.n0}: {'yes' if report.certified else 'NO'}",
    ]
    for name in certifying:
        lines.append(f"  certifies: {name}")
    lines.append("certified" if payload["certified"] else "indeterminate")
    _emit(cfg, payload, lines)
    return 0 if payload["certified"] else 2


def _certify_bracket(cfg: RunConfig, fixture: tables.BracketFixture) -> int:
    term = resolve_series(fixture.series)
    prepared = build_correction(term, fixture.k)
    _, info = prepared
    if fixture.use_derived_constant:
        if info.next_order_coefficient is None:
            raise SolverError(
                "next-order coefficient unresolved; cannot pick the bracket constant"
            )
        constant = info.next_order_coefficient
        source = "derived"
    else:
        constant = fixture.reference_constant
        source = "recorded"
    report = certify_second_order_bracket(
        term,
        fixture.k,
        constant,
        fixture.beta_lo,
        fixture.beta_hi,
        fixture.m0,
        prepared=prepared,
    )
    reference_matches = fixture.reference_constant == info.next_order_coefficient
    payload = {
        "lemma": fixture.certify_id,
        **report.payload(),
        "constant_source": source,
        "reference_constant": format_rational(fixture.reference_constant),
        "reference_matches_derived": reference_matches,
    }
    lines = [
        f"lemma: {fixture.certify_id} (series {fixture.series}, k={fixture.k})",
        f"  bracket constant ({source}): {format_rational(constant)}",
        "  recorded constant matches the derived next-order coefficient: "
        + ("yes" if reference_matches else "NO"),
        f"  offsets: lower {format_rational(report.lower_beta)}, "
        f"upper {format_rational(report.upper_beta)}",
    ]
    if report.certified:
        lines.append(f"bracket certified on m >= {fixture.m0}")
    else:
        lines.append(
            f"NOT certified (failing sides: {', '.join(report.failing_sides)})"
        )
    _emit(cfg, payload, lines)
    return 0 if report.certified else 2


def cmd_certify(cfg: RunConfig) -> int:
    lemma = cfg.lemma
    if lemma in tables.TAIL_BOUND_FIXTURES:
        return _certify_tail_fixtures(cfg, lemma)
    if lemma == "lemma2-v-variant":
        return _certify_v_variant(cfg)
    if lemma in tables.BRACKET_FIXTURES:
        return _certify_bracket(cfg, tables.BRACKET_FIXTURES[lemma])
    raise ValueError(f"unknown lemma {lemma!r}")


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def cmd_catalog(cfg: RunConfig) -> int:
    entries = []
    lines = []
    for entry in catalog():
        term = entry.term
        entries.append(
            {
                "id": term.name,
                "constant": entry.constant_name,
                "aliases": list(entry.aliases),
                "base": format_rational(term.base_q),
                "start": term.start_index,
                "prefactor": format_rational(term.prefactor),
            }
        )
        alias_text = f" (aliases: {', '.join(entry.aliases)})" if entry.aliases else ""
        lines.append(
            f"{term.name}: {entry.constant_name}, base {format_rational(term.base_q)}, "
            f"start {term.start_index}{alias_text}"
        )
    _emit(cfg, {"series": entries}, lines)
    return 0


# --------------------------------------------------------------------------
# argument plumbing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfaccel",
        description=(
            "Correction fractions for linearly convergent series: evaluate "
            "constants with certified digits, derive correction coefficients, "
            "verify recorded tables and error laws, certify inequalities."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", choices=("text", "json"), default="text")
        p.add_argument(
            "--report", dest="report_path", default=None, metavar="PATH",
            help="also write the JSON payload to this file",
        )

    p = sub.add_parser("compute", help="print certified digits of a series value")
    p.add_argument("--series", required=True)
    p.add_argument("--k", type=int, default=None, help="correction depth (default 0)")
    p.add_argument("--n", required=True, help="number of summed terms")
    p.add_argument("--base", type=int, choices=(10, 16), default=10)
    common(p)

    p = sub.add_parser("solve", help="derive the depth-k correction fraction")
    p.add_argument("--series", required=True)
    p.add_argument("--k", type=int, default=None, help="correction depth (default 0)")
    common(p)

    p = sub.add_parser("verify", help="check recorded tables, bounds, and rates")
    p.add_argument("--fixture", required=True)
    p.add_argument("--series", default=None, help="series for the rates fixture")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", default=None, help='n sweep: "15,25,50" or "88..92"')
    common(p)

    p = sub.add_parser("certify", help="run inequality certificates")
    p.add_argument("--lemma", required=True)
    common(p)

    p = sub.add_parser("catalog", help="list built-in series")
    common(p)

    return parser


_DISPATCH = {
    "compute": cmd_compute,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "certify": cmd_certify,
    "catalog": cmd_catalog,
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        series=getattr(args, "series", None),
        k=getattr(args, "k", None),
        n=getattr(args, "n", None),
        base=getattr(args, "base", 10),
        output=getattr(args, "output", "text"),
        report_path=getattr(args, "report_path", None),
        fixture=getattr(args, "fixture", None),
        lemma=getattr(args, "lemma", None),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return _DISPATCH[cfg.command](cfg)
    except (
        SeriesFormatError,
        SolverError,
        EnclosureError,
        ValueError,
        ZeroDivisionError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
