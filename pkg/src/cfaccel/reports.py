"""Machine-readable report rows and access to the shipped JSON schemas.

Every rational in a report is rendered as a "num/den" decimal string (or
a bare integer string) so that reports are exact and floating-point
never enters an output path.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from .evaluate import ErrorReport
from .rationals import Rational, format_rational

__all__ = ["report_entry", "from_error_report", "load_schema"]


def report_entry(
    fixture: str,
    k: int,
    n: int,
    E_lo: Rational,
    E_hi: Rational,
    scaled_lo: Rational,
    scaled_hi: Rational,
    expected: Rational,
    passed: bool,
) -> dict[str, Any]:
    """One verification row: error enclosure, scaled enclosure, verdict."""
    return {
        "fixture": fixture,
        "k": k,
        "n": n,
        "E_lo": format_rational(E_lo),
        "E_hi": format_rational(E_hi),
        "scaled_lo": format_rational(scaled_lo),
        "scaled_hi": format_rational(scaled_hi),
        "expected": format_rational(expected),
        "pass": passed,
    }


def from_error_report(
    fixture: str, report: ErrorReport, passed: bool
) -> dict[str, Any]:
    """Row built from an ErrorReport produced by the evaluator."""
    return report_entry(
        fixture,
        report.k,
        report.n,
        report.E.lo,
        report.E.hi,
        report.scaled.lo,
        report.scaled.hi,
        report.expected_limit,
        passed,
    )


def load_schema(name: str) -> dict[str, Any]:
    """Load a shipped schema by stem: "report" or "certificate"."""
    path = resources.files("cfaccel.data").joinpath(f"{name}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))
