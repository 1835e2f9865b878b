"""Correction fractions for linearly convergent series.

Exact-arithmetic toolkit: model a series term t_m = R(m) F(m) / q**m,
derive a finite continued-fraction correction for its tail, evaluate the
summed constant inside rigorous rational enclosures, check the error's
convergence law, and certify the supporting sign inequalities.
"""

from .evaluate import (
    BoundEntry,
    BoundsCheckResult,
    DigitResult,
    Enclosure,
    EnclosureError,
    ErrorReport,
    RateCheckResult,
    alpha_enclosure,
    corrected_value,
    digits,
    error_report,
    error_term,
    partial_sum,
    rate_check,
    rate_limit_constant,
    tail_certificate,
    theorem_bounds_check,
)
from .kernels import BACKEND
from .model import (
    BBPTerm,
    SeriesFormatError,
    catalog,
    factorial_part,
    kernel,
    parse_series,
    parse_series_file,
    render_series,
    resolve_series,
    term_ratio,
    term_value,
)
from .polynomials import Polynomial, RationalFunction
from .positivity import (
    BracketReport,
    SignCertificate,
    TailBoundPair,
    TailBoundReport,
    Verdict,
    certify_second_order_bracket,
    certify_tail_bound,
    prove_sign_on_ray,
)
from .rationals import Rational, format_rational, parse_rational
from .solver import (
    BudgetExceeded,
    CorrectionCF,
    DegenerateLevel,
    ExactTermination,
    ResidualInfo,
    SolverError,
    TieError,
    build_correction,
    correction_profile,
    mc_eval,
    residual_pair,
    verify_closed_form,
)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    "BACKEND",
    # model
    "BBPTerm",
    "SeriesFormatError",
    "catalog",
    "resolve_series",
    "parse_series",
    "parse_series_file",
    "render_series",
    "kernel",
    "factorial_part",
    "term_value",
    "term_ratio",
    # polynomials
    "Polynomial",
    "RationalFunction",
    "Rational",
    "format_rational",
    "parse_rational",
    # solver
    "CorrectionCF",
    "ResidualInfo",
    "SolverError",
    "TieError",
    "DegenerateLevel",
    "BudgetExceeded",
    "ExactTermination",
    "build_correction",
    "correction_profile",
    "residual_pair",
    "mc_eval",
    "verify_closed_form",
    # evaluator
    "Enclosure",
    "EnclosureError",
    "ErrorReport",
    "RateCheckResult",
    "BoundEntry",
    "BoundsCheckResult",
    "DigitResult",
    "partial_sum",
    "tail_certificate",
    "alpha_enclosure",
    "corrected_value",
    "error_term",
    "error_report",
    "rate_limit_constant",
    "rate_check",
    "theorem_bounds_check",
    "digits",
    # positivity
    "Verdict",
    "SignCertificate",
    "TailBoundPair",
    "TailBoundReport",
    "BracketReport",
    "prove_sign_on_ray",
    "certify_tail_bound",
    "certify_second_order_bracket",
]
