"""Series term model: summands of the form R(m) * F(m) / q**m.

A term couples a rational part R, an optional ratio of factorial
products F, and a geometric base q.  The module also provides a small
line-oriented definition-file format and a built-in catalog of the
series the rest of the package is exercised against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .polynomials import Polynomial, RationalFunction, poly_taylor_shift
from .rationals import Rational, format_rational, parse_rational


class SeriesFormatError(ValueError):
    """A malformed series definition (bad syntax or broken invariant)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


# One node of a simple-fraction presentation: coef / (a*m + c)**p.
SimpleFraction = tuple[Fraction, int, int, int]


@dataclass(frozen=True)
class BBPTerm:
    """One summand family t_m = R(m) * F(m) / q**m.

    F(m) = prod (a_i*m + c_i)! / prod (b_j*m + d_j)!; the prefactor
    multiplies the whole sum, never the individual term.  Terms with no
    geometric decay carry base_q = 1 together with q_is_one = True;
    base 1 is rejected otherwise.

    Equality is structural: two terms built from different but
    mathematically equal presentations (fraction list vs. coefficient
    lists) compare unequal on purpose, so that the file format
    round-trips bit-exactly.
    """

    name: str
    prefactor: Fraction
    R: RationalFunction
    base_q: Fraction
    num_factorials: tuple[tuple[int, int], ...] = ()
    den_factorials: tuple[tuple[int, int], ...] = ()
    start_index: int = 0
    q_is_one: bool = False
    r_fractions: tuple[SimpleFraction, ...] = ()

    @classmethod
    def make(
        cls,
        name: str,
        prefactor: Rational,
        R: RationalFunction,
        base_q: Rational,
        num_factorials: Iterable[tuple[int, int]] = (),
        den_factorials: Iterable[tuple[int, int]] = (),
        start_index: int = 0,
        q_is_one: bool = False,
        r_fractions: Iterable[SimpleFraction] = (),
    ) -> "BBPTerm":
        base_q = Fraction(base_q)
        if base_q <= 0:
            raise SeriesFormatError("base must be positive")
        if q_is_one and base_q != 1:
            raise SeriesFormatError("q_is_one requires base=1")
        if not q_is_one and base_q == 1:
            raise SeriesFormatError("base must differ from 1")
        if start_index < 0:
            raise SeriesFormatError("start index must be nonnegative")
        if R.is_zero:
            raise SeriesFormatError("rational part must be nonzero")
        pole = _integer_pole_at_or_after(R.den, start_index)
        if pole is not None:
            raise SeriesFormatError(f"pole at m={pole}")
        nf = tuple((int(a), int(c)) for a, c in num_factorials)
        df = tuple((int(b), int(d)) for b, d in den_factorials)
        for a, c in nf + df:
            if a <= 0:
                raise SeriesFormatError("factorial slope must be a positive integer")
            if a * start_index + c < 0:
                raise SeriesFormatError(
                    f"factorial argument {a}m{c:+d} is negative at m={start_index}"
                )
        return cls(
            name=name,
            prefactor=Fraction(prefactor),
            R=R,
            base_q=base_q,
            num_factorials=nf,
            den_factorials=df,
            start_index=int(start_index),
            q_is_one=bool(q_is_one),
            r_fractions=tuple(
                (Fraction(co), int(a), int(c), int(p)) for co, a, c, p in r_fractions
            ),
        )


def _integer_pole_at_or_after(den: Polynomial, start: int) -> int | None:
    """Smallest integer root of `den` that is >= start, or None.

    When every coefficient of den(m + start) has one strict sign there is
    no root past start at all; otherwise real roots are bounded by the
    Cauchy bound, so only finitely many integers need checking.
    """
    if den.degree <= 0:
        return None
    shifted = poly_taylor_shift(den, start).coeffs
    if all(c > 0 for c in shifted) or all(c < 0 for c in shifted):
        return None
    lead = abs(den.leading)
    bound = 1 + max(abs(c) for c in den.coeffs) / lead
    m = start
    while m <= bound:
        if den(m) == 0:
            return m
        m += 1
    return None


def combine_simple_fractions(fracs: Sequence[SimpleFraction]) -> RationalFunction:
    """Sum coef/(a*m+c)**p nodes over a common denominator, canonically."""
    total = RationalFunction.constant(0)
    for coef, a, c, p in fracs:
        node = RationalFunction.make(
            Polynomial.constant(coef), Polynomial.make([c, a]).pow(p)
        )
        total = total + node
    return total


def kernel(term: BBPTerm) -> RationalFunction:
    """The homogeneous ratio F(m+1) / (q * F(m)) as a rational function.

    Expanding the factorial quotients leaves the finite products
    prod_{s=1..a_i}(a_i m + c_i + s) over q * prod_{s=1..b_j}(b_j m + d_j + s).
    With no factorial parts this is just the constant 1/q.
    """
    num = Polynomial.constant(1)
    for a, c in term.num_factorials:
        for s in range(1, a + 1):
            num = num * Polynomial.make([c + s, a])
    den = Polynomial.constant(term.base_q)
    for b, d in term.den_factorials:
        for s in range(1, b + 1):
            den = den * Polynomial.make([d + s, b])
    return RationalFunction.make(num, den)


def factorial_part(term: BBPTerm, m: int) -> Fraction:
    """F(m): the ratio of factorial products at integer m >= start."""
    if m < term.start_index:
        raise ValueError(f"m={m} precedes start index {term.start_index}")
    num = 1
    for a, c in term.num_factorials:
        num *= factorial(a * m + c)
    den = 1
    for b, d in term.den_factorials:
        den *= factorial(b * m + d)
    return Fraction(num, den)


def term_value(term: BBPTerm, m: int) -> Fraction:
    """Exact t_m = R(m) * F(m) / q**m.  The prefactor is not included."""
    if m < term.start_index:
        raise ValueError(f"m={m} precedes start index {term.start_index}")
    return term.R(m) * factorial_part(term, m) / term.base_q**m


def term_ratio(term: BBPTerm) -> RationalFunction:
    """t_{m+1} / t_m as a rational function: kernel(m) * R(m+1) / R(m)."""
    return kernel(term) * RationalFunction.make(term.R.num.shift(1), term.R.den.shift(1)) / term.R


# --------------------------------------------------------------------------
# definition-file format
# --------------------------------------------------------------------------

_FRACTION_RE = re.compile(r"^(-?\d+(?:/\d+)?)/\((\d+)m([+-]\d+)\)\^(\d+)$")
_SCALAR_KEYS = ("name", "prefactor", "base", "start", "r_num", "r_den", "q_is_one")


def parse_series(text: str) -> BBPTerm:
    """Parse a series definition.  See render_series for the layout."""
    fields: dict[str, str] = {}
    fracs: list[SimpleFraction] = []
    num_facts: list[tuple[int, int]] = []
    den_facts: list[tuple[int, int]] = []
    lines: dict[str, int] = {}
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[series]":
            if saw_header:
                raise SeriesFormatError("duplicate [series] header", lineno)
            saw_header = True
            continue
        if not saw_header:
            raise SeriesFormatError("expected [series] header first", lineno)
        if "=" not in line:
            raise SeriesFormatError("expected key=value", lineno, 1)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        col = raw.index("=") + 2
        if key == "r_fraction":
            m = _FRACTION_RE.match(value)
            if m is None:
                raise SeriesFormatError(
                    f"cannot parse fraction {value!r}", lineno, col
                )
            coef, a, c, p = m.groups()
            fracs.append((parse_rational(coef), int(a), int(c), int(p)))
        elif key in ("num_factorial", "den_factorial"):
            parts = value.split(",")
            if len(parts) != 2:
                raise SeriesFormatError(
                    f"{key} wants two comma-separated integers", lineno, col
                )
            try:
                pair = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise SeriesFormatError(
                    f"bad integer in {key}={value!r}", lineno, col
                ) from None
            (num_facts if key == "num_factorial" else den_facts).append(pair)
        elif key in _SCALAR_KEYS:
            if key in fields:
                raise SeriesFormatError(f"duplicate key {key}", lineno)
            fields[key] = value
            lines[key] = lineno
        else:
            raise SeriesFormatError(f"unknown key {key!r}", lineno, 1)
    if not saw_header:
        raise SeriesFormatError("missing [series] header")
    for required in ("name", "base"):
        if required not in fields:
            raise SeriesFormatError(f"missing required key {required}")

    def scalar(key: str, default: str | None = None) -> str | None:
        return fields.get(key, default)

    try:
        base = parse_rational(fields["base"])
        prefactor = parse_rational(scalar("prefactor", "1"))
        start = int(scalar("start", "0"))
    except ValueError as exc:
        raise SeriesFormatError(str(exc)) from None
    q_flag = scalar("q_is_one", "false").lower()
    if q_flag not in ("true", "false"):
        raise SeriesFormatError("q_is_one must be true or false", lines.get("q_is_one"))
    q_is_one = q_flag == "true"

    has_lists = "r_num" in fields or "r_den" in fields
    if fracs and has_lists:
        raise SeriesFormatError("give either r_fraction lines or r_num/r_den, not both")
    if fracs:
        R = combine_simple_fractions(fracs)
    elif has_lists:
        if "r_num" not in fields or "r_den" not in fields:
            raise SeriesFormatError("r_num and r_den must appear together")
        num = Polynomial.make([parse_rational(c) for c in fields["r_num"].split(",")])
        den = Polynomial.make([parse_rational(c) for c in fields["r_den"].split(",")])
        if den.is_zero:
            raise SeriesFormatError("r_den is the zero polynomial", lines.get("r_den"))
        R = RationalFunction.make(num, den)
    else:
        raise SeriesFormatError("no rational part given (r_fraction or r_num/r_den)")

    return BBPTerm.make(
        name=fields["name"],
        prefactor=prefactor,
        R=R,
        base_q=base,
        num_factorials=num_facts,
        den_factorials=den_facts,
        start_index=start,
        q_is_one=q_is_one,
        r_fractions=fracs,
    )


def render_series(term: BBPTerm) -> str:
    """Inverse of parse_series, bit-exact on round trip."""
    out = ["[series]", f"name={term.name}"]
    out.append(f"prefactor={format_rational(term.prefactor)}")
    out.append(f"base={format_rational(term.base_q)}")
    out.append(f"start={term.start_index}")
    if term.r_fractions:
        for coef, a, c, p in term.r_fractions:
            out.append(f"r_fraction={format_rational(coef)}/({a}m{c:+d})^{p}")
    else:
        out.append("r_num=" + ",".join(format_rational(c) for c in term.R.num.coeffs))
        out.append("r_den=" + ",".join(format_rational(c) for c in term.R.den.coeffs))
    for a, c in term.num_factorials:
        out.append(f"num_factorial={a},{c}")
    for b, d in term.den_factorials:
        out.append(f"den_factorial={b},{d}")
    if term.q_is_one:
        out.append("q_is_one=true")
    return "\n".join(out) + "\n"


def parse_series_file(path) -> BBPTerm:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_series(fh.read())


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesCatalogEntry:
    """A built-in series together with display metadata.

    table_key points at the expected-value tables used by the
    verification commands (None for entries checked only through the
    closed-form families).
    """

    term: BBPTerm
    constant_name: str
    table_key: str | None = None
    aliases: tuple[str, ...] = ()


def _fractions_term(name, prefactor, base, nodes, start=0, q_is_one=False,
                    num_factorials=(), den_factorials=()):
    fracs = [(Fraction(co), a, c, p) for co, a, c, p in nodes]
    return BBPTerm.make(
        name=name,
        prefactor=prefactor,
        R=combine_simple_fractions(fracs),
        base_q=base,
        num_factorials=num_factorials,
        den_factorials=den_factorials,
        start_index=start,
        q_is_one=q_is_one,
        r_fractions=fracs,
    )


def _build_catalog() -> list[SeriesCatalogEntry]:
    entries = []

    entries.append(SeriesCatalogEntry(
        term=_fractions_term(
            "pi-bbp", 1, 16,
            [(4, 8, 1, 1), (-2, 8, 4, 1), (-1, 8, 5, 1), (-1, 8, 6, 1)],
        ),
        constant_name="pi",
        table_key="pi",
    ))

    # Index normalization: every node below uses the summation index m.
    # One widely circulated transcription of this series writes a single
    # node (the 7/24 one) with a different index letter; that is treated
    # as a slip of the pen, not a different series, and the digit
    # checks downstream confirm the m-indexed reading.
    entries.append(SeriesCatalogEntry(
        term=_fractions_term(
            "catalan-bbp", Fraction(1, 4096), 4096,
            [(36864, 24, 2, 2), (-30720, 24, 3, 2), (-30720, 24, 4, 2),
             (-6144, 24, 6, 2), (-1536, 24, 7, 2), (2304, 24, 9, 2),
             (2304, 24, 10, 2), (768, 24, 14, 2), (480, 24, 15, 2),
             (384, 24, 11, 2), (1536, 24, 12, 2), (24, 24, 19, 2),
             (-120, 24, 20, 2), (-36, 24, 21, 2), (48, 24, 22, 2),
             (-6, 24, 23, 2)],
        ),
        constant_name="catalan",
        table_key="catalan",
    ))

    entries.append(SeriesCatalogEntry(
        term=_fractions_term(
            "pi2-bbp", Fraction(2, 27), 729,
            [(243, 12, 1, 2), (-405, 12, 2, 2), (-81, 12, 4, 2),
             (-27, 12, 5, 2), (-72, 12, 6, 2), (-9, 12, 7, 2),
             (-9, 12, 8, 2), (-5, 12, 10, 2), (1, 12, 11, 2)],
        ),
        constant_name="pi**2",
        table_key="pi2",
    ))

    entries.append(SeriesCatalogEntry(
        term=BBPTerm.make(
            name="ramanujan-inv-pi",
            prefactor=Fraction(1, 16),
            R=RationalFunction.make(Polynomial.make([5, 42]), Polynomial.constant(1)),
            base_q=4096,
            num_factorials=[(2, 0)] * 3,
            den_factorials=[(1, 0)] * 6,
        ),
        constant_name="1/pi",
        table_key="ramanujan",
        aliases=("ramanujan",),
    ))

    entries.append(SeriesCatalogEntry(
        term=_fractions_term(
            "catalan-central-binomial", Fraction(1, 2), Fraction(1, 4),
            [(1, 2, 1, 2)],
            num_factorials=[(1, 0)] * 2,
            den_factorials=[(2, 0)],
        ),
        constant_name="catalan",
        table_key="central-binomial",
        aliases=("catalan-cb",),
    ))

    entries.append(SeriesCatalogEntry(
        term=_fractions_term("ln2-mercator", 1, 2, [(1, 1, 0, 1)], start=1),
        constant_name="log(2)",
        table_key="mercator",
        aliases=("ln2",),
    ))

    entries.append(SeriesCatalogEntry(
        term=_fractions_term(
            "inverse-squares-4m1", 1, 1, [(1, 4, 1, 2)], start=1, q_is_one=True,
        ),
        constant_name="sum of 1/(4m+1)**2",
        table_key="inverse-squares",
        aliases=("sq4m1",),
    ))

    return entries


_CATALOG: list[SeriesCatalogEntry] | None = None


def catalog() -> list[SeriesCatalogEntry]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return list(_CATALOG)


def resolve_series(ident: str) -> BBPTerm:
    """Look up a catalog id or alias, or load a .series file path."""
    for entry in catalog():
        if ident == entry.term.name or ident in entry.aliases:
            return entry.term
    if ident.endswith(".series"):
        try:
            return parse_series_file(ident)
        except FileNotFoundError:
            raise SeriesFormatError(f"no such series file: {ident}") from None
    raise SeriesFormatError(f"unknown series {ident!r}")
