"""Coefficient algebra for the Taylor expansion of xi around s = 1/2.

Three families describe the same function::

    xi(s)           = sum a_2n (s - 1/2)^(2n)
    2 xi(1/2 + ix)  = sum c_n x^(2n) / n!
    xi(1/2 + ix)/8  = sum (-1)^n bhat_n (2x)^(2n) / (2n)!

so that ``c_n = 2 n! (-1)^n a_2n`` and ``a_2n = 8 4^n bhat_n / (2n)!``.

Tables keep every entry as the decimal string it came from; numeric values
are materialised at whatever mpmath precision is active when they are read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

import mpmath
from mpmath import mpf

from .numerics import DEFAULT_CONTEXT, DomainError, PrecisionContext

FAMILIES = ("bhat", "c", "a")

_ALIASES = {
    "bhat": "bhat", "b": "bhat", "b_series": "bhat", "moments": "bhat", "turan": "bhat",
    "c": "c", "c_series": "c", "jensen": "c",
    "a": "a", "a_series": "a", "taylor": "a",
}


def family(name: str) -> str:
    """Normalise a family/method name (``'b'``, ``'b_series'``, ``'bhat'`` ...)."""
    try:
        return _ALIASES[name.lower()]
    except (KeyError, AttributeError):
        raise DomainError(f"unknown coefficient family {name!r}; expected one of {FAMILIES}") from None


class TableFormatError(ValueError):
    """A coefficient, moment or zero file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegeneracyError(ArithmeticError):
    """A polynomial's leading coefficient is numerically zero."""


# ---------------------------------------------------------------------------
# reference values: 16-digit moments, 12-digit c_n and a_2n
# ---------------------------------------------------------------------------

_REFERENCE = """\
0	6.214009727353926e-2	0.994241556376	0.497120778188
1	7.178732598482949e-4	-2.29719443152e-2	1.14859721576e-2
2	2.314725338818463e-5	4.93808072283e-4	1.23452018071e-4
3	1.170499895698397e-6	-9.98826577664e-6	8.32355481387e-7
4	7.859696022958770e-8	1.91626874465e-7	3.99222655135e-9
5	6.47444266092415e-9	-3.50784618243e-9	1.46160257601e-11
6	6.248509280628118e-10	6.15533766557e-11	4.27454004553e-14
7	6.857113566031334e-11	-1.03921031437e-12	1.03096261346e-16
8	8.379562856498463e-12	1.69325437329e-14	2.09976980815e-19
9	1.122895900525652e-12	-2.66944768148e-16	3.67814109551e-22
10	1.630766572462173e-13	4.08084512257e-18	5.62285758732e-25
11	2.543075058368090e-14	-6.06077541545e-20	7.59176013038e-28
12	4.226693865498318e-15	8.75935173682e-22	9.14334287904e-31
13	7.441357184567353e-16	-1.23371064104e-23	9.9061066332e-34
14	1.380660423385153e-16	1.69556431188e-25	9.72469343308e-37
15	2.687936596475912e-17	-2.27655637357e-27	8.7045996667e-40
16	5.470564386990504e-18	2.98923338866e-29	7.14348661116e-43
17	1.160183185841992e-18	-3.84211459038e-31	5.40097046858e-46
18	2.556698594979872e-19	4.83821574529e-33	3.7784546542e-49
19	5.840019662344811e-20	-5.97376698863e-35	2.45540797309e-52
20	1.379672872080269e-20	7.23728179619e-37	1.48737634559e-55
"""


@dataclass(frozen=True)
class Entry:
    """A coefficient held as its decimal string."""

    text: str

    def __post_init__(self) -> None:
        try:
            v = mpf(self.text)
        except (ValueError, TypeError):
            raise TableFormatError(f"not a decimal number: {self.text!r}") from None
        if not mpmath.isfinite(v):
            raise TableFormatError(f"non-finite value {self.text!r}")

    @property
    def value(self) -> mpf:
        return mpf(self.text)

    @property
    def digits(self) -> int:
        """Count of significant digits in the mantissa."""
        mant = self.text.lower().split("e")[0].lstrip("+-").replace(".", "")
        return len(mant.lstrip("0")) or 1

    @classmethod
    def from_value(cls, value, digits: int) -> "Entry":
        return cls(mpmath.nstr(value, digits, min_fixed=0, max_fixed=0))


@dataclass(frozen=True)
class Row:
    n: int
    bhat: Optional[Entry] = None
    c: Optional[Entry] = None
    a: Optional[Entry] = None

    def get(self, fam: str) -> Optional[Entry]:
        return getattr(self, family(fam))


@dataclass(frozen=True)
class CoefficientTable:
    rows: tuple
    provenance: str = "builtin_fixture"
    # optional absolute error bounds per family, keyed (family, n)
    error_bounds: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not self.rows:
            raise DomainError("coefficient table is empty")
        for i, row in enumerate(self.rows):
            if row.n != i:
                raise TableFormatError(f"row indices must run 0..N without gaps; found n={row.n} at position {i}")

    @property
    def max_index(self) -> int:
        return len(self.rows) - 1

    def has(self, fam: str) -> bool:
        fam = family(fam)
        return all(r.get(fam) is not None for r in self.rows)

    def value(self, fam: str, n: int) -> mpf:
        fam = family(fam)
        if not 0 <= n <= self.max_index:
            raise DomainError(f"index {n} outside table range 0..{self.max_index}")
        entry = self.rows[n].get(fam)
        if entry is None:
            raise DomainError(f"table has no {fam} value for n={n}")
        return entry.value

    def column(self, fam: str, upto: Optional[int] = None) -> list:
        upto = self.max_index if upto is None else upto
        return [self.value(fam, n) for n in range(upto + 1)]

    def bhat(self, n: int) -> mpf:
        return self.value("bhat", n)

    def c(self, n: int) -> mpf:
        return self.value("c", n)

    def a(self, n: int) -> mpf:
        return self.value("a", n)

    def only(self, fam: str) -> "CoefficientTable":
        """Copy keeping a single family (used to exercise :func:`convert`)."""
        fam = family(fam)
        rows = tuple(Row(r.n, **{fam: r.get(fam)}) for r in self.rows)
        return replace(self, rows=rows)

    def truncated(self, n_max: int) -> "CoefficientTable":
        if not 0 <= n_max <= self.max_index:
            raise DomainError(f"cannot truncate to {n_max}; table covers 0..{self.max_index}")
        return replace(self, rows=self.rows[: n_max + 1])


def builtin_table() -> CoefficientTable:
    """The bundled reference table, n = 0..20, digits kept exactly as stored."""
    rows = []
    for line in _REFERENCE.splitlines():
        n, b, c, a = line.split("\t")
        rows.append(Row(int(n), Entry(b), Entry(c), Entry(a)))
    return CoefficientTable(tuple(rows), provenance="builtin_fixture")


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def _factor_c_from_bhat(n: int) -> mpf:
    # (-1)^n n! 2^(2n) 2^4 / (2n)!, exact rational applied at working precision
    return mpf((-1) ** n * math.factorial(n) * 4 ** n * 16) / math.factorial(2 * n)


def _factor_a_from_bhat(n: int) -> mpf:
    return mpf(8 * 4 ** n) / math.factorial(2 * n)


def _factor_c_from_a(n: int) -> mpf:
    return mpf(2 * math.factorial(n) * (-1) ** n)


def bhat_to_a(n: int, bhat) -> mpf:
    return _factor_a_from_bhat(n) * bhat


def bhat_to_c(n: int, bhat) -> mpf:
    return _factor_c_from_bhat(n) * bhat


def a_to_c(n: int, a) -> mpf:
    return _factor_c_from_a(n) * a


def convert_value(n: int, value, source: str, target: str) -> mpf:
    """Map a single coefficient between families."""
    source, target = family(source), family(target)
    if source == target:
        return mpf(value)
    to_bhat = {
        "bhat": lambda v: v,
        "a": lambda v: v / _factor_a_from_bhat(n),
        "c": lambda v: v / _factor_c_from_bhat(n),
    }[source]
    b = to_bhat(mpf(value))
    return {"bhat": b, "a": bhat_to_a(n, b), "c": bhat_to_c(n, b)}[target]


def convert(table: CoefficientTable, source: Optional[str] = None,
            ctx: PrecisionContext = DEFAULT_CONTEXT) -> CoefficientTable:
    """Fill the other two families from ``source``.

    ``source`` defaults to the only fully populated family; when several are
    present the moments win, then c, then a.  The source column is copied
    verbatim; derived entries are written with ``ctx.digits`` digits.
    """
    if source is None:
        present = [f for f in FAMILIES if table.has(f)]
        if not present:
            raise DomainError("table has no fully populated coefficient family")
        source = present[0]
    source = family(source)
    if not table.has(source):
        raise DomainError(f"source family {source!r} is not fully populated")
    rows = []
    with ctx.workdps():
        for row in table.rows:
            src = row.get(source)
            fields = {}
            for fam in FAMILIES:
                if fam == source:
                    fields[fam] = src
                else:
                    fields[fam] = Entry.from_value(convert_value(row.n, src.value, source, fam), ctx.digits)
            rows.append(Row(row.n, **fields))
    return replace(table, rows=tuple(rows))


# ---------------------------------------------------------------------------
# even derivatives, inequalities
# ---------------------------------------------------------------------------

def even_derivative(n: int, table: CoefficientTable, source: str = "a",
                    ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """d^(2n)/dx^(2n) xi(1/2 + ix) at x = 0 from one coefficient family."""
    if not 0 <= n <= table.max_index:
        raise DomainError(f"n={n} outside table range 0..{table.max_index}")
    source = family(source)
    with ctx.workdps():
        if source == "a":
            return math.factorial(2 * n) * table.a(n)
        if source == "c":
            return (-1) ** n * mpf(math.factorial(2 * n)) / (2 * math.factorial(n)) * table.c(n)
        return 8 * mpf(4) ** n * table.bhat(n)


class TuranCheck(NamedTuple):
    margin: mpf
    holds: bool


def _column_or_converted(table: CoefficientTable, fam: str, n: int) -> mpf:
    if table.rows[n].get(fam) is not None:
        return table.value(fam, n)
    for src in FAMILIES:
        if table.rows[n].get(src) is not None:
            return convert_value(n, table.value(src, n), src, fam)
    raise DomainError(f"row {n} is empty")


def turan_moment_margin(n: int, table: CoefficientTable,
                        ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """bhat_n^2 - (2n-1)/(2n+1) bhat_(n-1) bhat_(n+1)."""
    if not 1 <= n <= table.max_index - 1:
        raise DomainError(f"Turan index must satisfy 1 <= n <= {table.max_index - 1}, got {n}")
    with ctx.workdps():
        b = [_column_or_converted(table, "bhat", k) for k in (n - 1, n, n + 1)]
        return b[1] ** 2 - mpf(2 * n - 1) / (2 * n + 1) * b[0] * b[2]


def turan_inequality(n: int, table: CoefficientTable,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> TuranCheck:
    """Margin ``c_n^2 - c_(n-1) c_(n+1)``.

    ``holds`` is true only if this margin and the moment form
    (:func:`turan_moment_margin`) are both positive.
    """
    if not 1 <= n <= table.max_index - 1:
        raise DomainError(f"Turan index must satisfy 1 <= n <= {table.max_index - 1}, got {n}")
    with ctx.workdps():
        c = [_column_or_converted(table, "c", k) for k in (n - 1, n, n + 1)]
        margin = c[1] ** 2 - c[0] * c[2]
        moment = turan_moment_margin(n, table, ctx)
    return TuranCheck(margin, bool(margin > 0 and moment > 0))


# ---------------------------------------------------------------------------
# Jensen polynomials and Sturm sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JensenPolynomial:
    """``J^(d,0)(x) = sum_h c_h C(d,h) x^h``; coefficients in ascending order."""

    degree: int
    coefficients: tuple
    shift: int = 0

    def __call__(self, x):
        return mpmath.polyval(list(reversed(self.coefficients)), x)


def jensen_polynomial(d: int, table: CoefficientTable,
                      ctx: PrecisionContext = DEFAULT_CONTEXT) -> JensenPolynomial:
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")
    if d > table.max_index:
        raise DomainError(f"degree {d} needs c_0..c_{d}; table stops at {table.max_index}")
    with ctx.workdps():
        coeffs = tuple(_column_or_converted(table, "c", h) * math.comb(d, h) for h in range(d + 1))
    return JensenPolynomial(d, coeffs)


def _trim(p: list, tol: mpf) -> list:
    scale = max((abs(x) for x in p), default=mpf(0))
    while p and abs(p[-1]) <= tol * scale:
        p.pop()
    return p


def _normalise(p: list) -> list:
    scale = max(abs(x) for x in p)
    return [x / scale for x in p]


def _poly_rem(num: list, den: list, tol: mpf) -> list:
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    while len(num) - 1 >= dd and num:
        q = num[-1] / lead
        shift = len(num) - 1 - dd
        for i in range(dd + 1):
            num[shift + i] -= q * den[i]
        num.pop()
        # dividend is normalised to unit scale, so tol is absolute here
        while num and abs(num[-1]) <= tol:
            num.pop()
    return num


def sturm_sequence(coeffs: Sequence, tol: mpf) -> list:
    p0 = _normalise(list(coeffs))
    p1 = _normalise([k * p0[k] for k in range(1, len(p0))])
    seq = [p0, p1]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1], tol)
        if not r:
            break
        seq.append(_normalise([-x for x in r]))
    return seq


def _sign_changes(signs: Iterable[int]) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def count_real_roots(coeffs: Sequence, tol: mpf) -> int:
    """Distinct real roots of a polynomial (ascending coefficients) by Sturm's theorem."""
    seq = sturm_sequence(coeffs, tol)
    at_pos = [mpmath.sign(p[-1]) for p in seq]
    at_neg = [mpmath.sign(p[-1]) * (-1) ** (len(p) - 1) for p in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


class HyperbolicityResult(NamedTuple):
    real_root_count: int
    hyperbolic: bool


def hyperbolicity_check(poly: JensenPolynomial,
                        ctx: PrecisionContext = DEFAULT_CONTEXT) -> HyperbolicityResult:
    """Count real roots with a Sturm sequence at working precision.

    Coefficients below ``10^(-digits/2)`` times the largest coefficient are
    treated as zero.  A leading coefficient that small raises rather than
    risk a wrong count from an ill-conditioned Sturm chain.
    """
    if poly.degree < 1:
        raise DomainError("hyperbolicity needs degree >= 1")
    with ctx.workdps():
        coeffs = [mpf(x) for x in poly.coefficients]
        tol = mpf(10) ** (-(ctx.digits // 2))
        scale = max(abs(x) for x in coeffs)
        if abs(coeffs[-1]) <= tol * scale:
            raise DegeneracyError(
                f"leading coefficient x^{poly.degree} = {mpmath.nstr(coeffs[-1], 8)} "
                f"is below tolerance relative to max |coefficient| {mpmath.nstr(scale, 8)}")
        count = count_real_roots(coeffs, tol)
    return HyperbolicityResult(count, count == poly.degree)


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------

MISSING = "-"


TABLE_HEADER = "# xi-moment-lab coefficients provenance="


def format_table(table: CoefficientTable) -> str:
    lines = [f"{TABLE_HEADER}{table.provenance}", "# n\tbhat\tc\ta"]
    for r in table.rows:
        cells = [e.text if e is not None else MISSING for e in (r.bhat, r.c, r.a)]
        lines.append("\t".join([str(r.n)] + cells))
    return "\n".join(lines) + "\n"


def parse_table(text: str, provenance: Optional[str] = None) -> CoefficientTable:
    """Parse the tab-separated table format; the header's provenance is kept
    unless ``provenance`` overrides it."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith(TABLE_HEADER) and provenance is None:
            provenance = stripped[len(TABLE_HEADER):].strip()
        if not stripped or stripped.startswith("#"):
            continue
        cells = stripped.split("\t")
        if len(cells) != 4:
            raise TableFormatError(f"expected 4 tab-separated cells, found {len(cells)}", lineno)
        try:
            n = int(cells[0])
        except ValueError:
            raise TableFormatError(f"row index {cells[0]!r} is not an integer", lineno) from None
        entries = {}
        for fam, cell in zip(FAMILIES, cells[1:]):
            if cell == MISSING:
                entries[fam] = None
                continue
            try:
                entries[fam] = Entry(cell)
            except TableFormatError as exc:
                raise TableFormatError(f"row n={n}, column {fam}: {exc}", lineno) from None
        rows.append(Row(n, **entries))
    if not rows:
        raise TableFormatError("no data rows")
    return CoefficientTable(tuple(rows), provenance=provenance or "file")


def write_table(table: CoefficientTable, path) -> None:
    Path(path).write_text(format_table(table), encoding="utf-8")


def read_table(path) -> CoefficientTable:
    return parse_table(Path(path).read_text(encoding="utf-8"))


def cache_roundtrip(table: CoefficientTable, path) -> CoefficientTable:
    """Write ``table`` to ``path`` and read it back."""
    write_table(table, path)
    return read_table(path)
