"""Zero tables and the identities built from them.

Ordinates are kept as the decimal strings they were read from, so they can
be turned into either working-precision mpf values or exact rationals.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations
from math import factorial
from typing import NamedTuple, Optional, Sequence

import mpmath
from mpmath import mpf

from .coefficients import CoefficientTable, TableFormatError, builtin_table
from .constants import c0_closed_form
from .numerics import DEFAULT_CONTEXT, DomainError, PrecisionContext, SeriesResult, euler_gamma

BUILTIN_TAG = "builtin:zeros100"
FIRST_ORDINATE = mpf("14.134725141734693790457251983562")
MAX_ORDER = 3


class ZeroTableWarning(UserWarning):
    """Input zeros look unusual (unsorted, or not starting near 14.1347)."""


class UnsupportedOrderError(DomainError):
    pass


@dataclass(frozen=True)
class ZeroTable:
    texts: tuple
    source: str = "memory"

    def __post_init__(self) -> None:
        for i, s in enumerate(self.texts):
            if Fraction(s) <= 0:
                raise DomainError(f"ordinate #{i + 1} is not positive: {s}")

    @property
    def count(self) -> int:
        return len(self.texts)

    M = count

    def values(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
        with ctx.workdps():
            return [mpf(s) for s in self.texts]

    def exact(self) -> list:
        return [Fraction(s) for s in self.texts]

    def head(self, m: int) -> "ZeroTable":
        if m < 0:
            raise DomainError("count must be non-negative")
        return ZeroTable(self.texts[:m], self.source)

    @classmethod
    def from_values(cls, values: Sequence, source: str = "memory") -> "ZeroTable":
        """Build a table from ints, decimal strings or mpf values (used as given)."""
        return cls(tuple(str(v) for v in values), source)


def parse_zeros(text: str, max_count: Optional[int] = None, source: str = "memory") -> ZeroTable:
    if max_count is not None and max_count < 0:
        raise DomainError(f"max_count must be >= 0, got {max_count}")
    texts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            q = Fraction(line)
        except ValueError:
            raise TableFormatError(f"not a decimal ordinate: {line!r}", lineno) from None
        if q <= 0:
            raise DomainError(f"line {lineno}: ordinate must be positive, got {line}")
        texts.append(line)
        if max_count is not None and len(texts) >= max_count:
            break
    if not texts and max_count != 0:
        raise TableFormatError("no ordinates found")
    qs = [Fraction(s) for s in texts]
    if any(b < a for a, b in zip(qs, qs[1:])):
        warnings.warn(f"{source}: ordinates are not sorted; sorting them", ZeroTableWarning, stacklevel=2)
        texts = [s for _, s in sorted(zip(qs, texts))]
        qs.sort()
    if qs and abs(qs[0] - Fraction("14.1347")) > Fraction(1, 1000):
        warnings.warn(f"{source}: first ordinate {texts[0]} is not the first zeta zero", ZeroTableWarning, stacklevel=2)
    return ZeroTable(tuple(texts), source)


def load_zeros(path, max_count: Optional[int] = None) -> ZeroTable:
    """Read one decimal ordinate per line; ``#`` starts a comment."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_zeros(text, max_count, str(path))


def builtin_zeros(max_count: Optional[int] = None) -> ZeroTable:
    """First 100 ordinates, 30 significant digits."""
    text = resources.files(__package__).joinpath("data", "zeros100.txt").read_text(encoding="utf-8")
    return parse_zeros(text, max_count, BUILTIN_TAG)


# ---------------------------------------------------------------------------
# symmetric functions of 1/t^2
# ---------------------------------------------------------------------------

def tail_bound(t_M, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Heuristic size of ``sum_{r>M} 1/t_r^2`` from the zero density ``ln(t/2pi)/2pi``."""
    with ctx.workdps():
        t = mpf(t_M)
        return (mpmath.log(t / (2 * mpmath.pi)) + 1) / (2 * mpmath.pi * t)


def newton_elementary(p: Sequence) -> list:
    """e_1..e_k from power sums p_1..p_k (works for mpf and Fraction alike)."""
    e = [1]
    for k in range(1, len(p) + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e.append(acc / k)
    return e[1:]


def brute_force_elementary(xs: Sequence, k: int):
    """e_k by enumerating all k-subsets; a test oracle only."""
    total = 0
    for combo in combinations(xs, k):
        prod = 1
        for x in combo:
            prod = prod * x
        total += prod
    return total


@dataclass(frozen=True)
class SymmetricSums:
    p: tuple
    e: tuple
    M: int
    tail_bound: object

    def p_k(self, k: int):
        return self.p[k - 1]

    def e_k(self, k: int):
        return self.e[k - 1]


def symmetric_sums(zt: ZeroTable, k_max: int = MAX_ORDER,
                   ctx: PrecisionContext = DEFAULT_CONTEXT, exact: bool = False) -> SymmetricSums:
    """Power sums and elementary symmetric sums of ``{1/t_r^2}``.

    With ``exact=True`` every quantity is a :class:`fractions.Fraction` built
    from the decimal strings, so identities can be checked with ``==``.
    """
    if int(k_max) != k_max or not 1 <= k_max <= MAX_ORDER:
        raise UnsupportedOrderError(f"k_max must be in 1..{MAX_ORDER}, got {k_max}")
    if zt.count < k_max:
        raise DomainError(f"need at least {k_max} zeros, have {zt.count}")
    if exact:
        xs = [1 / (t * t) for t in zt.exact()]
        p = tuple(sum((x ** k for x in xs), Fraction(0)) for k in range(1, k_max + 1))
        e = tuple(newton_elementary(p))
        with ctx.workdps():
            tb = tail_bound(mpf(zt.texts[-1]), ctx)
        return SymmetricSums(p, e, zt.count, tb)
    with ctx.workdps():
        xs = [1 / (t * t) for t in zt.values(ctx)]
        p = tuple(mpmath.fsum(x ** k for x in xs) for k in range(1, k_max + 1))
        e = tuple(newton_elementary(p))
        return SymmetricSums(p, e, zt.count, tail_bound(zt.values(ctx)[-1], ctx))


def jensen_from_zeros(zt: ZeroTable, n: int, table: Optional[CoefficientTable] = None,
                      ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """c_n truncated at the M zeros in ``zt``: ``(-1)^n n! c_0 e_n``.

    c_0 itself comes from the closed form in Gamma(1/4) zeta(1/2); the
    alternating sign reproduces the sign pattern of the tabulated c_n.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"order must be a non-negative integer, got {n!r}")
    if n > MAX_ORDER:
        raise UnsupportedOrderError(f"orders above {MAX_ORDER} are not supported")
    table = table or builtin_table()
    with ctx.workdps():
        c0 = c0_closed_form(table, ctx)
        if n == 0:
            return c0
        sums = symmetric_sums(zt, n, ctx)
        return (-1) ** n * factorial(n) * c0 * sums.e_k(n)


class RhoSum(NamedTuple):
    value: mpf
    identity_rhs: mpf


def rho_sum(zt: ZeroTable, ctx: PrecisionContext = DEFAULT_CONTEXT) -> RhoSum:
    """``sum_r 1/(1/4 + t_r^2)`` against ``1 + gamma/2 - ln(4 pi)/2``."""
    with ctx.workdps():
        quarter = mpf(1) / 4
        value = mpmath.fsum(1 / (quarter + t * t) for t in zt.values(ctx))
        rhs = 1 + euler_gamma(ctx) / 2 - mpmath.log(4 * mpmath.pi) / 2
        return RhoSum(value, rhs)


def hadamard_c0(zt: ZeroTable, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesResult:
    """Partial product ``prod_{r<=M} t_r^2 / (1/4 + t_r^2)``.

    The missing factors multiply to about ``exp(-tail/4)``, so the product
    overshoots c_0 by at most ``product * (1 - exp(-tail/4))`` (heuristic).
    """
    with ctx.workdps():
        quarter = mpf(1) / 4
        prod = mpf(1)
        for t in zt.values(ctx):
            t2 = t * t
            prod *= t2 / (quarter + t2)
        if zt.count == 0:
            return SeriesResult(prod, 0, mpf(1), "heuristic")
        tb = tail_bound(mpf(zt.texts[-1]), ctx)
        return SeriesResult(prod, zt.count, prod * (1 - mpmath.exp(-tb / 4)), "heuristic")
