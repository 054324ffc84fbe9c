"""Constants rebuilt from the xi Taylor coefficients.

Euler's constant three ways (one per coefficient family), Lugo's constant,
Gamma(1/4) zeta(1/2), even-index Bernoulli numbers, zeta(2r), and a few
exact-rational helpers (Bernoulli and Gregory numbers) used as oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import mpmath
from mpmath import mpf

from .coefficients import CoefficientTable, family
from .numerics import DEFAULT_CONTEXT, DomainError, PrecisionContext, SeriesResult, gamma_quarter

METHODS = ("a", "b", "c")


def _method(name: str) -> str:
    fam = family(name)
    return {"a": "a", "bhat": "b", "c": "c"}[fam]


def _fraction_to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


def _require_rows(table: CoefficientTable, N: int, start: int = 1) -> None:
    if N > table.max_index:
        raise DomainError(f"N={N} needs rows {start}..{N}; table stops at {table.max_index}")


# ---------------------------------------------------------------------------
# Euler's constant and Lugo's constant
# ---------------------------------------------------------------------------

# gamma = log(4 pi) - 2 + PREFACTOR[m] * inner_sum(m)
PREFACTOR = {"a": 16, "b": 128, "c": 8}


def _inner_term(method: str, table: CoefficientTable, n: int) -> mpf:
    if method == "a":
        return n * table.a(n) / mpf(4) ** n
    if method == "b":
        return n * table.bhat(n) / mpmath.factorial(2 * n)
    return n * (-1) ** n * table.c(n) / (mpf(4) ** n * mpmath.factorial(n))


def inner_sum(method: str, table: CoefficientTable, N: int,
              ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesResult:
    """``sum_{n=1}^{N}`` of ``n a_2n / 4^n``, ``n bhat_n / (2n)!`` or ``n (-1)^n c_n / (4^n n!)``."""
    method = _method(method)
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    _require_rows(table, N)
    with ctx.workdps():
        terms = [_inner_term(method, table, n) for n in range(1, N + 1)]
        total = mpmath.fsum(terms)
        bound = 10 * abs(terms[-1]) if terms else mpf(0)
        return SeriesResult(total, N, bound, "heuristic")


@dataclass(frozen=True)
class GammaDecomposition:
    constant_part: mpf
    series_part: SeriesResult
    method: str

    @property
    def value(self) -> mpf:
        return self.constant_part + self.series_part.value

    @property
    def error_bound(self) -> mpf:
        return self.series_part.error_bound


def gamma_constant_part(ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """log(4 pi) - 2."""
    with ctx.workdps():
        return mpmath.log(4 * mpmath.pi) - 2


def gamma_series(method: str, table: CoefficientTable, N: int,
                 ctx: PrecisionContext = DEFAULT_CONTEXT) -> GammaDecomposition:
    """Euler's constant as ``log(4 pi) - 2 + prefactor * inner_sum``.

    ``N = 0`` gives the bare constant part.
    """
    method = _method(method)
    with ctx.workdps():
        inner = inner_sum(method, table, N, ctx)
        k = PREFACTOR[method]
        series = SeriesResult(k * inner.value, inner.terms_used, k * inner.error_bound, "heuristic")
        return GammaDecomposition(gamma_constant_part(ctx), series, {"a": "a_series", "b": "b_series", "c": "c_series"}[method])


def lugo(method: str, table: CoefficientTable, N: int,
         ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesResult:
    """Lugo's constant ``3/2 - log(2 pi) - S`` with S the gamma_series correction."""
    dec = gamma_series(method, table, N, ctx)
    with ctx.workdps():
        value = mpf(3) / 2 - mpmath.log(2 * mpmath.pi) - dec.series_part.value
        return SeriesResult(value, N, dec.error_bound, "heuristic")


def lugo_direct(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """``sum_{i,j<=n} 1/(i+j) - 2 n ln 2 + ln n`` at finite n.

    The double sum is regrouped by ``k = i + j`` (``k - 1`` pairs for
    ``k <= n + 1``, ``2n + 1 - k`` above), so the cost is O(n).
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    with ctx.workdps():
        double = mpmath.fsum(mpf(min(k - 1, 2 * n + 1 - k)) / k for k in range(2, 2 * n + 1))
        return double - 2 * mpmath.log(2) * n + mpmath.log(n)


# ---------------------------------------------------------------------------
# Gamma(1/4) zeta(1/2)
# ---------------------------------------------------------------------------

def gamma_quarter_zeta_half(table: CoefficientTable,
                            ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """``Gamma(1/4) zeta(1/2) = -64 pi^(1/4) bhat_0``."""
    with ctx.workdps():
        return -64 * mpmath.root(mpmath.pi, 4) * table.bhat(0)


def gamma_quarter_zeta_half_series(table: CoefficientTable, N: int,
                                   ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesResult:
    """Same quantity as ``8 pi^(1/4) (sum_{n=1}^{N} a_2n / 4^n - 1/2)``."""
    _require_rows(table, N)
    with ctx.workdps():
        terms = [table.a(n) / mpf(4) ** n for n in range(1, N + 1)]
        k = 8 * mpmath.root(mpmath.pi, 4)
        bound = k * 10 * abs(terms[-1]) if terms else mpf(0)
        return SeriesResult(k * (mpmath.fsum(terms) - mpf(1) / 2), N, bound, "heuristic")


def zeta_half(table: CoefficientTable, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """zeta(1/2) from bhat_0 and the AGM value of Gamma(1/4)."""
    with ctx.workdps():
        return gamma_quarter_zeta_half(table, ctx) / gamma_quarter(ctx)


def c0_closed_form(table: CoefficientTable, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """``c_0 = -Gamma(1/4) zeta(1/2) / (4 pi^(1/4))``."""
    with ctx.workdps():
        return -gamma_quarter_zeta_half(table, ctx) / (4 * mpmath.root(mpmath.pi, 4))


# ---------------------------------------------------------------------------
# exact Bernoulli and Gregory numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _akiyama_tanigawa(k: int) -> Fraction:
    a = [Fraction(1, m + 1) for m in range(k + 1)]
    for m in range(k, 0, -1):
        for j in range(m):
            a[j] = (j + 1) * (a[j] - a[j + 1])
    return a[0]


def bernoulli_exact(k: int) -> Fraction:
    """B_k as an exact rational, with the convention ``B_1 = -1/2``.

    The Akiyama-Tanigawa tableau natively yields ``B_1 = +1/2``; only that
    index is flipped.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"Bernoulli index must be a non-negative integer, got {k!r}")
    b = _akiyama_tanigawa(k)
    return -b if k == 1 else b


def von_staudt_denominator(k: int) -> int:
    """Product of primes p with (p - 1) | k, for even k >= 2."""
    if k < 2 or k % 2:
        raise DomainError("von Staudt-Clausen applies to even k >= 2")
    out = 1
    for d in range(1, k + 1):
        if k % d == 0:
            p = d + 1
            if all(p % q for q in range(2, math.isqrt(p) + 1)):
                out *= p
    return out


@lru_cache(maxsize=None)
def _gregory_list(n: int) -> tuple:
    g = [Fraction(1)]
    for m in range(1, n + 1):
        # coefficients of z/ln(1+z) times ln(1+z)/z = sum (-1)^k z^k / (k+1) must vanish
        g.append(-sum(Fraction((-1) ** k, k + 1) * g[m - k] for k in range(1, m + 1)))
    return tuple(g)


def gregory_coefficient(n: int) -> Fraction:
    """Order-1 Gregory coefficient G_n: ``z / ln(1 + z) = sum G_n z^n``."""
    if int(n) != n or n < 0:
        raise DomainError(f"Gregory index must be a non-negative integer, got {n!r}")
    return _gregory_list(n)[n]


# ---------------------------------------------------------------------------
# Bernoulli numbers from the coefficient series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BernoulliValue:
    index: int
    series_value: SeriesResult
    exact_value: Fraction
    method: str

    @property
    def value(self) -> mpf:
        return self.series_value.value

    def delta(self) -> mpf:
        return self.series_value.value - _fraction_to_mpf(self.exact_value)


def _bernoulli_prefactor(r: int) -> mpf:
    # (-1)^(r-1) (2r)! 2^(1-2r) / (pi^r (2r-1) r!); at r = 0 this is +2
    num = mpf((-1) ** (r - 1) * math.factorial(2 * r)) * mpf(2) ** (1 - 2 * r)
    return num / (mpmath.pi ** r * (2 * r - 1) * math.factorial(r))


def _bernoulli_term(method: str, table: CoefficientTable, n: int, arg: mpf) -> mpf:
    # every branch returns a_2n * arg^(2n) expressed in the chosen family
    if method == "a":
        return table.a(n) * arg ** (2 * n)
    if method == "b":
        return 8 * mpf(4) ** n * table.bhat(n) * arg ** (2 * n) / mpmath.factorial(2 * n)
    return (-1) ** n * table.c(n) * arg ** (2 * n) / (2 * mpmath.factorial(n))


def _taylor_sum_at(method: str, table: CoefficientTable, N: int, arg: mpf) -> tuple:
    terms = [_bernoulli_term(method, table, n, arg) for n in range(N + 1)]
    return mpmath.fsum(terms), abs(terms[-1])


def bernoulli_series(r: int, method: str, table: CoefficientTable, N: int,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> BernoulliValue:
    """B_2r from ``sum_{n<=N} a_2n (2r - 1/2)^(2n)`` in the chosen family."""
    if int(r) != r or r < 0:
        raise DomainError(f"r must be a non-negative integer, got {r!r}")
    method = _method(method)
    _require_rows(table, N, start=0)
    with ctx.workdps():
        arg = 2 * r - mpf(1) / 2
        total, last = _taylor_sum_at(method, table, N, arg)
        pre = _bernoulli_prefactor(r)
        series = SeriesResult(pre * total, N + 1, 10 * abs(pre) * last, "heuristic")
    name = {"a": "a_series", "b": "b_series", "c": "c_series"}[method]
    return BernoulliValue(2 * r, series, bernoulli_exact(2 * r), name)


def zeta_even(r: int, table: CoefficientTable, N: int, method: str = "a",
              ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesResult:
    """``zeta(2r) = pi^r / ((2r - 1) r!) sum_{n<=N} a_2n (2r - 1/2)^(2n)``."""
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    method = _method(method)
    _require_rows(table, N, start=0)
    with ctx.workdps():
        total, last = _taylor_sum_at(method, table, N, 2 * r - mpf(1) / 2)
        k = mpmath.pi ** r / ((2 * r - 1) * math.factorial(r))
        return SeriesResult(k * total, N + 1, 10 * k * last, "heuristic")


def zeta_even_exact(r: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """``(-1)^(r-1) (2 pi)^(2r) B_2r / (2 (2r)!)`` with exact B_2r."""
    if r < 1:
        raise DomainError("r must be >= 1")
    with ctx.workdps():
        b = _fraction_to_mpf(bernoulli_exact(2 * r))
        return (-1) ** (r - 1) * (2 * mpmath.pi) ** (2 * r) * b / (2 * math.factorial(2 * r))


class BridgeResult(NamedTuple):
    lhs: mpf
    rhs: mpf
    residual: mpf


class ComplexBranchError(ArithmeticError):
    """An even root of a negative number was requested."""


def gregory_bridge(r: int, table: CoefficientTable, N: int, method: str = "b",
                   ctx: PrecisionContext = DEFAULT_CONTEXT) -> BridgeResult:
    """Compare the series value of B_2r with ``(-G_2r (2r-1) (2r)!)^(1/(2r-1))``.

    Both sides and ``lhs - rhs`` are returned; nothing is asserted.
    """
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    lhs = bernoulli_series(r, method, table, N, ctx).value
    radicand = -gregory_coefficient(2 * r) * (2 * r - 1) * math.factorial(2 * r)
    k = 2 * r - 1
    with ctx.workdps():
        x = _fraction_to_mpf(radicand)
        if x < 0 and k % 2 == 0:
            raise ComplexBranchError(f"even root {k} of negative radicand {radicand}")
        rhs = mpmath.root(x, k) if x >= 0 else -mpmath.root(-x, k)
        return BridgeResult(lhs, rhs, lhs - rhs)


class BernoulliPartialSums(NamedTuple):
    sums: list
    terms: list
    smallest_term_index: int

    @property
    def optimal_value(self) -> Fraction:
        return self.sums[self.smallest_term_index - 1]


def gamma_bernoulli_partial(N: int) -> BernoulliPartialSums:
    """Partial sums ``1/2 + sum_{n=1}^{k} B_2n / (2n)`` for k = 1..N, exactly.

    The series diverges; ``smallest_term_index`` is the n of the smallest
    ``|B_2n / (2n)|`` seen, i.e. the optimal truncation point.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    terms = [bernoulli_exact(2 * n) / (2 * n) for n in range(1, N + 1)]
    sums = []
    acc = Fraction(1, 2)
    for t in terms:
        acc += t
        sums.append(acc)
    smallest = min(range(N), key=lambda i: abs(terms[i])) + 1
    return BernoulliPartialSums(sums, terms, smallest)
