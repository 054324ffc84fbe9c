"""Arbitrary-precision substrate shared by every other module.

Everything here runs on :mod:`mpmath` numbers.  A :class:`PrecisionContext`
fixes the number of significant decimal digits a caller wants back; the
functions add ``guard_digits`` internally and evaluate under
``mpmath.workdps`` so that the caller's global precision is left untouched.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from mpmath import mpc, mpf

__all__ = [
    "AccuracyError",
    "ComplexValue",
    "DomainError",
    "PoleError",
    "PrecisionContext",
    "SeriesResult",
    "agm",
    "complex_gamma",
    "euler_gamma",
    "gamma_quarter",
    "gamma_reference",
    "DEFAULT_CONTEXT",
]

ComplexValue = mpc
Real = Union[mpf, int, float, str, Fraction]


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PoleError(DomainError):
    """Evaluation was requested at (or numerically on top of) a pole."""


class AccuracyError(ArithmeticError):
    """A numerical procedure failed to reach its requested accuracy.

    The best value found and its error bound are kept on the exception so
    callers can still report them.
    """

    def __init__(self, message: str, value=None, error_bound=None):
        super().__init__(message)
        self.value = value
        self.error_bound = error_bound


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 60
    guard_digits: int = 10

    def __post_init__(self) -> None:
        if int(self.digits) != self.digits or self.digits < 20:
            raise DomainError(f"digits must be an integer >= 20, got {self.digits!r}")
        if int(self.guard_digits) != self.guard_digits or self.guard_digits < 0:
            raise DomainError(f"guard_digits must be a non-negative integer, got {self.guard_digits!r}")

    @property
    def dps(self) -> int:
        """Internal working precision in decimal digits."""
        return self.digits + self.guard_digits

    @property
    def eps(self) -> mpf:
        with mpmath.workdps(self.dps):
            return mpf(10) ** (-self.digits)

    def workdps(self, extra: int = 0) -> contextlib.AbstractContextManager:
        return mpmath.workdps(self.dps + extra)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits=digits, guard_digits=self.guard_digits)


DEFAULT_CONTEXT = PrecisionContext()


@dataclass(frozen=True)
class SeriesResult:
    """A value plus how many terms produced it and how far off it may be."""

    value: object
    terms_used: int
    error_bound: mpf
    bound_kind: str = "heuristic"

    def __post_init__(self) -> None:
        if self.terms_used < 0:
            raise DomainError("terms_used must be non-negative")
        if self.error_bound < 0:
            raise DomainError("error_bound must be non-negative")
        if self.bound_kind not in ("rigorous", "heuristic"):
            raise DomainError(f"unknown bound kind {self.bound_kind!r}")


def _finite(x) -> bool:
    if isinstance(x, mpc):
        return mpmath.isfinite(x.real) and mpmath.isfinite(x.imag)
    return mpmath.isfinite(x)


# --------------------------------------------------------------------------
# AGM and Gamma(1/4)
# --------------------------------------------------------------------------

def agm(a: Real, b: Real, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Arithmetic-geometric mean of two positive reals.

    Iterates until ``|a_k - b_k| <= eps * a_k`` at working precision, then
    takes one more arithmetic step.  The pair is sorted first so the result
    does not depend on argument order.
    """
    with ctx.workdps():
        a, b = mpf(a), mpf(b)
        if not (a > 0 and b > 0):
            raise DomainError(f"agm requires positive arguments, got {a}, {b}")
        if b > a:
            a, b = b, a
        tol = mpf(10) ** (-ctx.dps)
        for _ in range(10_000):
            if abs(a - b) <= tol * a:
                break
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
        else:  # pragma: no cover - quadratic convergence makes this unreachable
            raise AccuracyError("agm did not converge", value=a)
        return (a + b) / 2


def gauss_constant(ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """G = 1 / agm(1, sqrt 2)."""
    with ctx.workdps():
        return 1 / agm(1, mpmath.sqrt(2), ctx)


def gamma_quarter(ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Gamma(1/4) = sqrt(2 G sqrt(2 pi^3)) with G the Gauss constant."""
    with ctx.workdps():
        g = gauss_constant(ctx)
        return mpmath.sqrt(2 * g * mpmath.sqrt(2 * mpmath.pi ** 3))


# --------------------------------------------------------------------------
# Complex gamma (Spouge)
# --------------------------------------------------------------------------

def spouge_parameter(digits: int) -> int:
    return math.ceil(digits * math.log(10) / math.log(2 * math.pi)) + 2


@lru_cache(maxsize=16)
def _spouge_coefficients(a: int, dps: int) -> tuple:
    # c_k alternate in sign and reach ~e^a in size, hence the padded dps
    with mpmath.workdps(dps):
        coeffs = [mpmath.sqrt(2 * mpmath.pi)]
        fact = mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            ck = (-1) ** (k - 1) / fact * mpf(a - k) ** (k - mpf(1) / 2) * mpmath.exp(a - k)
            coeffs.append(ck)
        return tuple(coeffs)


def _spouge(z: mpc, a: int, dps: int) -> mpc:
    """Gamma(z) for Re z >= 1/2 by Spouge's formula applied to z - 1."""
    coeffs = _spouge_coefficients(a, dps)
    with mpmath.workdps(dps):
        w = z - 1
        acc = mpc(coeffs[0])
        for k in range(1, a):
            acc += coeffs[k] / (w + k)
        base = w + a
        return mpmath.exp((w + mpf(1) / 2) * mpmath.log(base) - base) * acc


def complex_gamma(z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpc:
    """Gamma function for complex argument.

    Spouge's approximation with parameter ``a`` chosen from ``ctx.dps``
    covers ``Re z >= 1/2``; the left half-plane goes through the reflection
    formula.  Raises :class:`PoleError` at non-positive integers.
    """
    a = spouge_parameter(ctx.dps)
    inner = ctx.dps + a // 2 + 10
    with mpmath.workdps(inner):
        z = mpc(z)
        if z.imag == 0 and z.real <= 0 and z.real == mpmath.floor(z.real):
            raise PoleError(f"Gamma has a pole at {mpmath.nstr(z.real, 10)}")
        if z.real < mpf(1) / 2:
            s = mpmath.sinpi(z)
            if s == 0:
                raise PoleError(f"Gamma has a pole at {z}")
            result = mpmath.pi / (s * _spouge(1 - z, a, inner))
        else:
            result = _spouge(z, a, inner)
    with ctx.workdps():
        result = +result
    if not _finite(result):
        raise ArithmeticError(f"Gamma overflowed at {z}")
    return result


# --------------------------------------------------------------------------
# Euler's constant from sum (-1)^n zeta(n)/n
# --------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _bernoulli_even_table(count: int) -> tuple:
    # private copy so the reference series stays independent of constants.py
    b = [Fraction(0)] * (2 * count + 1)
    b[0] = Fraction(1)
    for m in range(1, 2 * count + 1):
        b[m] = -sum(Fraction(math.comb(m + 1, k)) * b[k] for k in range(m)) / (m + 1)
    return tuple(b[2 * j] for j in range(count + 1))


def _zeta_int(n: int, dps: int) -> tuple:
    """zeta(n), n >= 2, by Dirichlet summation plus an Euler-Maclaurin tail.

    Returns (value, error_bound).
    """
    with mpmath.workdps(dps + 5):
        eps = mpf(10) ** (-dps)
        K = dps + 10
        head = mpmath.fsum(mpf(k) ** (-n) for k in range(1, K))
        Kf = mpf(K)
        lead = Kf ** (1 - n) / (n - 1)
        if lead < eps * head:
            return head, lead
        tail = lead + Kf ** (-n) / 2
        b2 = _bernoulli_even_table(60)
        rising = mpf(n)
        last = mpf(0)
        for j in range(1, 60):
            # rising = n (n+1) ... (n+2j-2)
            if j > 1:
                rising *= (n + 2 * j - 3) * (n + 2 * j - 2)
            term = mpf(b2[j].numerator) / b2[j].denominator / mpmath.factorial(2 * j)
            term *= rising * Kf ** (-n - 2 * j + 1)
            tail += term
            last = abs(term)
            if last < eps * head:
                break
        return head + tail, last


def gamma_reference(ctx: PrecisionContext, terms: int, accelerate: bool = False) -> SeriesResult:
    """Partial sum of ``sum_{n>=2} (-1)^n zeta(n) / n``.

    With ``accelerate=False`` this is the literal partial sum; the alternating
    remainder bound gives ``error_bound``.  With ``accelerate=True`` the
    ``(-1)^n / n`` part is summed in closed form (``1 - ln 2``) and only the
    geometrically decaying ``(-1)^n (zeta(n) - 1) / n`` terms are added, so
    a few hundred terms reach working precision.
    """
    if int(terms) != terms or terms < 2:
        raise DomainError(f"terms must be an integer >= 2, got {terms!r}")
    dps = ctx.dps
    with mpmath.workdps(dps + 5):
        total = 1 - mpmath.log(2) if accelerate else mpf(0)
        eval_err = mpf(0)
        for n in range(2, terms + 1):
            z, err = _zeta_int(n, dps + 5)
            if accelerate:
                z -= 1
            total += (-1) ** n * z / n
            eval_err += err / n
        z_next, _ = _zeta_int(terms + 1, dps + 5)
        if accelerate:
            z_next -= 1
        remainder = abs(z_next) / (terms + 1)
        bound = remainder + eval_err + mpf(10) ** (-dps)
    with mpmath.workdps(dps):
        return SeriesResult(+total, terms - 1, +bound, "rigorous")


def euler_gamma(ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Euler's constant at ``ctx`` precision through :func:`gamma_reference`."""
    # zeta(n) - 1 ~ 2^-n, so ~3.33 terms per digit
    terms = int(ctx.dps * 3.33) + 10
    return gamma_reference(ctx, terms, accelerate=True).value
