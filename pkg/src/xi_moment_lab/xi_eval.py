"""Evaluate xi and zeta from the truncated Taylor series about s = 1/2."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, TextIO

import mpmath
from mpmath import mpc, mpf

from .coefficients import CoefficientTable, convert_value, family
from .numerics import DEFAULT_CONTEXT, DomainError, PoleError, PrecisionContext, complex_gamma
from .zeros import ZeroTable

LAST_TERM_TOLERANCE = mpf("1e-6")
POLE_RADIUS = mpf("1e-6")
CSV_HEADER = ("re", "im", "xi_re", "xi_im", "xi_abs")


class RadiusWarning(UserWarning):
    """Evaluation point lies outside the series' validity radius."""


def _a_coefficients(table: CoefficientTable, N: int, column: str) -> tuple:
    """a_0..a_2N, each derived from the requested column only."""
    fam = family(column)
    if fam == "a":
        return tuple(table.a(n) for n in range(N + 1))
    return tuple(convert_value(n, table.value(fam, n), fam, "a") for n in range(N + 1))


@dataclass(frozen=True)
class XiSeries:
    table: CoefficientTable
    N: int = 20
    column: str = "a"
    ctx: PrecisionContext = DEFAULT_CONTEXT
    coefficients: tuple = field(init=False, repr=False, compare=False)
    validity_radius: mpf = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        if self.N > self.table.max_index:
            raise DomainError(f"N={self.N} exceeds table rows 0..{self.table.max_index}")
        with self.ctx.workdps():
            coeffs = _a_coefficients(self.table, self.N, self.column)
            last = abs(coeffs[-1])
            radius = (LAST_TERM_TOLERANCE / last) ** (mpf(1) / (2 * self.N))
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "validity_radius", radius)


def _horner(coeffs: tuple, w):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * w + c
    return acc


def xi_at_offset(u, xs: XiSeries) -> mpc:
    """``sum a_2n u^(2n)`` with ``u = s - 1/2``, by Horner in ``u^2``."""
    with xs.ctx.workdps():
        u = mpc(u)
        if abs(u) > xs.validity_radius:
            warnings.warn(
                f"|s - 1/2| = {mpmath.nstr(abs(u), 6)} exceeds validity radius "
                f"{mpmath.nstr(xs.validity_radius, 6)}", RadiusWarning, stacklevel=3)
        return _horner(xs.coefficients, u * u)


def xi(s, xs: XiSeries) -> mpc:
    with xs.ctx.workdps():
        return xi_at_offset(mpc(s) - mpf(1) / 2, xs)


def zeta(s, xs: XiSeries) -> mpc:
    """``xi(s) pi^(s/2) / ((s - 1) Gamma(1 + s/2))``.

    The column the XiSeries was built from (a, bhat or c) decides which
    coefficient family feeds the series.
    """
    ctx = xs.ctx
    with ctx.workdps():
        s = mpc(s)
        if abs(s - 1) < POLE_RADIUS:
            raise PoleError(f"s = {mpmath.nstr(s, 10)} is within 1e-6 of the pole at s = 1")
        g = complex_gamma(1 + s / 2, ctx)
        return xi(s, xs) * mpmath.power(mpmath.pi, s / 2) / ((s - 1) * g)


class HadamardComparison(NamedTuple):
    product_value: mpf
    taylor_value: mpf


def hadamard_eval(x, zt: ZeroTable, xs: XiSeries) -> HadamardComparison:
    """Truncated product and truncated series for ``2 xi(1/2 + i x)``."""
    if zt.count < 1:
        raise DomainError("need at least one zero")
    with xs.ctx.workdps():
        x = mpf(x)
        x2 = x * x
        quarter = mpf(1) / 4
        prod = mpf(1)
        for t in zt.values(xs.ctx):
            t2 = t * t
            prod *= (t2 - x2) / (quarter + t2)
        # (i x)^2 = -x^2 keeps everything real
        taylor = 2 * _horner(xs.coefficients, -x2)
        return HadamardComparison(prod, taylor)


def power_basis(xs: XiSeries, J: int) -> list:
    """G_0..G_J with ``xi(s) = sum G_j s^j`` for the truncated series."""
    if int(J) != J or J < 0 or J > 2 * xs.N:
        raise DomainError(f"J must be in 0..{2 * xs.N}, got {J!r}")
    with xs.ctx.workdps():
        half = mpf(-1) / 2
        out = []
        for j in range(J + 1):
            total = mpf(0)
            for n, a in enumerate(xs.coefficients):
                if 2 * n >= j:
                    total += a * math.comb(2 * n, j) * half ** (2 * n - j)
            out.append(total)
        return out


@dataclass(frozen=True)
class GridSpec:
    re_min: Fraction = Fraction(0)
    re_max: Fraction = Fraction(1)
    im_min: Fraction = Fraction(-15)
    im_max: Fraction = Fraction(15)
    steps: int = 61

    def __post_init__(self) -> None:
        for name in ("re_min", "re_max", "im_min", "im_max"):
            object.__setattr__(self, name, Fraction(str(getattr(self, name))))
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps!r}")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError("grid ranges must be non-degenerate")

    def axis(self, lo: Fraction, hi: Fraction) -> list:
        k = self.steps - 1
        return [lo + (hi - lo) * i / k for i in range(self.steps)]

    def nodes(self):
        """Yield exact (re, im) pairs, im-major."""
        res = self.axis(self.re_min, self.re_max)
        for im in self.axis(self.im_min, self.im_max):
            for re in res:
                yield re, im


def _q(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


def grid_rows(spec: GridSpec, xs: XiSeries):
    """(re, im, xi) per node.

    The offset ``re - 1/2`` is formed exactly before rounding, so mirrored
    nodes get offsets that are exact negatives of each other.
    """
    half = Fraction(1, 2)
    with xs.ctx.workdps():
        for re, im in spec.nodes():
            u = mpc(_q(re - half), _q(im))
            yield re, im, xi_at_offset(u, xs)


def _fmt(x, digits: int) -> str:
    return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=digits + 5) if x != 0 else "0"


def write_grid(spec: GridSpec, xs: XiSeries, out: TextIO) -> int:
    """Write the CSV grid to an open text stream; returns the row count."""
    digits = xs.ctx.digits
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    rows = 0
    with xs.ctx.workdps():
        for re, im, v in grid_rows(spec, xs):
            if not (mpmath.isfinite(v.real) and mpmath.isfinite(v.imag)):
                raise ArithmeticError(f"non-finite xi at ({re}, {im})")
            w.writerow((_fmt(_q(re), digits), _fmt(_q(im), digits),
                        _fmt(v.real, digits), _fmt(v.imag, digits), _fmt(abs(v), digits)))
            rows += 1
    return rows


def grid(spec: GridSpec, xs: XiSeries, out=None) -> Optional[str]:
    """Emit the grid to a path or stream; with ``out=None`` return the CSV text."""
    if out is None:
        buf = io.StringIO()
        write_grid(spec, xs, buf)
        return buf.getvalue()
    if hasattr(out, "write"):
        write_grid(spec, xs, out)
        return None
    with open(out, "w", encoding="utf-8", newline="") as fh:
        write_grid(spec, xs, fh)
    return None
