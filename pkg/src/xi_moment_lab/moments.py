"""Turán moments by composite Gauss-Legendre quadrature.

``bhat_n = int_0^inf t^(2n) Phi(t) dt`` with

    Phi(t) = sum_{k>=1} (2 k^4 pi^2 e^(9t) - 3 k^2 pi e^(5t)) exp(-k^2 pi e^(4t))

plus the independent route to ``a_2n`` through the theta-function integral
over ``x in [1, inf)``.  Both integrands are entire and decay
double-exponentially, so fixed-order Gauss-Legendre on uniformly refined
panels converges geometrically; refinement stops once two successive panel
counts agree to the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mpf

from .coefficients import CoefficientTable, Entry, Row, TableFormatError, convert
from .numerics import (
    DEFAULT_CONTEXT,
    AccuracyError,
    DomainError,
    PrecisionContext,
    SeriesResult,
)

CACHE_HEADER = "# xi-moment-lab moments digits="


@dataclass(frozen=True)
class QuadratureConfig:
    t_max: float = 3.0
    panel_rule: str = "gauss_legendre_composite"
    target_abs_error: Optional[mpf] = None  # default 10^(-digits+5)
    series_cutoff_rel: Optional[mpf] = None  # default 10^(-digits-10)
    x_max: Optional[mpf] = None  # default e^12, upper end of the x-integral
    nodes_per_panel: int = 24
    initial_panels: int = 4
    max_doublings: int = 20

    def __post_init__(self) -> None:
        if self.panel_rule != "gauss_legendre_composite":
            raise DomainError(f"unsupported panel rule {self.panel_rule!r}")
        if not self.t_max > 0:
            raise DomainError("t_max must be positive")
        if self.nodes_per_panel < 2 or self.initial_panels < 1:
            raise DomainError("need at least 2 nodes per panel and 1 panel")

    def target(self, ctx: PrecisionContext) -> mpf:
        if self.target_abs_error is not None:
            return mpf(self.target_abs_error)
        return mpf(10) ** (-ctx.digits + 5)

    def cutoff(self, ctx: PrecisionContext) -> mpf:
        if self.series_cutoff_rel is not None:
            return mpf(self.series_cutoff_rel)
        return mpf(10) ** (-ctx.digits - 10)

    def upper_x(self) -> mpf:
        return mpmath.exp(12) if self.x_max is None else mpf(self.x_max)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class MomentRecord:
    n: int
    value: mpf
    error_bound: mpf
    source: str = "quadrature"

    def __post_init__(self) -> None:
        if self.source not in ("quadrature", "fixture"):
            raise DomainError(f"unknown moment source {self.source!r}")
        if self.error_bound < 0:
            raise DomainError("error bound must be non-negative")


# ---------------------------------------------------------------------------
# Gauss-Legendre nodes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def gauss_legendre(m: int, dps: int) -> tuple:
    """Nodes and weights of the m-point rule on [-1, 1], ascending nodes."""
    with mpmath.workdps(dps + 10):
        tol = mpf(10) ** (-dps - 5)
        half = []
        for k in range(1, (m + 1) // 2 + 1):
            x = mpmath.cos(mpmath.pi * (k - mpf(1) / 4) / (m + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for j in range(2, m + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = m * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tol:
                    break
            else:  # pragma: no cover
                raise AccuracyError(f"Legendre root {k} of P_{m} did not converge")
            p0, p1 = mpf(1), x
            for j in range(2, m + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = m * (x * p1 - p0) / (x * x - 1)
            half.append((x, 2 / ((1 - x * x) * dp * dp)))
        pairs = []
        for x, w in half:
            pairs.append((x, w))
            if abs(x) > tol:
                pairs.append((-x, w))
        pairs.sort(key=lambda p: p[0])
    with mpmath.workdps(dps):
        return tuple(+x for x, _ in pairs), tuple(+w for _, w in pairs)


def _composite(integrand: Callable[[mpf], Sequence[mpf]], a: mpf, b: mpf,
               panels: int, nodes: tuple, weights: tuple, width: int) -> list:
    h = (b - a) / panels
    acc = [mpf(0)] * width
    for p in range(panels):
        left = a + p * h
        for x, w in zip(nodes, weights):
            vals = integrand(left + h * (x + 1) / 2)
            scale = w * h / 2
            for i in range(width):
                acc[i] += scale * vals[i]
    return acc


def _refine(integrand, a, b, width, cfg: QuadratureConfig, ctx: PrecisionContext, target: mpf):
    """Panel doubling until every component changes by <= target."""
    nodes, weights = gauss_legendre(cfg.nodes_per_panel, ctx.dps)
    panels = cfg.initial_panels
    prev = _composite(integrand, a, b, panels, nodes, weights, width)
    delta = [mpf("inf")] * width
    for _ in range(cfg.max_doublings):
        panels *= 2
        cur = _composite(integrand, a, b, panels, nodes, weights, width)
        delta = [abs(u - v) for u, v in zip(cur, prev)]
        prev = cur
        if max(delta) <= target:
            return cur, delta, panels
    raise AccuracyError(
        f"quadrature did not reach {mpmath.nstr(target, 3)} after {cfg.max_doublings} doublings",
        value=prev, error_bound=delta)


# ---------------------------------------------------------------------------
# Phi(t) and moments
# ---------------------------------------------------------------------------

def phi(t, ctx: PrecisionContext = DEFAULT_CONTEXT, cutoff_rel=None) -> mpf:
    """Phi(t) for t >= 0, truncating the k-sum at the first negligible term."""
    with ctx.workdps():
        t = mpf(t)
        if t < 0:
            raise DomainError(f"phi needs t >= 0, got {t}")
        cutoff = mpf(10) ** (-ctx.digits - 10) if cutoff_rel is None else mpf(cutoff_rel)
        pi = mpmath.pi
        e4, e5, e9 = mpmath.exp(4 * t), mpmath.exp(5 * t), mpmath.exp(9 * t)
        total = mpf(0)
        k = 1
        while True:
            k2 = k * k
            term = (2 * k2 * k2 * pi ** 2 * e9 - 3 * k2 * pi * e5) * mpmath.exp(-k2 * pi * e4)
            total += term
            if abs(term) < cutoff * abs(total):
                break
            k += 1
        if not total > 0:
            raise AccuracyError(f"Phi({mpmath.nstr(t, 10)}) evaluated non-positive", value=total)
        return total


def phi_envelope(t, n: int) -> mpf:
    """2 pi^2 e^(9t) exp(-pi e^(4t)) t^(2n): size of the leading term of t^(2n) Phi(t)."""
    t = mpf(t)
    return 2 * mpmath.pi ** 2 * mpmath.exp(9 * t - mpmath.pi * mpmath.exp(4 * t)) * t ** (2 * n)


def _moment_tail(t_max: mpf, n: int) -> mpf:
    # log-derivative of the envelope is <= -rate beyond t_max; factor 2 covers k >= 2
    rate = 4 * mpmath.pi * mpmath.exp(4 * t_max) - 9 - 2 * n / t_max
    if rate <= 0:
        raise DomainError(f"t_max={t_max} too small for a tail bound at n={n}")
    return 2 * phi_envelope(t_max, n) / rate


def _check_envelope(cfg: QuadratureConfig, n_max: int, ctx: PrecisionContext) -> None:
    t_max = mpf(cfg.t_max)
    if not phi_envelope(t_max, n_max) < cfg.target(ctx) / 10:
        raise DomainError(
            f"t_max={cfg.t_max} leaves envelope {mpmath.nstr(phi_envelope(t_max, n_max), 3)} "
            f">= target/10 for n={n_max}")


def _moments(ns: Sequence[int], cfg: QuadratureConfig, ctx: PrecisionContext) -> list:
    ns = list(ns)
    if not ns or min(ns) < 0:
        raise DomainError(f"moment indices must be non-negative, got {ns}")
    with ctx.workdps():
        _check_envelope(cfg, max(ns), ctx)
        cutoff = cfg.cutoff(ctx)
        target = cfg.target(ctx)

        def integrand(t):
            f = phi(t, ctx, cutoff)
            t2 = t * t
            return [f * t2 ** n for n in ns]

        t_max = mpf(cfg.t_max)
        values, delta, _ = _refine(integrand, mpf(0), t_max, len(ns), cfg, ctx, target)
        return [MomentRecord(n, v, d + _moment_tail(t_max, n), "quadrature")
                for n, v, d in zip(ns, values, delta)]


def turan_moment(n: int, cfg: QuadratureConfig = DEFAULT_CONFIG,
                 ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentRecord:
    """``int_0^inf t^(2n) Phi(t) dt`` on ``[0, t_max]`` with an error bound."""
    if int(n) != n or n < 0:
        raise DomainError(f"moment index must be a non-negative integer, got {n!r}")
    return _moments([n], cfg, ctx)[0]


def compute_moments(n_max: int, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Moments 0..n_max sharing one set of Phi evaluations."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    return _moments(range(n_max + 1), cfg, ctx)


def table_from_moments(records: Sequence[MomentRecord],
                       ctx: PrecisionContext = DEFAULT_CONTEXT,
                       provenance: str = "quadrature") -> CoefficientTable:
    records = sorted(records, key=lambda r: r.n)
    with ctx.workdps():
        rows = tuple(Row(r.n, bhat=Entry.from_value(r.value, ctx.digits)) for r in records)
        bounds = {("bhat", r.n): r.error_bound for r in records}
        table = CoefficientTable(rows, provenance=provenance, error_bounds=bounds)
        return convert(table, "bhat", ctx)


def moment_table(n_max: int, cfg: QuadratureConfig = DEFAULT_CONFIG,
                 ctx: PrecisionContext = DEFAULT_CONTEXT) -> CoefficientTable:
    """Coefficient table built from scratch by quadrature."""
    return table_from_moments(compute_moments(n_max, cfg, ctx), ctx)


# ---------------------------------------------------------------------------
# a_2n through the theta-function integral over x in [1, inf)
# ---------------------------------------------------------------------------

def _theta_kernel(x: mpf, cutoff: mpf) -> mpf:
    """d/dx[x^(3/2) psi'(x)] = sum_m (m^4 pi^2 x^(3/2) - 3/2 m^2 pi x^(1/2)) e^(-m^2 pi x)."""
    pi = mpmath.pi
    sx = mpmath.sqrt(x)
    total = mpf(0)
    m = 1
    while True:
        m2 = m * m
        term = (m2 * m2 * pi ** 2 * x * sx - mpf(3) / 2 * m2 * pi * sx) * mpmath.exp(-m2 * pi * x)
        total += term
        if abs(term) < cutoff * abs(total):
            return total
        m += 1


def _a2n_envelope(x: mpf, n: int) -> mpf:
    # 4 * 2 * pi^2 x^(5/4) e^(-pi x) (ln x / 2)^(2n) / (2n)!, factor 2 covers m >= 2
    return (8 * mpmath.pi ** 2 * x ** (mpf(5) / 4) * mpmath.exp(-mpmath.pi * x)
            * (mpmath.log(x) / 2) ** (2 * n) / mpmath.factorial(2 * n))


def _a2n_tail(x: mpf, n: int) -> mpf:
    rate = mpmath.pi - mpf(5) / (4 * x) - 2 * n / (x * mpmath.log(x))
    if rate <= 0:
        return mpf("inf")
    return _a2n_envelope(x, n) / rate


def _a2n_cut(n: int, target: mpf, x_max: mpf) -> mpf:
    """Smallest x on a geometric ladder whose tail bound is below target/10."""
    x = mpf(2)
    while x < x_max:
        if _a2n_tail(x, n) < target / 10:
            return x
        x *= mpf(5) / 4
    return x_max


def a2n_integral(n: int, cfg: QuadratureConfig = DEFAULT_CONFIG,
                 ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesResult:
    """``4 int_1^inf d[x^(3/2) psi'(x)]/dx (ln x / 2)^(2n) / (2n)! x^(-1/4) dx``.

    Integrated on ``[1, X]`` where X is the first point on a geometric ladder
    (capped at ``cfg.x_max``) past which the envelope tail is negligible.
    ``terms_used`` reports the final panel count.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    with ctx.workdps():
        target = cfg.target(ctx)
        cutoff = cfg.cutoff(ctx)
        x_hi = _a2n_cut(n, target, cfg.upper_x())
        fact = mpmath.factorial(2 * n)

        def integrand(x):
            return [4 * _theta_kernel(x, cutoff) * (mpmath.log(x) / 2) ** (2 * n) / fact * x ** (-mpf(1) / 4)]

        values, delta, panels = _refine(integrand, mpf(1), x_hi, 1, cfg, ctx, target)
        bound = delta[0] + _a2n_tail(x_hi, n)
        return SeriesResult(values[0], panels, bound, "heuristic")


# ---------------------------------------------------------------------------
# moment cache files
# ---------------------------------------------------------------------------

def format_moment_cache(records: Sequence[MomentRecord], digits: int) -> str:
    lines = [f"{CACHE_HEADER}{digits}"]
    for r in sorted(records, key=lambda r: r.n):
        value = mpmath.nstr(r.value, digits, min_fixed=0, max_fixed=0)
        err = mpmath.nstr(r.error_bound, 3, min_fixed=0, max_fixed=0)
        lines.append(f"{r.n}\t{value}\t{err}")
    return "\n".join(lines) + "\n"


def parse_moment_cache(text: str) -> tuple:
    """Returns ``(digits, records)``."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(CACHE_HEADER):
        raise TableFormatError(f"missing header {CACHE_HEADER!r}<D>", 1)
    try:
        digits = int(lines[0][len(CACHE_HEADER):].strip())
    except ValueError:
        raise TableFormatError("header digit count is not an integer", 1) from None
    records = []
    with mpmath.workdps(digits + 10):
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cells = line.strip().split("\t")
            if len(cells) != 3:
                raise TableFormatError(f"expected 3 tab-separated cells, found {len(cells)}", lineno)
            try:
                n = int(cells[0])
                value, err = mpf(cells[1]), mpf(cells[2])
            except ValueError:
                raise TableFormatError(f"non-numeric cell in {line!r}", lineno) from None
            records.append(MomentRecord(n, value, err, "quadrature"))
    if not records:
        raise TableFormatError("no moment records")
    return digits, records


def write_moment_cache(records: Sequence[MomentRecord], path, digits: int) -> None:
    Path(path).write_text(format_moment_cache(records, digits), encoding="utf-8")


def read_moment_cache(path) -> tuple:
    return parse_moment_cache(Path(path).read_text(encoding="utf-8"))


def is_moment_cache(path) -> bool:
    with open(path, encoding="utf-8") as fh:
        return fh.readline().startswith(CACHE_HEADER)
