"""Command-line front end: ``xi-moment-lab <command> [options]``."""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import mpmath
from . import acceptance
from . import coefficients as co
from . import constants as cn
from . import moments as mo
from . import xi_eval as xe
from . import zeros as ze
from .numerics import AccuracyError, DomainError, PrecisionContext

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_ACCURACY = 4
EXIT_IO = 5

COMMANDS = ("moments", "table", "gamma", "lugo", "bernoulli", "derivatives", "inequalities",
            "zeros-verify", "xi-eval", "grid", "report")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    digits: int = 60
    terms: int = 20
    table_source: str = "builtin"
    zeros_file: Optional[str] = None
    max_zeros: Optional[int] = None
    out: Optional[str] = None

    def __post_init__(self) -> None:
        if self.digits < 20:
            raise UsageError(f"--digits must be >= 20, got {self.digits}")
        if self.terms < 1:
            raise UsageError(f"--terms must be >= 1, got {self.terms}")
        if self.max_zeros is not None and self.max_zeros < 0:
            raise UsageError(f"--max-zeros must be >= 0, got {self.max_zeros}")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(digits=self.digits)


def _num(x, digits: int) -> str:
    return mpmath.nstr(x, digits)


def load_table(cfg: RunConfig) -> co.CoefficientTable:
    src = cfg.table_source
    if src == "builtin":
        return co.builtin_table()
    if src == "quadrature":
        return mo.moment_table(max(cfg.terms, 0), mo.DEFAULT_CONFIG, cfg.ctx)
    path = Path(src)
    if mo.is_moment_cache(path):
        digits, records = mo.read_moment_cache(path)
        ctx = PrecisionContext(digits=max(digits, 20))
        return mo.table_from_moments(records, ctx, provenance=str(path))
    table = co.read_table(path)
    if not all(table.has(f) for f in co.FAMILIES):
        table = co.convert(table, None, cfg.ctx)
    return table


def load_zero_table(cfg: RunConfig) -> ze.ZeroTable:
    if cfg.zeros_file:
        return ze.load_zeros(cfg.zeros_file, cfg.max_zeros)
    return ze.builtin_zeros(cfg.max_zeros)


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_moments(args, cfg: RunConfig) -> int:
    records = mo.compute_moments(cfg.terms, mo.DEFAULT_CONFIG, cfg.ctx)
    _emit(mo.format_moment_cache(records, cfg.digits), cfg)
    return EXIT_OK


def cmd_table(args, cfg: RunConfig) -> int:
    _emit(co.format_table(load_table(cfg)), cfg)
    return EXIT_OK


def cmd_gamma(args, cfg: RunConfig) -> int:
    dec = cn.gamma_series(args.method, load_table(cfg), cfg.terms, cfg.ctx)
    print(_num(dec.value, args.show))
    print(f"method        {dec.method}")
    print(f"constant part {_num(dec.constant_part, cfg.digits)}")
    print(f"series part   {_num(dec.series_part.value, cfg.digits)}")
    print(f"error bound   {_num(dec.error_bound, 3)} ({dec.series_part.bound_kind})")
    return EXIT_OK


def cmd_lugo(args, cfg: RunConfig) -> int:
    if args.direct is not None:
        print(_num(cn.lugo_direct(args.direct, cfg.ctx), args.show))
        return EXIT_OK
    res = cn.lugo(args.method, load_table(cfg), cfg.terms, cfg.ctx)
    print(_num(res.value, args.show))
    print(f"error bound   {_num(res.error_bound, 3)} ({res.bound_kind})")
    return EXIT_OK


def cmd_bernoulli(args, cfg: RunConfig) -> int:
    b = cn.bernoulli_series(args.r, args.method, load_table(cfg), cfg.terms, cfg.ctx)
    print(_num(b.value, args.show))
    print(f"B_{b.index} exact  {b.exact_value}")
    with cfg.ctx.workdps():
        print(f"delta         {_num(b.delta(), 3)}")
    return EXIT_OK


def cmd_derivatives(args, cfg: RunConfig) -> int:
    table = load_table(cfg)
    lines = ["n\tby_bhat\tby_c\tby_a"]
    for n in range(min(cfg.terms, table.max_index) + 1):
        vals = [co.even_derivative(n, table, f, cfg.ctx) for f in ("bhat", "c", "a")]
        lines.append("\t".join([str(n)] + [_num(v, args.show) for v in vals]))
    _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK


def cmd_inequalities(args, cfg: RunConfig) -> int:
    table = load_table(cfg)
    ok = True
    print("n\tturan_margin\tholds")
    for n in range(1, min(cfg.terms, table.max_index)):
        t = co.turan_inequality(n, table, cfg.ctx)
        ok &= t.holds
        print(f"{n}\t{_num(t.margin, args.show)}\t{t.holds}")
    print("d\treal_roots\thyperbolic")
    for d in range(1, args.degree + 1):
        try:
            h = co.hyperbolicity_check(co.jensen_polynomial(d, table, cfg.ctx), cfg.ctx)
        except co.DegeneracyError:
            ok = False
            print(f"{d}\t-\tdegenerate at {cfg.digits} digits (raise --digits)")
            continue
        ok &= h.hyperbolic
        print(f"{d}\t{h.real_root_count}\t{h.hyperbolic}")
    return EXIT_OK if ok else EXIT_ACCURACY


def cmd_zeros_verify(args, cfg: RunConfig) -> int:
    zt = load_zero_table(cfg)
    table = load_table(cfg)
    ctx = cfg.ctx
    k = min(3, zt.count)
    ss = ze.symmetric_sums(zt, k, ctx)
    rho = ze.rho_sum(zt, ctx)
    had = ze.hadamard_c0(zt, ctx)
    d = args.show
    print(f"zeros         {zt.count} from {zt.source}")
    for i in range(1, k + 1):
        print(f"p_{i}           {_num(ss.p_k(i), d)}")
    for i in range(1, k + 1):
        print(f"e_{i}           {_num(ss.e_k(i), d)}")
    print(f"tail bound    {_num(ss.tail_bound, d)}")
    for n in range(0, k + 1):
        print(f"c_{n} (zeros)   {_num(ze.jensen_from_zeros(zt, n, table, ctx), d)}")
    print(f"rho sum       {_num(rho.value, d)}")
    print(f"identity rhs  {_num(rho.identity_rhs, d)}")
    print(f"hadamard c_0  {_num(had.value, d)} +- {_num(had.error_bound, 3)}")
    return EXIT_OK


def _parse_complex(text: str):
    # call under the run's working precision so no digits are dropped
    try:
        return mpmath.mpmathify(text.replace(" ", "").replace("i", "j"))
    except (ValueError, TypeError):
        raise UsageError(f"not a complex number: {text!r}") from None


def cmd_xi_eval(args, cfg: RunConfig) -> int:
    xs = xe.XiSeries(load_table(cfg), cfg.terms, args.column, cfg.ctx)
    d = args.show
    for text in args.s:
        with cfg.ctx.workdps():
            s = mpmath.mpc(_parse_complex(text))
            v = xe.xi(s, xs)
            line = f"s={_num(s, d)}\txi={_num(v, d)}"
            try:
                line += f"\tzeta={_num(xe.zeta(s, xs), d)}"
            except DomainError as exc:
                line += f"\tzeta=undefined ({exc})"
        print(line)
    if args.hadamard is not None:
        zt = load_zero_table(cfg)
        h = xe.hadamard_eval(args.hadamard, zt, xs)
        print(f"x={args.hadamard}\tproduct={_num(h.product_value, d)}\ttaylor={_num(h.taylor_value, d)}")
    print(f"validity radius {_num(xs.validity_radius, 6)}")
    return EXIT_OK


def cmd_grid(args, cfg: RunConfig) -> int:
    xs = xe.XiSeries(load_table(cfg), cfg.terms, "a", cfg.ctx)
    spec = xe.GridSpec(args.re_min, args.re_max, args.im_min, args.im_max, args.steps)
    if cfg.out:
        xe.grid(spec, xs, cfg.out)
    else:
        xe.write_grid(spec, xs, sys.stdout)
    return EXIT_OK


def cmd_report(args, cfg: RunConfig) -> int:
    zt = load_zero_table(cfg) if cfg.zeros_file else None
    lab = acceptance.Lab(cfg.ctx, zt)
    lines = []

    def emit(line: str) -> None:
        print(line, flush=True)
        lines.append(line)

    checks = acceptance.run_all(lab, emit)
    passed = sum(c.passed for c in checks)
    emit(f"{passed}/{len(checks)} criteria passed")
    if cfg.out:
        Path(cfg.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK if passed == len(checks) else EXIT_ACCURACY


HANDLERS = {
    "moments": cmd_moments, "table": cmd_table, "gamma": cmd_gamma, "lugo": cmd_lugo,
    "bernoulli": cmd_bernoulli, "derivatives": cmd_derivatives, "inequalities": cmd_inequalities,
    "zeros-verify": cmd_zeros_verify, "xi-eval": cmd_xi_eval, "grid": cmd_grid, "report": cmd_report,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--digits", type=int, default=60, help="significant digits (>= 20)")
    p.add_argument("--terms", type=int, default=20, help="truncation order N")
    p.add_argument("--table", default="builtin", dest="table_source",
                   help="builtin, quadrature, or a path to a coefficient/moment file")
    p.add_argument("--zeros-file", default=None, help="zero ordinates, one per line")
    p.add_argument("--max-zeros", type=int, default=None, help="read at most this many zeros")
    p.add_argument("--out", default=None, help="write the main artifact here")
    p.add_argument("--show", type=int, default=12, help="digits printed for headline values")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="xi-moment-lab",
                                     description="Riemann xi Taylor coefficients and the constants they encode.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    method = dict(default="a", help="coefficient family: a, b (moments) or c (Jensen)")

    sub.add_parser("moments", parents=[common], help="compute bhat_0..bhat_N by quadrature")
    sub.add_parser("table", parents=[common], help="print the coefficient table")
    p = sub.add_parser("gamma", parents=[common], help="Euler's constant from a coefficient series")
    p.add_argument("--method", **method)
    p = sub.add_parser("lugo", parents=[common], help="Lugo's constant")
    p.add_argument("--method", **method)
    p.add_argument("--direct", type=int, default=None, metavar="N", help="finite double sum instead")
    p = sub.add_parser("bernoulli", parents=[common], help="B_2r from a coefficient series")
    p.add_argument("--method", **method)
    p.add_argument("--r", type=int, required=True)
    sub.add_parser("derivatives", parents=[common], help="even derivatives of xi(1/2 + ix) at 0")
    p = sub.add_parser("inequalities", parents=[common], help="Turan margins and Jensen hyperbolicity")
    p.add_argument("--degree", type=int, default=10, help="highest Jensen degree")
    sub.add_parser("zeros-verify", parents=[common], help="identities built from zero ordinates")
    p = sub.add_parser("xi-eval", parents=[common], help="evaluate xi and zeta at points")
    p.add_argument("s", nargs="*", default=["0.5"], help="points such as 0.5+14.1347j")
    p.add_argument("--column", default="a", help="coefficient family feeding the series")
    p.add_argument("--hadamard", default=None, metavar="X", help="compare with the zero product at 1/2 + iX")
    p = sub.add_parser("grid", parents=[common], help="CSV grid of xi over a rectangle")
    p.add_argument("--steps", type=int, default=61)
    p.add_argument("--re-min", default="0")
    p.add_argument("--re-max", default="1")
    p.add_argument("--im-min", default="-15")
    p.add_argument("--im-max", default="15")
    sub.add_parser("report", parents=[common], help="run every acceptance check")
    return parser


def run(command: str, args: argparse.Namespace, cfg: RunConfig) -> int:
    if command not in HANDLERS:
        raise UsageError(f"unknown command {command!r}")
    return HANDLERS[command](args, cfg)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.digits, args.terms, args.table_source, args.zeros_file, args.max_zeros, args.out)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, cat, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return run(args.command, args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except co.TableFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, co.DegeneracyError, ArithmeticError) as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
