from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from xi_moment_lab.constants import (
    BernoulliValue,
    ComplexBranchError,
    bernoulli_exact,
    bernoulli_series,
    c0_closed_form,
    gamma_bernoulli_partial,
    gamma_quarter_zeta_half,
    gamma_quarter_zeta_half_series,
    gamma_series,
    gregory_bridge,
    gregory_coefficient,
    inner_sum,
    lugo,
    lugo_direct,
    von_staudt_denominator,
    zeta_even,
    zeta_even_exact,
    zeta_half,
)
from xi_moment_lab.numerics import DomainError, PrecisionContext

METHODS = ["a", "b", "c"]


def lugo_oracle():
    return -mpf(1) / 2 - mpmath.euler + mpmath.log(2)


@pytest.mark.parametrize("method", METHODS)
def test_gamma_series_reference_value(method, table):
    dec = gamma_series(method, table, 20)
    assert abs(dec.value - mpf("0.577215664902")) <= mpf("1e-11")
    assert dec.series_part.terms_used == 20


@pytest.mark.parametrize("method", METHODS)
def test_gamma_series_against_mpmath(method, table, ctx):
    with mpmath.workdps(ctx.dps):
        assert abs(gamma_series(method, table, 20, ctx).value - mpmath.euler) < mpf("2e-12")


def test_gamma_series_empty_sum(table):
    dec = gamma_series("a", table, 0)
    assert dec.series_part.value == 0
    assert mpmath.nstr(dec.value, 11) == "0.53102424697"


def test_gamma_series_domain(table):
    with pytest.raises(DomainError):
        gamma_series("a", table, -1)
    with pytest.raises(DomainError):
        gamma_series("a", table, 21)
    with pytest.raises(DomainError):
        gamma_series("q", table, 5)


def test_gamma_series_converges(table):
    errs = [abs(gamma_series("b", table, n).value - mpmath.euler) for n in (2, 4, 8)]
    assert errs[0] > errs[1] > errs[2]


def test_inner_sums_reference(table):
    assert abs(inner_sum("a", table, 20).value - mpf("2.88696362077e-3")) <= mpf("1e-12")
    assert abs(inner_sum("b", table, 20).value - mpf("3.60870452595e-4")) <= mpf("1e-12")


def test_inner_sums_related(table, ctx):
    # the three prefactors turn the inner sums into the same correction
    with mpmath.workdps(ctx.dps):
        a = 16 * inner_sum("a", table, 20, ctx).value
        b = 128 * inner_sum("b", table, 20, ctx).value
        c = 8 * inner_sum("c", table, 20, ctx).value
        assert abs(a - b) < mpf("1e-12") and abs(a - c) < mpf("1e-12")


@pytest.mark.parametrize("method", METHODS)
def test_lugo_three_ways(method, table):
    assert abs(lugo(method, table, 20).value - mpf("-0.384068484342")) <= mpf("1e-11")


def test_lugo_reference_matches_closed_form():
    assert abs(lugo_oracle() - mpf("-0.384068484342")) < mpf("5e-13")


def _lugo_bruteforce(n):
    s = sum(Fraction(1, i + j) for i in range(1, n + 1) for j in range(1, n + 1))
    return mpf(s.numerator) / s.denominator - 2 * n * mpmath.log(2) + mpmath.log(n)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 40))
def test_lugo_direct_matches_double_sum(n):
    ctx = PrecisionContext(digits=30)
    with mpmath.workdps(ctx.dps):
        assert abs(lugo_direct(n, ctx) - _lugo_bruteforce(n)) < mpf(10) ** -28


def test_lugo_direct_approaches_constant():
    errs = [abs(lugo_direct(n) - lugo_oracle()) for n in (10, 100, 1000, 10000)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < mpf("1e-3")


def test_lugo_direct_domain():
    with pytest.raises(DomainError):
        lugo_direct(0)


def test_gamma_quarter_zeta_half(table, ctx):
    v = gamma_quarter_zeta_half(table)
    assert abs(v - mpf("-5.29467577665")) <= mpf("1e-10")
    with mpmath.workdps(ctx.dps):
        oracle = mpmath.gamma(mpf(1) / 4) * mpmath.zeta(mpf(1) / 2)
        assert abs(v / oracle - 1) < mpf("1e-14")


def test_gamma_quarter_zeta_half_series_form(table):
    s = gamma_quarter_zeta_half_series(table, 20)
    assert abs(s.value - gamma_quarter_zeta_half(table)) < mpf("1e-10")


def test_zeta_half(table):
    assert abs(zeta_half(table) - mpf("-1.460354")) <= mpf("1e-5")


def test_c0_closed_form(table):
    assert abs(c0_closed_form(table) - table.c(0)) <= mpf("1e-12")


@pytest.mark.parametrize("k", range(0, 61))
def test_bernoulli_exact_against_mpmath(k):
    b = bernoulli_exact(k)
    with mpmath.workdps(80):
        ref = mpmath.bernoulli(k)
        assert abs(mpf(b.numerator) / b.denominator - ref) <= mpf(10) ** -75 * max(1, abs(ref))


def test_bernoulli_first_values():
    assert [bernoulli_exact(k) for k in range(7)] == [
        Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30), Fraction(0), Fraction(1, 42)]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40))
def test_von_staudt_clausen(k):
    b = bernoulli_exact(2 * k)
    assert b.denominator == von_staudt_denominator(2 * k)
    frac = b + sum(Fraction(1, p) for p in _primes_with_p_minus_1_dividing(2 * k))
    assert frac.denominator == 1


def _primes_with_p_minus_1_dividing(n):
    out = []
    for d in range(1, n + 1):
        p = d + 1
        if n % d == 0 and all(p % q for q in range(2, int(p ** 0.5) + 1)):
            out.append(p)
    return out


@given(st.integers(1, 30))
def test_odd_bernoulli_vanish(k):
    assert bernoulli_exact(2 * k + 1) == 0


def test_bernoulli_domain():
    with pytest.raises(DomainError):
        bernoulli_exact(-1)


@pytest.mark.parametrize("method", METHODS)
def test_bernoulli_series_tolerances(method, table):
    b0 = bernoulli_series(0, method, table, 20)
    assert isinstance(b0, BernoulliValue) and b0.exact_value == 1
    assert abs(b0.value - 1) <= mpf("1e-11")
    assert abs(bernoulli_series(1, method, table, 20).value - mpf(1) / 6) <= mpf("1e-10")
    b4 = bernoulli_series(2, method, table, 20)
    assert abs(b4.delta() / (mpf(-1) / 30)) <= mpf("1e-3")
    b6 = bernoulli_series(3, method, table, 20)
    assert abs(b6.delta() / (mpf(1) / 42)) <= mpf("5e-4")


def test_bernoulli_series_domain(table):
    with pytest.raises(DomainError):
        bernoulli_series(-1, "a", table, 20)
    with pytest.raises(DomainError):
        bernoulli_series(1, "a", table, 21)


def _gregory_oracle(n):
    # G_n = integral over [0, 1] of binomial(x, n)
    poly = [Fraction(1)]
    for k in range(n):
        poly = [Fraction(0)] + poly
        for i in range(len(poly) - 1):
            poly[i] -= k * poly[i + 1]
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    return sum(c / (i + 1) for i, c in enumerate(poly)) / fact


@pytest.mark.parametrize("n", range(0, 16))
def test_gregory_coefficients(n):
    assert gregory_coefficient(n) == _gregory_oracle(n)


def test_gregory_first_values():
    assert [gregory_coefficient(n) for n in range(5)] == [
        Fraction(1), Fraction(1, 2), Fraction(-1, 12), Fraction(1, 24), Fraction(-19, 720)]


def test_gregory_bridge_holds_at_r1(table, ctx):
    res = gregory_bridge(1, table, 20, ctx=ctx)
    with mpmath.workdps(ctx.dps):
        assert abs(res.rhs - mpf(1) / 6) < mpf(10) ** -60
    assert abs(res.residual) < mpf("1e-10")


def test_gregory_bridge_fails_at_r2(table, ctx):
    res = gregory_bridge(2, table, 20, ctx=ctx)
    with mpmath.workdps(ctx.dps):
        assert abs(res.rhs - mpmath.cbrt(mpf("1.9"))) < mpf(10) ** -60
        assert res.residual == res.lhs - res.rhs
    assert abs(res.residual) > mpf("0.1")


def test_complex_branch_error_type():
    assert issubclass(ComplexBranchError, ArithmeticError)


def test_gamma_bernoulli_partial():
    p = gamma_bernoulli_partial(20)
    assert p.sums[0] == Fraction(7, 12)
    assert p.smallest_term_index == 3
    assert p.optimal_value == Fraction(1, 2) + Fraction(1, 12) - Fraction(1, 120) + Fraction(1, 252)
    assert abs(p.sums[-1]) > 1000
    assert len(p.sums) == len(p.terms) == 20


def test_gamma_bernoulli_partial_domain():
    with pytest.raises(DomainError):
        gamma_bernoulli_partial(0)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_zeta_even(r, table, ctx):
    res = zeta_even(r, table, 20)
    with mpmath.workdps(ctx.dps):
        assert abs(res.value / mpmath.zeta(2 * r) - 1) < mpf("1e-10")
        assert abs(zeta_even_exact(r, ctx) - mpmath.zeta(2 * r)) < mpf(10) ** -60


def test_zeta_even_domain(table):
    with pytest.raises(DomainError):
        zeta_even(0, table, 20)
