import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpc, mpf

from xi_moment_lab.numerics import (
    AccuracyError,
    DomainError,
    PoleError,
    PrecisionContext,
    SeriesResult,
    agm,
    complex_gamma,
    euler_gamma,
    gamma_quarter,
    gamma_reference,
    spouge_parameter,
)

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_context_defaults():
    ctx = PrecisionContext()
    assert (ctx.digits, ctx.guard_digits, ctx.dps) == (60, 10, 70)
    assert ctx.with_digits(30).dps == 40


@pytest.mark.parametrize("digits", [19, 0, -5, 20.5])
def test_context_rejects_low_digits(digits):
    with pytest.raises(DomainError):
        PrecisionContext(digits=digits)


def test_series_result_validation():
    with pytest.raises(DomainError):
        SeriesResult(mpf(1), -1, mpf(0))
    with pytest.raises(DomainError):
        SeriesResult(mpf(1), 1, mpf(-1))
    with pytest.raises(DomainError):
        SeriesResult(mpf(1), 1, mpf(0), "approximate")


def test_accuracy_error_carries_payload():
    err = AccuracyError("nope", value=1, error_bound=2)
    assert (err.value, err.error_bound) == (1, 2)


def test_agm_of_equal_arguments():
    assert agm(1, 1) == 1


def test_agm_gauss_constant(ctx):
    # oracle: mpmath's own agm
    with mpmath.workdps(ctx.dps):
        ref = mpmath.agm(1, mpmath.sqrt(2))
        assert abs(agm(1, mpmath.sqrt(2), ctx) - ref) < mpf(10) ** -65


@pytest.mark.parametrize("a,b", [(0, 1), (-1, 2), (1, 0)])
def test_agm_domain(a, b):
    with pytest.raises(DomainError):
        agm(a, b)


@settings(max_examples=40, deadline=None)
@given(positive, positive)
def test_agm_symmetric_and_between_means(a, b):
    ctx = PrecisionContext(digits=30)
    m = agm(a, b, ctx)
    assert m == agm(b, a, ctx)
    with mpmath.workdps(ctx.dps):
        geo = mpmath.sqrt(mpf(a) * mpf(b))
        ari = (mpf(a) + mpf(b)) / 2
        slack = mpf(10) ** -25 * ari
        assert geo - slack <= m <= ari + slack


def test_gamma_quarter(ctx):
    with mpmath.workdps(ctx.dps):
        assert abs(gamma_quarter(ctx) - mpmath.gamma(mpf(1) / 4)) < mpf(10) ** -65
    assert mpmath.nstr(gamma_quarter(), 13) == "3.625609908222"


def test_spouge_parameter_grows_with_digits():
    assert spouge_parameter(70) > spouge_parameter(30) > 0


@pytest.mark.parametrize("z", [1, 2, mpf(1) / 2, mpc(3, 4), mpc(0.25, -7), mpc(-2.5, 0.5), mpc(-0.5, 0)])
def test_complex_gamma_matches_mpmath(z, ctx):
    with mpmath.workdps(ctx.dps):
        ref = mpmath.gamma(mpc(z))
        got = complex_gamma(z, ctx)
        assert abs(got - ref) <= mpf(10) ** -(ctx.digits - 2) * abs(ref)


def test_complex_gamma_half_is_sqrt_pi(ctx):
    with mpmath.workdps(ctx.dps):
        assert abs(complex_gamma(mpf(1) / 2, ctx) - mpmath.sqrt(mpmath.pi)) < mpf(10) ** -65


@pytest.mark.parametrize("z", [0, -1, -7])
def test_complex_gamma_poles(z):
    with pytest.raises(PoleError):
        complex_gamma(z)


@settings(max_examples=30, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_complex_gamma_recurrence(x, y):
    # Gamma(z + 1) = z Gamma(z) away from the poles
    ctx = PrecisionContext(digits=30)
    z = mpc(x, y)
    if abs(y) < 1e-3 and x <= 0.5 and abs(x - round(x)) < 1e-3:
        return
    with mpmath.workdps(ctx.dps):
        lhs = complex_gamma(z + 1, ctx)
        rhs = z * complex_gamma(z, ctx)
        assert abs(lhs - rhs) <= mpf(10) ** -24 * abs(lhs)


def test_gamma_reference_two_terms(ctx):
    res = gamma_reference(ctx, 2)
    with mpmath.workdps(ctx.dps):
        assert abs(res.value - mpmath.pi ** 2 / 12) < mpf(10) ** -65
    assert res.terms_used == 1 and res.bound_kind == "rigorous"


def test_gamma_reference_literal_bound_brackets_truth():
    ctx = PrecisionContext(digits=30)
    res = gamma_reference(ctx, 200)
    with mpmath.workdps(ctx.dps):
        assert abs(res.value - mpmath.euler) <= res.error_bound
        assert res.error_bound < mpf("0.01")


def test_gamma_reference_accelerated(ctx):
    res = gamma_reference(ctx, 250, accelerate=True)
    with mpmath.workdps(ctx.dps):
        assert abs(res.value - mpmath.euler) <= res.error_bound < mpf("2e-12")


def test_euler_gamma_full_precision(ctx):
    with mpmath.workdps(ctx.dps):
        assert abs(euler_gamma(ctx) - mpmath.euler) < mpf(10) ** -ctx.digits


@pytest.mark.parametrize("terms", [1, 0, -3])
def test_gamma_reference_domain(terms, ctx):
    with pytest.raises(DomainError):
        gamma_reference(ctx, terms)


def test_precision_scoped():
    before = mpmath.mp.dps
    gamma_quarter(PrecisionContext(digits=100))
    assert mpmath.mp.dps == before
