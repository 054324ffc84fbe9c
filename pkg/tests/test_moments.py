import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from xi_moment_lab.coefficients import TableFormatError
from xi_moment_lab.moments import (
    CACHE_HEADER,
    MomentRecord,
    QuadratureConfig,
    a2n_integral,
    compute_moments,
    format_moment_cache,
    gauss_legendre,
    is_moment_cache,
    parse_moment_cache,
    phi,
    read_moment_cache,
    table_from_moments,
    turan_moment,
    write_moment_cache,
)
from xi_moment_lab.numerics import AccuracyError, DomainError, PrecisionContext

LOW = PrecisionContext(digits=25)


def _phi_oracle(t):
    # independent summation with mpmath.nsum
    e = mpmath.exp
    return mpmath.nsum(lambda k: (2 * k ** 4 * mpmath.pi ** 2 * e(9 * t) - 3 * k ** 2 * mpmath.pi * e(5 * t))
                       * e(-k ** 2 * mpmath.pi * e(4 * t)), [1, mpmath.inf])


@pytest.mark.parametrize("t", ["0", "0.05", "0.3", "1", "2.5"])
def test_phi_against_nsum(t):
    with mpmath.workdps(LOW.dps):
        ref = _phi_oracle(mpf(t))
        assert abs(phi(t, LOW) - ref) <= mpf(10) ** -22 * ref


def test_phi_rejects_negative_t():
    with pytest.raises(DomainError):
        phi(-0.1)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0, max_value=2.0))
def test_phi_positive(t):
    assert phi(t, LOW) > 0


@pytest.mark.parametrize("m", [2, 7, 24])
def test_gauss_legendre_exact_on_polynomials(m):
    nodes, weights = gauss_legendre(m, 40)
    with mpmath.workdps(40):
        assert abs(mpmath.fsum(weights) - 2) < mpf(10) ** -35
        for k in range(0, 2 * m, 2):
            got = mpmath.fsum(w * x ** k for x, w in zip(nodes, weights))
            assert abs(got - mpf(2) / (k + 1)) < mpf(10) ** -33
        assert list(nodes) == sorted(nodes)


@pytest.mark.parametrize("n", range(21))
def test_quadrature_matches_fixture(n, quadrature_moments, table):
    rec = quadrature_moments[n]
    assert rec.n == n and rec.source == "quadrature"
    with mpmath.workdps(70):
        assert abs(rec.value / table.bhat(n) - 1) <= mpf("1e-12")
        assert rec.error_bound < mpf("1e-50")


def test_moments_decrease(quadrature_moments):
    values = [r.value for r in quadrature_moments]
    assert all(b < a for a, b in zip(values, values[1:]))


def _phi_finite(t):
    # k <= 12 is exact to far below 1e-100 for t >= 0
    e = mpmath.exp
    return mpmath.fsum((2 * k ** 4 * mpmath.pi ** 2 * e(9 * t) - 3 * k ** 2 * mpmath.pi * e(5 * t))
                       * e(-k ** 2 * mpmath.pi * e(4 * t)) for k in range(1, 13))


def test_bhat0_independent_quadrature():
    # mpmath's tanh-sinh, 20 digits; the integrand is below 1e-70000 at t = 3
    with mpmath.workdps(25):
        ref = mpmath.quad(_phi_finite, [0, 0.25, 0.5, 1, 3])
        got = turan_moment(0, ctx=PrecisionContext(digits=20)).value
        assert abs(got / ref - 1) < mpf("1e-18")


def test_single_moment_agrees_with_batch(quadrature_moments, ctx):
    single = turan_moment(3, ctx=ctx)
    with mpmath.workdps(ctx.dps):
        assert abs(single.value - quadrature_moments[3].value) <= single.error_bound + quadrature_moments[3].error_bound


def test_turan_moment_domain():
    with pytest.raises(DomainError):
        turan_moment(-1)
    with pytest.raises(DomainError):
        compute_moments(-1)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(panel_rule="simpson")
    with pytest.raises(DomainError):
        QuadratureConfig(t_max=0)
    with pytest.raises(DomainError):
        QuadratureConfig(nodes_per_panel=1)


def test_short_interval_refused():
    with pytest.raises(DomainError):
        compute_moments(5, QuadratureConfig(t_max=0.5), LOW)


def test_accuracy_error_when_refinement_budget_exhausted():
    cfg = QuadratureConfig(nodes_per_panel=3, initial_panels=1, max_doublings=1)
    with pytest.raises(AccuracyError) as info:
        compute_moments(2, cfg, LOW)
    assert info.value.value is not None


@pytest.mark.parametrize("n", [0, 2])
def test_a2n_integral_independent_route(n, table):
    res = a2n_integral(n, ctx=LOW)
    with mpmath.workdps(LOW.dps):
        oracle = 8 * mpf(4) ** n * turan_moment(n, ctx=LOW).value / mpmath.factorial(2 * n)
        assert abs(res.value - oracle) <= res.error_bound + mpf("1e-22") * oracle
        assert abs(res.value / table.a(n) - 1) < mpf("1e-11")


def test_table_from_moments_fills_families(quadrature_moments, table, ctx):
    t = table_from_moments(quadrature_moments, ctx)
    assert t.has("c") and t.has("a") and t.provenance == "quadrature"
    with mpmath.workdps(ctx.dps):
        assert abs(t.c(1) / table.c(1) - 1) < mpf("1e-11")
        assert t.rows[5].bhat.digits == ctx.digits


def test_cache_roundtrip(tmp_path, quadrature_moments):
    path = tmp_path / "m.txt"
    write_moment_cache(quadrature_moments, path, 60)
    assert is_moment_cache(path)
    digits, back = read_moment_cache(path)
    assert digits == 60 and len(back) == 21
    # second write of the parsed records is byte-identical
    assert format_moment_cache(back, 60) == path.read_text()
    with mpmath.workdps(70):
        for a, b in zip(quadrature_moments, back):
            assert abs(a.value - b.value) <= mpf(10) ** -59 * a.value


@pytest.mark.parametrize("text,line", [
    ("garbage\n", 1),
    (f"{CACHE_HEADER}x\n", 1),
    (f"{CACHE_HEADER}30\n0\t1.5\n", 2),
    (f"{CACHE_HEADER}30\n0\t1.5\t1e-3\n1\tabc\t1e-3\n", 3),
])
def test_cache_format_errors(text, line):
    with pytest.raises(TableFormatError) as info:
        parse_moment_cache(text)
    assert info.value.line == line


def test_cache_without_records():
    with pytest.raises(TableFormatError):
        parse_moment_cache(f"{CACHE_HEADER}30\n")


def test_moment_record_validation():
    with pytest.raises(DomainError):
        MomentRecord(0, mpf(1), mpf(0), "guess")
    with pytest.raises(DomainError):
        MomentRecord(0, mpf(1), mpf(-1))
