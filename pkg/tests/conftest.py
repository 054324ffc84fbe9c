import mpmath
import pytest

from xi_moment_lab.coefficients import builtin_table
from xi_moment_lab.moments import compute_moments
from xi_moment_lab.numerics import PrecisionContext
from xi_moment_lab.zeros import builtin_zeros


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext()


@pytest.fixture(scope="session")
def table():
    return builtin_table()


@pytest.fixture(scope="session")
def zeros():
    return builtin_zeros()


@pytest.fixture(scope="session")
def quadrature_moments(ctx):
    return compute_moments(20, ctx=ctx)


@pytest.fixture(autouse=True)
def _global_precision_untouched():
    before = mpmath.mp.prec
    yield
    assert mpmath.mp.prec == before
