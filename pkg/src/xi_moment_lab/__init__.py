"""Taylor coefficients of the Riemann xi function and what can be rebuilt from them.

Three equivalent coefficient families (Turan moments ``bhat_n``, Jensen
coefficients ``c_n`` and Taylor coefficients ``a_2n`` about s = 1/2) are
computed, converted and used to reconstruct Euler's constant, Lugo's
constant, Bernoulli numbers and zeta values, and to evaluate xi and zeta.
"""

from .coefficients import (
    CoefficientTable,
    DegeneracyError,
    JensenPolynomial,
    TableFormatError,
    builtin_table,
    cache_roundtrip,
    convert,
    even_derivative,
    hyperbolicity_check,
    jensen_polynomial,
    read_table,
    turan_inequality,
    write_table,
)
from .constants import (
    BernoulliValue,
    GammaDecomposition,
    bernoulli_exact,
    bernoulli_series,
    gamma_bernoulli_partial,
    gamma_quarter_zeta_half,
    gamma_series,
    gregory_bridge,
    gregory_coefficient,
    lugo,
    lugo_direct,
    zeta_even,
)
from .moments import MomentRecord, QuadratureConfig, a2n_integral, moment_table, phi, turan_moment
from .numerics import (
    DEFAULT_CONTEXT,
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
)
from .xi_eval import GridSpec, XiSeries, grid, hadamard_eval, power_basis, xi, zeta
from .zeros import (
    SymmetricSums,
    ZeroTable,
    builtin_zeros,
    hadamard_c0,
    jensen_from_zeros,
    load_zeros,
    rho_sum,
    symmetric_sums,
)

__version__ = "0.1.0"
