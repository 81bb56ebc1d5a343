"""Exact Laplace transforms of multivariate logarithmic series.

The package implements two transforms on exact-arithmetic series data: the
standard one, acting termwise on x^(g+a) (log x)^k with coefficients in a
symbolic Gamma-derivative ring, and the formal one, acting on matrix series
Y(x) x^Lambda through exact coefficient matrices.  Around them sit the Weyl
algebra with its Fourier-Laplace automorphism, p-adic growth certificates
for every arithmetic estimate the transforms satisfy, and arithmetic Gevrey
classification.  All scalar arithmetic is exact rational; no floating point
enters any computation or artifact.
"""

from .core import (
    MultiIndex,
    Ordering,
    PadicContext,
    Rational,
    lcd,
    multi_pochhammer,
    multiindex_order,
    pochhammer,
    val_p,
)
from .gammaring import GammaPoly, gamma_shift, rho_closed_form
from .linalg import Matrix, jordan_form
from .series import (
    LogLaurentSeries,
    MatrixSeries,
    derive,
    expand_xLambda,
    monomial_mul,
)
from .standard import (
    RTable,
    RhoTable,
    build_r_table,
    injectivity_certificate,
    laplace_series,
    laplace_term,
    rho_recurrence_step,
)
from .formal import (
    c_matrix,
    check_invC,
    cross_check_standard,
    double_transform_check,
    formal_transform,
)
from .weyl import (
    WeylOperator,
    apply_operator,
    duality_check,
    duality_check_formal,
    fourier_laplace,
    parse_operator,
    weyl_mul,
)
from .estimates import (
    c_norm_profile,
    lcd_growth_check,
    matrix_vnorm,
    norm_inequality_check,
    pochhammer_valuation_profile,
    z_coefficient_growth,
)
from .gevrey import NgaElement, NgaSummand, certify_gevrey, transform_order_shift

__version__ = "0.1.0"

__all__ = [
    "GammaPoly",
    "LogLaurentSeries",
    "Matrix",
    "MatrixSeries",
    "MultiIndex",
    "NgaElement",
    "NgaSummand",
    "Ordering",
    "PadicContext",
    "RTable",
    "Rational",
    "RhoTable",
    "WeylOperator",
    "apply_operator",
    "build_r_table",
    "c_matrix",
    "c_norm_profile",
    "certify_gevrey",
    "check_invC",
    "cross_check_standard",
    "derive",
    "double_transform_check",
    "duality_check",
    "duality_check_formal",
    "expand_xLambda",
    "formal_transform",
    "fourier_laplace",
    "gamma_shift",
    "injectivity_certificate",
    "jordan_form",
    "laplace_series",
    "laplace_term",
    "lcd",
    "lcd_growth_check",
    "matrix_vnorm",
    "monomial_mul",
    "multi_pochhammer",
    "multiindex_order",
    "norm_inequality_check",
    "parse_operator",
    "pochhammer",
    "pochhammer_valuation_profile",
    "rho_closed_form",
    "rho_recurrence_step",
    "transform_order_shift",
    "val_p",
    "weyl_mul",
    "z_coefficient_growth",
]
