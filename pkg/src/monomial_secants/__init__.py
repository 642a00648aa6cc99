"""Secant dimensions of varieties of monomial-shaped products of linear forms.

Dimensions are computed with Terracini's lemma as exact ranks over a large
prime field, together with brute-force checks of the ideal-theoretic facts
the computation relies on.
"""
from .ring import (
    DEFAULT_PRIME,
    FieldConfig,
    HomogeneousPoly,
    LinearForm,
    MonomialBasis,
    enumerate_monomials,
    linear_power_product,
    multiply,
    random_linear_form,
    substitute_linear,
    task_rng,
)
from .linalg import rank, rref
from .terracini import (
    MonomialSpec,
    PointSample,
    RankAnomalyError,
    SecantReport,
    SubspaceBasis,
    ambient_dim,
    expected_secant_dim,
    sample_point,
    secant_dim,
    specialized_secant_dim,
    sum_span,
    tangent_space_basis,
)
from .scan import ScanRange, ScanRow, partitions, run_scan

__version__ = "0.1.0"
