"""Construction and numerical verification of complex-valued biharmonic
functions and harmonic morphisms on the compact matrix groups U(n),
SO(n) and Sp(n).

The package builds rational functions from matrix-coefficient linear
forms, solves the exact coefficient systems that make polynomial
combinations harmonic or proper biharmonic, and independently verifies
every construction by jet differentiation along one-parameter subgroups.
"""

from .algebra import Jet2, JetMatrix, Rational, jet_add, jet_div, jet_mul, jet_pow
from .construct import (
    CoeffTable,
    FamilyKind,
    SolutionFamily,
    biharmonic_coefficients,
    biharmonic_family,
    build_expression,
    column_ratio_family,
    eigenfamily_constants,
    harmonic_coefficients,
    harmonic_family,
    is_biharmonic_table,
    is_harmonic_table,
    rational_morphism,
    tension_power_family,
    tension_table,
)
from .errors import (
    BiforgeError,
    DegenerateJetDivision,
    DegenerateQuotient,
    DimensionMismatch,
    DomainError,
    InconsistentSystem,
    IsotropyViolation,
    ShapeError,
    ZeroVector,
)
from .forms import (
    Classification,
    LinearForm,
    QuadrupleFamily,
    RationalExpr,
    classify,
    columns_pairwise_dependent,
    isotropic,
    make_quadruple,
    quotient,
    tau_closed_form,
)
from .groups import GroupKind, GroupPoint, GroupSpec, LieBasisElement, basis, sample_point, translate_jet
from .operators import OperatorContext, conformality, eigen_check, tension, tension2
from .report import CheckResult, VerificationReport

__version__ = "0.1.0"
