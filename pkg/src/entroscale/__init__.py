"""Entropy scaling of right/left-mover states of quasifree fermionic chains.

The package computes the von Neumann entropy of finite windows of
translation-invariant quasifree chains driven by two thermal reservoirs,
both through a block-Toeplitz finite-section pipeline and through an exact
small-window Fock-space oracle, together with the asymptotic entropy
density the window entropies converge to per site.
"""

from .density import (
    DensityReport,
    MomentumPartition,
    TanhFormResult,
    VanishingVerdict,
    partition_momentum,
    s_infinity,
    s_infinity_symmetric,
    sigma_set,
    tanh_form,
    vanishing_check,
)
from .entropy import (
    LOG2,
    EntropyValue,
    binary_eta,
    entropy_from_lambdas,
    functional_equation_residual,
    shannon_ell,
    spectrum_product,
)
from .errors import (
    AxiomViolation,
    EntroscaleError,
    MissingLags,
    NoConvergence,
    NotAntisymmetric,
    NotSymmetric,
    OnZeroSet,
    OutOfRange,
    PairingFailure,
    QuadratureFailure,
    TooLarge,
    WrongCase,
    WrongFermi,
    ZeroPolynomial,
)
from .fock_oracle import (
    CorrelationData,
    EquivalenceReport,
    FactorizationReport,
    FockRep,
    MatrixUnitReport,
    ReducedDensity,
    b_operator,
    correlation_data,
    factorization_check,
    fermi_vector,
    field_norm,
    fock_rep,
    grand_equivalence,
    j_conjugate,
    majorana_vector,
    matrix_units,
    omega_monomial,
    pfaffian,
    pfaffian_pairing_sum,
    reduced_density_matrix,
    skew_canonical_lambdas,
)
from .rlmover import (
    FERMI_BY_NAME,
    CaseTag,
    ChainModel,
    CustomOdd,
    FermiDirac,
    FermiFamilyPhase,
    FermiFunction,
    GroundStep,
    HalfConstant,
    HamiltonianCoeffs,
    StepSet,
    Temperatures,
    classify,
    dispersion,
    dispersion_derivative,
    rl_symbol_matrix,
    rl_symbol_pauli,
)
from .toeplitz import (
    BlockSymbol,
    CoeffTable,
    SpectrumReport,
    ToeplitzSection,
    build_a_full,
    build_a_tilde,
    build_section,
    fourier_coeffs,
    mover_symbol,
    paired_spectrum,
    window_entropy,
    window_spectrum,
)
from .trigpoly import Root, TrigPoly

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "binary_eta",
    "BlockSymbol",
    "b_operator",
    "build_a_full",
    "build_a_tilde",
    "build_section",
    "CaseTag",
    "ChainModel",
    "classify",
    "CoeffTable",
    "correlation_data",
    "CorrelationData",
    "CustomOdd",
    "DensityReport",
    "dispersion",
    "dispersion_derivative",
    "entropy_from_lambdas",
    "EntropyValue",
    "EntroscaleError",
    "EquivalenceReport",
    "factorization_check",
    "FactorizationReport",
    "FERMI_BY_NAME",
    "FermiDirac",
    "FermiFamilyPhase",
    "FermiFunction",
    "fermi_vector",
    "field_norm",
    "fock_rep",
    "FockRep",
    "fourier_coeffs",
    "functional_equation_residual",
    "grand_equivalence",
    "GroundStep",
    "HalfConstant",
    "HamiltonianCoeffs",
    "j_conjugate",
    "LOG2",
    "majorana_vector",
    "matrix_units",
    "MatrixUnitReport",
    "MissingLags",
    "MomentumPartition",
    "mover_symbol",
    "NoConvergence",
    "NotAntisymmetric",
    "NotSymmetric",
    "omega_monomial",
    "OnZeroSet",
    "OutOfRange",
    "paired_spectrum",
    "PairingFailure",
    "partition_momentum",
    "pfaffian",
    "pfaffian_pairing_sum",
    "QuadratureFailure",
    "reduced_density_matrix",
    "ReducedDensity",
    "rl_symbol_matrix",
    "rl_symbol_pauli",
    "Root",
    "s_infinity",
    "s_infinity_symmetric",
    "shannon_ell",
    "sigma_set",
    "skew_canonical_lambdas",
    "spectrum_product",
    "SpectrumReport",
    "StepSet",
    "tanh_form",
    "TanhFormResult",
    "Temperatures",
    "ToeplitzSection",
    "TooLarge",
    "TrigPoly",
    "vanishing_check",
    "VanishingVerdict",
    "window_entropy",
    "window_spectrum",
    "WrongCase",
    "WrongFermi",
    "ZeroPolynomial",
]
