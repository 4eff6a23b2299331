"""Exact expansion coefficients for regular and connected regular labeled graphs.

The package computes, in exact rational arithmetic, the coefficient series
of the asymptotic growth of the number of k-regular labeled graphs (and of
the connected ones), cross-validated by independent exact counting routes
and a high-precision numerical residual harness.
"""

from .series import (
    BadConstantTerm,
    BadParity,
    GaussianRational,
    InsufficientOrder,
    NonUnitDivisor,
    Rational,
    Series,
    SeriesError,
    ValuationViolation,
    double_factorial,
    lagrange_invert_coeff,
    newton_solve_tree,
    parse_rational,
    rational_str,
)
from .multipoly import MPoly, MissingWeight, Monomial, PolySeries, gaussian_hadamard, monomial
from .laplace import (
    DegeneratePhase,
    LaplaceExpansion,
    PhaseAmplitude,
    expand_direct,
    expand_hadamard,
    psi_from_phase,
    stirling_series,
)
from .counts import (
    CountTable,
    LimitExceeded,
    MissingCount,
    NonIntegerResult,
    NonRealResult,
    OffsetMismatch,
    ParseError,
    count_brute,
    count_hadamard,
    count_two_regular,
    egf_reciprocal_coeffs,
    load_bfile,
)
from .regular import (
    DegreeOverflow,
    Expansion,
    FormalKPolynomial,
    formal_k_interpolate,
    sg_expansion,
    sg_series,
    sg_tilde_coeff,
    u_pq,
    v_pq,
)
from .connected import (
    BadScale,
    GapMismatch,
    GrowthScale,
    IrrationalPrefactor,
    csg_tilde,
    f_kj,
    generic_transfer,
    shifted_expansion,
    valuation_gap,
)

__version__ = "0.1.0"
