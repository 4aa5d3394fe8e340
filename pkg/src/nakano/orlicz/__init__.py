"""Extended-value Orlicz functions and the checks built on them."""

from .conjugate import (
    NonconvexError,
    OrliczBoundError,
    OrliczBoundResult,
    conjugate,
    conjugate_values,
    orlicz_bound,
)
from .examples import (
    DecayDiagnostic,
    LogIdentityResult,
    decay_diagnostic,
    lacunary_build,
    log_identity_asymptote,
    log_perturbed_identity,
)
from .functions import (
    ExponentMeasure,
    LacunarySeries,
    LogPerturbed,
    Mixture,
    OrliczFn,
    PowerPhi,
    PowerPsi,
    SampleDomainError,
    Sampled,
    evaluate,
    evaluate_with_bound,
    orlicz_from_json,
    psi_mixture,
)
from .kclass import (
    KrsReport,
    KrsViolation,
    NearZeroSearch,
    SandwichResult,
    doubling_equivalence,
    equivalence_near_zero,
    krs_membership,
    minsupp_sandwich,
    power_difference_gap,
    psi_sup_distance,
)
from .quadrature import QuadratureError, integrate

__all__ = [name for name in dir() if not name.startswith("_")]
