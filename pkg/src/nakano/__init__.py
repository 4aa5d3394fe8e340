"""Variable exponent sequence spaces: modulars, Luxemburg gauges, Orlicz
functions and the sequence constructions built on them."""

__version__ = "0.1.0"

from .exponents import (  # noqa: E402
    INF_EXPONENT,
    EssentialRange,
    Exponent,
    ExponentDomainError,
    TailKind,
    TailSpec,
    VarExponent,
    conjugate_exponent,
    essential_range,
    limit_points,
    phi,
    psi,
)
from .extreal import INF, ExtReal, IndeterminateForm  # noqa: E402
from .verdict import Verdict, VerdictKind  # noqa: E402
