"""Fenchel conjugation F*(v) = sup_{u≥0} (uv − F(u)) of convex Orlicz functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functions import OrliczFn, Sampled

__all__ = [
    "NonconvexError",
    "OrliczBoundError",
    "OrliczBoundResult",
    "conjugate",
    "conjugate_values",
    "orlicz_bound",
]

TERNARY_ITERATIONS = 200
# Doubling stops here; a sup still increasing at this point is reported as ∞.
BRACKET_CAP = 2.0**1000


class NonconvexError(ValueError):
    """Conjugation was requested for a function not known to be convex."""


def _objective(F: OrliczFn, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        fu = np.asarray(F(u), dtype=float)
        out = u * v - fu
    out[np.isnan(out)] = -np.inf
    return out


def conjugate_values(F: OrliczFn, v_grid) -> np.ndarray:
    """F* on ``v_grid`` by vectorized ternary search on the concave map
    u ↦ uv − F(u); ``np.inf`` marks a divergent sup."""
    if not F.convex:
        raise NonconvexError(f"{F!r} is not known to be convex; conjugate not supported")
    v = np.asarray(v_grid, dtype=float)
    if v.ndim != 1 or np.any(v < 0):
        raise ValueError("v_grid must be a 1-D array of nonnegative values")

    lo_dom = 0.0
    if isinstance(F, Sampled):
        # F(0) = 0 for every Orlicz function; the sampled part starts at grid[0]
        lo_dom = float(F.grid[0])
        hi = np.full(v.shape, F.finite_domain_end)
        divergent = np.zeros(v.shape, dtype=bool)
    elif F.infinite_beyond is not None:
        hi = np.full(v.shape, float(F.infinite_beyond))
        divergent = np.zeros(v.shape, dtype=bool)
    else:
        hi = np.ones(v.shape)
        active = _objective(F, 2 * hi, v) > _objective(F, hi, v)
        while active.any():
            hi[active] *= 2.0
            capped = hi >= BRACKET_CAP
            active &= ~capped
            if active.any():
                active[active] = _objective(F, 2 * hi[active], v[active]) > _objective(
                    F, hi[active], v[active]
                )
        divergent = (hi >= BRACKET_CAP) & (_objective(F, hi, v) < _objective(F, 2 * hi, v))
        # objective(2U) <= objective(U) only places the maximizer below 2U
        hi = 2.0 * hi

    lo = np.full(v.shape, lo_dom)
    for _ in range(TERNARY_ITERATIONS):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        left_better = _objective(F, m1, v) < _objective(F, m2, v)
        lo = np.where(left_better, m1, lo)
        hi = np.where(left_better, hi, m2)
    mid = 0.5 * (lo + hi)
    best = np.maximum.reduce([_objective(F, lo, v), _objective(F, mid, v), _objective(F, hi, v)])
    best = np.maximum(best, 0.0)  # u = 0 contributes 0·v − F(0) = 0
    best[divergent] = np.inf
    return best


def conjugate(F: OrliczFn, v_grid) -> Sampled:
    """F* sampled on ``v_grid`` (positive, ascending), as a convex Sampled function."""
    v = np.asarray(v_grid, dtype=float)
    if np.any(v <= 0) or np.any(np.diff(v) <= 0):
        raise ValueError("v_grid must be positive and strictly ascending")
    return Sampled(v, conjugate_values(F, v), is_convex=True)


class OrliczBoundError(ValueError):
    def __init__(self, u: float, excess: float):
        super().__init__(f"hypothesis uv <= C F(u) + A fails at u = {u!r} (excess {excess:.3e})")
        self.u = u
        self.excess = excess


@dataclass(frozen=True)
class OrliczBoundResult:
    w: float
    conjugate_at_w: float
    bound: float
    bound_ok: bool


def orlicz_bound(
    F: OrliczFn, c: float, C: float, A: float, v: float, n_check: int = 1025, tol: float = 1e-9
) -> OrliczBoundResult:
    """Given uv ≤ C F(u) + A on [0, c], return w = min{v/C, F(c)/c} and whether
    F*(w) ≤ A/C holds."""
    if min(c, C, A, v) <= 0:
        raise ValueError("c, C, A and v must be positive")
    u = np.linspace(0.0, c, n_check)
    excess = u * v - (C * np.asarray(F(u), dtype=float) + A)
    if np.any(excess > tol):
        k = int(np.argmax(excess))
        raise OrliczBoundError(float(u[k]), float(excess[k]))
    w = min(v / C, float(F(c)) / c)
    fstar = float(conjugate_values(F, np.array([w]))[0])
    return OrliczBoundResult(w, fstar, A / C, fstar <= A / C + tol)
