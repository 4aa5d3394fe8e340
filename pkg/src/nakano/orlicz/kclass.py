"""Grid checks for the class K_{r,s}, near-zero comparison of Orlicz
functions, and the restriction sandwich for exponent mixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..exponents import Exponent, psi
from ..grids import near_zero_grid, unit_grid
from ..verdict import Verdict, VerdictKind
from .functions import ExponentMeasure, psi_mixture

__all__ = [
    "KrsViolation",
    "KrsReport",
    "krs_membership",
    "NearZeroSearch",
    "equivalence_near_zero",
    "doubling_equivalence",
    "SandwichResult",
    "minsupp_sandwich",
    "power_difference_gap",
    "psi_sup_distance",
]

KRS_CONDITIONS = {
    "i": "nondecreasing",
    "ii": "t -> phi(t^(1/r)) midpoint convex",
    "iii": "t -> phi(t^(1/s)) midpoint concave",
    "iv": "(t^s-u^s)/s <= phi(t)-phi(u) <= (t^r-u^r)/r",
    "v": "phi(bt) <= b^s phi(t)",
}


@dataclass(frozen=True)
class KrsViolation:
    condition: str
    points: tuple[float, ...]
    margin: float

    def to_json(self) -> dict:
        return {"condition": self.condition, "points": list(self.points), "margin": self.margin}


@dataclass(frozen=True)
class KrsReport:
    violations: tuple[KrsViolation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def by_condition(self, cond: str) -> list[KrsViolation]:
        return [v for v in self.violations if v.condition == cond]

    def to_json(self) -> dict:
        return {"passed": self.passed, "violations": [v.to_json() for v in self.violations]}


def _root(x: np.ndarray, p: float) -> np.ndarray:
    # x^{1/p} with 1/∞ = 0 and 0^0 = 0
    if math.isinf(p):
        return np.where(x > 0, 1.0, 0.0)
    return x ** (1.0 / p)


def _worst(cond: str, excess: np.ndarray, slack: np.ndarray, pts: Sequence[np.ndarray]) -> list[KrsViolation]:
    # excess beyond ``slack`` flags a violation; the reported margin is the raw excess
    if excess.size == 0:
        return []
    beyond = excess - slack
    k = int(np.argmax(beyond))
    if not beyond.flat[k] > 0:
        return []
    return [KrsViolation(cond, tuple(float(p.flat[k]) for p in pts), float(excess.flat[k]))]


def krs_membership(
    phi_fn: Callable,
    r,
    s,
    grid=None,
    b_samples: int = 16,
    rtol: float = 1e-12,
) -> KrsReport:
    """Check the five defining conditions of K_{r,s} on ``grid`` ⊂ [0, 1].

    Each failing condition contributes its worst grid point (or pair) and the
    margin by which it fails; tolerances are relative to the terms compared.
    """
    r_val, s_val = Exponent(r).value, Exponent(s).value
    if not r_val <= s_val:
        raise ValueError("krs_membership needs r <= s")
    x = unit_grid() if grid is None else np.unique(np.asarray(grid, dtype=float))
    if x.size and (x[0] < 0 or x[-1] > 1):
        raise ValueError("grid must lie in [0, 1]")
    f = np.asarray(phi_fn(x), dtype=float)
    out: list[KrsViolation] = []

    # (i)
    out += _worst("i", f[:-1] - f[1:], rtol * np.abs(f[:-1]), (x[:-1], x[1:]))

    iu, ju = np.triu_indices(x.size, k=1)
    xi, xj = x[iu], x[ju]
    mid = 0.5 * (xi + xj)

    # (ii) convexity of φ∘(·)^{1/r} on the transformed grid
    g_i = np.asarray(phi_fn(_root(xi, r_val)), dtype=float)
    g_j = np.asarray(phi_fn(_root(xj, r_val)), dtype=float)
    g_m = np.asarray(phi_fn(_root(mid, r_val)), dtype=float)
    avg = 0.5 * (g_i + g_j)
    out += _worst("ii", g_m - avg, rtol * avg, (xi, xj))

    if not math.isinf(s_val):
        # (iii) concavity of φ∘(·)^{1/s}
        h_i = np.asarray(phi_fn(_root(xi, s_val)), dtype=float)
        h_j = np.asarray(phi_fn(_root(xj, s_val)), dtype=float)
        h_m = np.asarray(phi_fn(_root(mid, s_val)), dtype=float)
        avg = 0.5 * (h_i + h_j)
        out += _worst("iii", avg - h_m, rtol * h_m, (xi, xj))

    # (iv) increment bounds for pairs u < t
    d = f[ju] - f[iu]
    lower = psi(s_val, xj) - psi(s_val, xi)
    upper = psi(r_val, xj) - psi(r_val, xi)
    scale = rtol * (np.abs(f[ju]) + np.abs(f[iu]) + np.abs(upper))
    out += _worst("iv", np.maximum(lower - d, d - upper), scale, (xi, xj))

    if not math.isinf(s_val):
        # (v) dilation bound for b ∈ (1, 2]
        b = np.linspace(1.0, 2.0, b_samples + 1)[1:]
        B, T = np.meshgrid(b, x, indexing="ij")
        ok = B * T <= 1.0
        Bv, Tv = B[ok], T[ok]
        lhs = np.asarray(phi_fn(Bv * Tv), dtype=float)
        rhs = Bv**s_val * np.asarray(phi_fn(Tv), dtype=float)
        out += _worst("v", lhs - rhs, rtol * rhs, (Bv, Tv))

    return KrsReport(tuple(out))


@dataclass(frozen=True)
class NearZeroSearch:
    """Parameter box for near-zero comparison."""

    b_grid: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0, 16.0)
    C_max: float = 2.0
    c_grid: tuple[float, ...] = (1.0, 0.1, 0.01)
    grid: np.ndarray = field(default_factory=near_zero_grid, compare=False)
    growth_decades: int = 2

    def to_json(self) -> dict:
        g = np.asarray(self.grid)
        return {
            "b_grid": list(self.b_grid),
            "C_max": self.C_max,
            "c_grid": list(self.c_grid),
            "grid": {"lo": float(g.min()), "hi": float(g.max()), "n": int(g.size)},
        }


def _ratio(G: Callable, F: Callable, b: float, t: np.ndarray) -> np.ndarray:
    gv = np.asarray(G(t), dtype=float)
    fv = np.asarray(F(b * t), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = gv / fv
    ratio[(fv == 0) & (gv == 0)] = 0.0
    ratio[(fv == 0) & (gv > 0)] = np.inf
    return ratio


def equivalence_near_zero(F: Callable, G: Callable, search: NearZeroSearch | None = None) -> Verdict:
    """Search for (b, C, c) with G(t) ≤ C·F(bt) for grid points t ∈ (0, c].

    The argument bt is kept inside (0, 1], so c is capped at 1/b. The first
    b (ascending) admitting some c wins; among its c values the smallest
    sufficient C is reported, ties going to the larger c. Without a witness,
    the ratio G(t)/F(bt) is sampled at decade points down to the smallest
    grid point; growth at every decade for every b is reported as a violation.
    """
    search = search or NearZeroSearch()
    t_all = np.asarray(search.grid, dtype=float)
    t_all = t_all[t_all > 0]
    box = search.to_json()
    for b in sorted(search.b_grid):
        best = None
        for c in search.c_grid:
            c_eff = min(c, 1.0 / b)
            t = t_all[t_all <= c_eff]
            if t.size == 0:
                continue
            C_need = float(np.max(_ratio(G, F, b, t)))
            if C_need <= search.C_max * (1 + 1e-12):
                key = (C_need, -c_eff)
                if best is None or key < best[0]:
                    best = (key, C_need, c_eff)
        if best is not None:
            return Verdict(VerdictKind.WITNESS, {"b": b, "C": best[1], "c": best[2]}, box)

    t_min = float(t_all.min())
    decades = t_min * 10.0 ** np.arange(search.growth_decades + 1)
    idx = np.unique([int(np.argmin(np.abs(np.log(t_all / d)))) for d in decades])
    t_pts = t_all[idx]  # ascending
    growth = {}
    for b in sorted(search.b_grid):
        ok = t_pts[t_pts * b <= 1.0]
        if ok.size < 2:
            return Verdict(VerdictKind.INCONCLUSIVE, {"reason": f"too few decade points for b={b}"}, box)
        ratios = _ratio(G, F, b, ok)
        # ascending t, so growth toward 0 means strictly decreasing along the array
        if not np.all(ratios[:-1] > ratios[1:] * (1 + 1e-9)):
            return Verdict(VerdictKind.INCONCLUSIVE, {"nonmonotone_b": b, "t": ok, "ratio": ratios}, box)
        growth[b] = ratios
    return Verdict(
        VerdictKind.VIOLATION,
        {"t": t_pts, "ratio_by_b": {str(b): v.tolist() for b, v in growth.items()}},
        box,
    )


def doubling_equivalence(F: Callable, b: float, search: NearZeroSearch | None = None):
    """Both comparisons between F and t ↦ F(bt) near zero."""
    Fb = lambda t: F(b * np.asarray(t, dtype=float))  # noqa: E731
    return equivalence_near_zero(F, Fb, search), equivalence_near_zero(Fb, F, search)


@dataclass(frozen=True)
class SandwichResult:
    lam: float
    nu: ExponentMeasure
    max_violation: float
    tol: float = 1e-13

    @property
    def holds(self) -> bool:
        return self.max_violation <= self.tol


def minsupp_sandwich(mu: ExponentMeasure, s, grid=None, tol: float = 1e-13) -> SandwichResult:
    """Restrict μ to [min supp μ, s) and check ψ_μ ≤ ψ_ν ≤ ψ_μ/λ on ``grid``."""
    s_val = Exponent(s).value
    p, w = mu.p, mu.w
    r = float(p.min())
    keep = (p >= r) & (p < s_val)
    lam = math.fsum(w[keep])
    if lam <= 0:
        raise ValueError(f"mu([{r}, {s_val})) = 0; the sandwich needs positive mass there")
    nu = ExponentMeasure(tuple(p[keep]), tuple(w[keep] / lam))
    t = unit_grid() if grid is None else np.asarray(grid, dtype=float)
    pm = psi_mixture(mu, t)
    pn = psi_mixture(nu, t)
    viol = max(float(np.max(pm - pn)), float(np.max(pn - pm / lam)))
    return SandwichResult(lam, nu, viol, tol)


def power_difference_gap(r, s, u, v) -> np.ndarray:
    """(v^s − u^s)/s − (v^r − u^r)/r, nonpositive for r ≤ s and 0 ≤ u ≤ v ≤ 1."""
    r_val, s_val = _exponent_array(r), _exponent_array(s)
    return (psi(s_val, v) - psi(s_val, u)) - (psi(r_val, v) - psi(r_val, u))


def _exponent_array(p) -> np.ndarray | float:
    if np.ndim(p) == 0:
        return Exponent(p).value
    arr = np.asarray(p, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr <= 0):
        raise ValueError("exponents must be positive")
    return arr


def psi_sup_distance(r, s, grid) -> tuple[float, float]:
    """max |Ψ_r − Ψ_s| on ``grid`` and the point attaining it."""
    r_val, s_val = Exponent(r).value, Exponent(s).value
    t = np.asarray(grid, dtype=float)
    d = np.abs(psi(r_val, t) - psi(s_val, t))
    k = int(np.argmax(d))
    return float(d[k]), float(t[k])
