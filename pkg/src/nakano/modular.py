"""Φ- and Ψ-modulars of a variable exponent and their Luxemburg gauges."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .exponents import VarExponent, _reject_unknown, phi, psi
from .extreal import ExtReal

__all__ = [
    "WeightedVector",
    "ModularValue",
    "modular",
    "modular_phi",
    "modular_psi",
    "LuxemburgError",
    "luxemburg",
    "luxemburg_many",
    "Attainment",
    "AttainmentError",
    "attainment",
    "GaugeRatio",
    "gauge_ratio",
    "DensityChange",
    "density_change",
]

BISECTION_STEPS = 200
DEFAULT_TOL = 1e-14

_KINDS = {"phi": phi, "psi": psi}


@dataclass(frozen=True)
class WeightedVector:
    """A finitely supported vector: ``values[k]`` sits on atom ``indices[k]``."""

    indices: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        vals = tuple(float(v) for v in self.values)
        if len(idx) != len(vals):
            raise ValueError("indices and values differ in length")
        if any(i < 0 for i in idx):
            raise ValueError("atom indices must be nonnegative")
        if len(set(idx)) != len(idx):
            raise ValueError("atom indices must be distinct")
        if any(not math.isfinite(v) for v in vals):
            raise ValueError("vector entries must be finite")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dense(cls, arr: Iterable[float]) -> "WeightedVector":
        arr = list(arr)
        return cls(tuple(range(len(arr))), tuple(arr))

    def dense(self, n: int) -> np.ndarray:
        if self.indices and max(self.indices) >= n:
            raise ValueError(f"vector index {max(self.indices)} outside the {n} atoms of the exponent")
        out = np.zeros(n)
        out[list(self.indices)] = self.values
        return out

    def scaled(self, c: float) -> "WeightedVector":
        return WeightedVector(self.indices, tuple(c * v for v in self.values))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def to_json(self) -> dict:
        return {"entries": [{"i": i, "v": v} for i, v in zip(self.indices, self.values)]}

    @classmethod
    def from_json(cls, obj) -> "WeightedVector":
        if isinstance(obj, str):
            obj = json.loads(obj)
        _reject_unknown(obj, {"entries"}, "vector")
        entries = obj.get("entries")
        if not isinstance(entries, list):
            raise ValueError("vector descriptor needs an 'entries' list")
        for e in entries:
            _reject_unknown(e, {"i", "v"}, "vector entry")
        return cls(tuple(e["i"] for e in entries), tuple(e["v"] for e in entries))


@dataclass(frozen=True)
class ModularValue:
    value: ExtReal
    infinite_part_flag: bool

    def __float__(self) -> float:
        return float(self.value)


def _as_dense(P: VarExponent, f) -> np.ndarray:
    if isinstance(f, WeightedVector):
        return f.dense(len(P))
    arr = np.asarray(f, dtype=float)
    if arr.shape != (len(P),):
        raise ValueError(f"dense vector needs {len(P)} entries, got shape {arr.shape}")
    return arr


def modular(P: VarExponent, f, kind: str = "phi") -> ModularValue:
    """Σ_i w_i M_{p_i}(|f_i|) with M = Φ or Ψ."""
    M = _KINDS[kind]
    x = np.abs(_as_dense(P, f))
    terms = P.w * M(P.p, x)
    flag = bool(np.any(P.infinite_mask & (x > 1)))
    value = math.inf if np.isinf(terms).any() else math.fsum(terms)
    return ModularValue(ExtReal(value), flag)


def modular_phi(P: VarExponent, f) -> ModularValue:
    return modular(P, f, "phi")


def modular_psi(P: VarExponent, f) -> ModularValue:
    return modular(P, f, "psi")


class LuxemburgError(RuntimeError):
    def __init__(self, lo: float, hi: float):
        super().__init__(f"bisection did not converge; bracket [{lo!r}, {hi!r}]")
        self.bracket = (lo, hi)


def luxemburg_many(P: VarExponent, X, kind: str = "phi", tol: float = DEFAULT_TOL) -> np.ndarray:
    """Luxemburg gauge inf{t > 0 : ρ(f/t) < 1} of every row of ``X``.

    Coordinates on ∞-exponent atoms contribute their sup norm; on the rest the
    root of t ↦ ρ(f/t) = 1 is found by bisection in log t.
    """
    M = _KINDS[kind]
    X = np.abs(np.atleast_2d(np.asarray(X, dtype=float)))
    if X.shape[1] != len(P):
        raise ValueError(f"vectors need {len(P)} entries, got {X.shape[1]}")
    inf = P.infinite_mask
    m_inf = X[:, inf].max(axis=1) if inf.any() else np.zeros(len(X))
    Xf, pf, wf = X[:, ~inf], P.p[~inf], P.w[~inf]
    m_fin = Xf.max(axis=1) if Xf.shape[1] else np.zeros(len(X))
    rows = np.flatnonzero(m_fin > 0)
    root = np.zeros(len(X))
    if rows.size:
        # the gauge is homogeneous: solve for x/max|x| and scale back, so tiny or huge inputs cannot underflow
        scale = m_fin[rows]
        Xr = Xf[rows] / scale[:, None]
        # finite exponents only here, so Φ/Ψ reduce to a weighted power sum
        coef = wf if M is phi else wf / pf

        def rho(t, sel=slice(None)):
            return ((Xr[sel] / t[:, None]) ** pf * coef).sum(axis=1)

        p_min = pf.min()
        hi = (wf * np.maximum(1.0, Xr) ** p_min).sum(axis=1) ** (1.0 / p_min) + Xr.max(axis=1)
        for _ in range(4000):
            bad = rho(hi) >= 1
            if not bad.any():
                break
            hi[bad] *= 2.0
        lo = hi.copy()
        for _ in range(4000):
            bad = rho(lo) < 1
            if not bad.any():
                break
            lo[bad] *= 0.5
        # bracket invariant: ρ(lo) ≥ 1 > ρ(hi)
        for _ in range(BISECTION_STEPS):
            open_ = hi / lo - 1.0 > tol
            if not open_.any():
                break
            if open_.all():
                mid = np.sqrt(lo) * np.sqrt(hi)
                ge = rho(mid) >= 1
                lo = np.where(ge, mid, lo)
                hi = np.where(ge, hi, mid)
                continue
            mid = np.sqrt(lo[open_]) * np.sqrt(hi[open_])
            ge = rho(mid, open_) >= 1
            lo[np.flatnonzero(open_)[ge]] = mid[ge]
            hi[np.flatnonzero(open_)[~ge]] = mid[~ge]
        stuck = hi / lo - 1.0 > tol
        if stuck.any():
            k = int(np.flatnonzero(stuck)[0])
            raise LuxemburgError(float(lo[k] * scale[k]), float(hi[k] * scale[k]))
        root[rows] = scale * (0.5 * (lo + hi))
    return np.maximum(m_inf, root)


def luxemburg(P: VarExponent, f, kind: str = "phi", tol: float = DEFAULT_TOL) -> float:
    """Luxemburg gauge of one vector; 0 for the zero vector."""
    return float(luxemburg_many(P, _as_dense(P, f)[None, :], kind, tol)[0])


class Attainment(str, Enum):
    ATTAINS_ONE = "AttainsOne"
    JUMPS_TO_INFINITY = "JumpsToInfinity"


class AttainmentError(RuntimeError):
    """Neither attainment case matched; the gauge or modular is inconsistent."""


def attainment(P: VarExponent, f, kind: str = "phi", tol: float = 1e-8) -> Attainment:
    """Classify how the modular behaves at the normalized vector f/‖f‖."""
    x = np.abs(_as_dense(P, f))
    if not x.any():
        raise ValueError("attainment needs a nonzero vector")
    norm = luxemburg(P, x, kind)
    at = float(modular(P, x / norm, kind).value)
    if abs(at - 1.0) <= tol:
        return Attainment.ATTAINS_ONE
    beyond = float(modular(P, x * (1.0 + tol) / norm, kind).value)
    if at < 1.0 and math.isinf(beyond):
        return Attainment.JUMPS_TO_INFINITY
    raise AttainmentError(f"modular at the unit sphere is {at!r}, just beyond it {beyond!r}")


@dataclass(frozen=True)
class GaugeRatio:
    min_ratio: float
    max_ratio: float


def gauge_ratio(P: VarExponent, samples: Sequence) -> GaugeRatio:
    """Extremes of Φ-gauge / Ψ-gauge over nonzero ``samples``."""
    X = np.array([_as_dense(P, f) for f in samples])
    if X.size == 0:
        raise ValueError("gauge_ratio needs at least one sample")
    if np.any(np.all(X == 0, axis=1)):
        raise ValueError("gauge_ratio samples must be nonzero")
    ratio = luxemburg_many(P, X, "phi") / luxemburg_many(P, X, "psi")
    return GaugeRatio(float(ratio.min()), float(ratio.max()))


@dataclass(frozen=True)
class DensityChange:
    """Finite-exponent modulars and gauges under the two presentations, plus
    the sup norms on ∞-exponent atoms (which scale by h rather than agree)."""

    lhs: float
    rhs: float
    norm_reweighted: float
    norm_multiplied: float
    has_infinite_atoms: bool
    sup_reweighted: float
    sup_multiplied: float

    @property
    def modular_agree(self) -> bool:
        return abs(self.lhs - self.rhs) <= 1e-12 * max(1.0, abs(self.lhs))

    @property
    def norm_agree(self) -> bool:
        return abs(self.norm_reweighted - self.norm_multiplied) <= 1e-9 * max(1.0, self.norm_reweighted)

    @property
    def agree(self) -> bool:
        return self.modular_agree and self.norm_agree


def density_change(P: VarExponent, f, h) -> DensityChange:
    """Compare f over the measure with density h^P (h on ∞ atoms) against
    f·h over the original weights."""
    x = _as_dense(P, f)
    hv = _as_dense(P, h)
    if np.any(hv <= 0):
        raise ValueError("density h must be positive on every atom")
    inf = P.infinite_mask
    nu_w = np.where(inf, P.w * hv, P.w * np.power(hv, np.where(inf, 1.0, P.p)))
    nu = P.reweighted(tuple(nu_w))
    fin_x = np.where(inf, 0.0, x)
    fin_xh = np.where(inf, 0.0, x * hv)
    lhs = float(modular_phi(nu, fin_x).value)
    rhs = float(modular_phi(P, fin_xh).value)
    sup_nu = float(np.abs(x[inf]).max()) if inf.any() else 0.0
    sup_mu = float(np.abs(x[inf] * hv[inf]).max()) if inf.any() else 0.0
    return DensityChange(
        lhs,
        rhs,
        luxemburg(nu, fin_x),
        luxemburg(P, fin_xh),
        bool(inf.any()),
        sup_nu,
        sup_mu,
    )
