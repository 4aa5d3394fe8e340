"""Exponents in (0, ∞], variable exponents over finitely many atoms, and
the power functions Φ_p(t) = t^p and Ψ_p(t) = t^p / p.

The infinite exponent is a first-class value. Every power computation goes
through :func:`phi` / :func:`psi`, which apply the conventions 1^∞ = 0 and
Φ_∞ = Ψ_∞ = ∞·χ_(1,∞) instead of IEEE semantics (where ``1.0 ** inf == 1``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Exponent",
    "INF_EXPONENT",
    "TailKind",
    "TailSpec",
    "VarExponent",
    "EssentialRange",
    "ExponentDomainError",
    "conjugate_exponent",
    "essential_range",
    "limit_points",
    "phi",
    "psi",
    "conjugate_array",
]


class ExponentDomainError(ValueError):
    """An exponent operation was requested outside its domain."""


@total_ordering
@dataclass(frozen=True)
class Exponent:
    """A value in (0, ∞]. ``Exponent("inf")`` is the infinite exponent."""

    value: float

    def __init__(self, value):
        dual = None
        if isinstance(value, Exponent):
            v = value.value
            dual = value._dual
        elif isinstance(value, str):
            if value.strip().lower() not in ("inf", "infinity", "∞"):
                raise ExponentDomainError(f"cannot parse exponent {value!r}")
            v = math.inf
        else:
            v = float(value)
        if math.isnan(v) or v <= 0:
            raise ExponentDomainError(f"exponent must lie in (0, inf], got {value!r}")
        object.__setattr__(self, "value", v)
        # the exponent this one was conjugated from, so that p'' == p exactly
        object.__setattr__(self, "_dual", dual)

    @classmethod
    def _paired(cls, value: float, dual: float) -> "Exponent":
        e = cls(value)
        object.__setattr__(e, "_dual", dual)
        return e

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def reciprocal(self) -> float:
        """1/p, with 1/∞ = 0."""
        return 0.0 if self.is_infinite else 1.0 / self.value

    def conjugate(self) -> "Exponent":
        return conjugate_exponent(self)

    def to_json(self):
        return "inf" if self.is_infinite else self.value

    def __float__(self) -> float:
        return self.value

    def __lt__(self, other):
        if not isinstance(other, Exponent):
            other = Exponent(other)
        return self.value < other.value

    def __repr__(self) -> str:
        return "Exponent(inf)" if self.is_infinite else f"Exponent({self.value!r})"


INF_EXPONENT = Exponent("inf")


def conjugate_exponent(p) -> Exponent:
    """Return p' with 1/p + 1/p' = 1 (1 ↦ ∞, ∞ ↦ 1)."""
    p = Exponent(p)
    if p.value < 1:
        raise ExponentDomainError(f"conjugate exponent undefined for p = {p.value} < 1")
    if p._dual is not None:
        return Exponent._paired(p._dual, p.value)
    if p.is_infinite:
        q = 1.0
    elif p.value == 1.0:
        q = math.inf
    else:
        q = p.value / (p.value - 1.0)
    return Exponent._paired(q, p.value)


def conjugate_array(p: np.ndarray) -> np.ndarray:
    """Atomwise conjugate of a float exponent array (np.inf encodes ∞)."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 1):
        raise ExponentDomainError("conjugate exponent undefined below 1")
    out = np.empty_like(p)
    inf = np.isinf(p)
    one = p == 1.0
    mid = ~(inf | one)
    out[inf] = 1.0
    out[one] = np.inf
    out[mid] = p[mid] / (p[mid] - 1.0)
    return out


def phi(p, t):
    """Φ_p(t) = t^p elementwise (broadcasting), with 1^∞ = 0 and Φ_∞ = ∞·χ_(1,∞)."""
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    p, t = np.broadcast_arrays(p, t)
    out = np.zeros(p.shape)
    inf = np.isinf(p)
    fin = ~inf & (t > 0)
    with np.errstate(over="ignore"):
        out[fin] = np.power(t[fin], p[fin])
    out[inf & (t > 1)] = np.inf
    return out if out.ndim else float(out)


def psi(p, t):
    """Ψ_p(t) = t^p / p elementwise, with Ψ_∞ = ∞·χ_(1,∞)."""
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    p, t = np.broadcast_arrays(p, t)
    out = np.zeros(p.shape)
    inf = np.isinf(p)
    fin = ~inf & (t > 0)
    with np.errstate(over="ignore"):
        out[fin] = np.power(t[fin], p[fin]) / p[fin]
    out[inf & (t > 1)] = np.inf
    return out if out.ndim else float(out)


class TailKind(str, Enum):
    NONE = "none"
    CONSTANT = "constant"
    CONVERGENT = "convergent"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class TailSpec:
    """Asymptotic behaviour of an exponent sequence beyond its listed atoms."""

    kind: TailKind = TailKind.NONE
    values: tuple[Exponent, ...] = ()

    def __post_init__(self):
        kind = TailKind(self.kind)
        object.__setattr__(self, "kind", kind)
        vals = tuple(Exponent(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if kind is TailKind.NONE and vals:
            raise ValueError("tail kind 'none' takes no exponents")
        if kind in (TailKind.CONSTANT, TailKind.CONVERGENT) and len(vals) != 1:
            raise ValueError(f"tail kind {kind.value!r} takes exactly one exponent")
        if kind is TailKind.PERIODIC and not vals:
            raise ValueError("periodic tail needs at least one exponent")

    @classmethod
    def constant(cls, p) -> "TailSpec":
        return cls(TailKind.CONSTANT, (p,))

    @classmethod
    def convergent(cls, p) -> "TailSpec":
        return cls(TailKind.CONVERGENT, (p,))

    @classmethod
    def periodic(cls, ps: Iterable) -> "TailSpec":
        return cls(TailKind.PERIODIC, tuple(ps))

    def to_json(self) -> dict:
        if self.kind is TailKind.NONE:
            return {"kind": "none"}
        if self.kind is TailKind.PERIODIC:
            return {"kind": "periodic", "p": [v.to_json() for v in self.values]}
        return {"kind": self.kind.value, "p": self.values[0].to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "TailSpec":
        _reject_unknown(obj, {"kind", "p"}, "tail")
        kind = TailKind(obj.get("kind", "none"))
        if kind is TailKind.NONE:
            return cls()
        if "p" not in obj:
            raise ValueError("tail descriptor is missing 'p'")
        p = obj["p"]
        if kind is TailKind.PERIODIC:
            if not isinstance(p, list):
                raise ValueError("periodic tail expects a list under 'p'")
            return cls(kind, tuple(p))
        return cls(kind, (p,))


def _reject_unknown(obj: dict, allowed: set, what: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{what} descriptor must be a JSON object")
    extra = set(obj) - allowed
    if extra:
        raise ValueError(f"unknown keys in {what} descriptor: {sorted(extra)}")


@dataclass(frozen=True)
class VarExponent:
    """A variable exponent on finitely many atoms, each carrying a positive weight.

    ``labels`` optionally records the global index of each atom when the
    atoms are a finite window of an infinite index set (e.g. the support of a
    block family inside ℕ).
    """

    exponents: tuple[Exponent, ...]
    weights: tuple[float, ...]
    tail: TailSpec = field(default_factory=TailSpec)
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        exps = tuple(Exponent(p) for p in self.exponents)
        ws = tuple(float(w) for w in self.weights)
        if not exps:
            raise ValueError("a variable exponent needs at least one atom")
        if len(exps) != len(ws):
            raise ValueError("exponents and weights differ in length")
        if any(not (w > 0 and math.isfinite(w)) for w in ws):
            raise ValueError("atom weights must be positive and finite")
        if self.labels is not None and len(self.labels) != len(exps):
            raise ValueError("labels and atoms differ in length")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "weights", ws)
        if not isinstance(self.tail, TailSpec):
            object.__setattr__(self, "tail", TailSpec(*self.tail))

    @classmethod
    def from_atoms(cls, atoms: Sequence[tuple], tail: TailSpec | None = None) -> "VarExponent":
        return cls(tuple(a[0] for a in atoms), tuple(a[1] for a in atoms), tail or TailSpec())

    @classmethod
    def constant(cls, p, n: int, weight: float = 1.0) -> "VarExponent":
        return cls((p,) * n, (weight,) * n)

    def __len__(self) -> int:
        return len(self.exponents)

    @property
    def p(self) -> np.ndarray:
        """Exponents as a float array, ∞ encoded as ``np.inf``."""
        return np.array([e.value for e in self.exponents])

    @property
    def w(self) -> np.ndarray:
        return np.array(self.weights)

    @property
    def infinite_mask(self) -> np.ndarray:
        """Atoms of Ω_∞ (exponent ∞)."""
        return np.isinf(self.p)

    @property
    def convex_mask(self) -> np.ndarray:
        """Atoms of Ω_c (exponent ≥ 1)."""
        return self.p >= 1

    def is_convex(self) -> bool:
        return bool(np.all(self.convex_mask))

    def conjugate(self) -> "VarExponent":
        if not self.is_convex():
            raise ExponentDomainError("conjugate exponent undefined below 1")
        tail = self.tail
        if tail.kind is not TailKind.NONE:
            tail = TailSpec(tail.kind, tuple(v.conjugate() for v in tail.values))
        return VarExponent(tuple(e.conjugate() for e in self.exponents), self.weights, tail, self.labels)

    def reweighted(self, weights: Sequence[float]) -> "VarExponent":
        return VarExponent(self.exponents, tuple(weights), self.tail, self.labels)

    def to_json(self) -> dict:
        out = {"atoms": [{"p": e.to_json(), "w": w} for e, w in zip(self.exponents, self.weights)]}
        if self.tail.kind is not TailKind.NONE:
            out["tail"] = self.tail.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "VarExponent":
        if isinstance(obj, str):
            obj = json.loads(obj)
        _reject_unknown(obj, {"atoms", "tail"}, "exponent")
        atoms = obj.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            raise ValueError("exponent descriptor needs a nonempty 'atoms' list")
        exps, ws = [], []
        for a in atoms:
            _reject_unknown(a, {"p", "w"}, "atom")
            exps.append(a["p"])
            ws.append(a.get("w", 1.0))
        tail = TailSpec.from_json(obj["tail"]) if "tail" in obj else TailSpec()
        return cls(tuple(exps), tuple(ws), tail)


@dataclass(frozen=True)
class EssentialRange:
    values: tuple[Exponent, ...]
    p_minus: Exponent
    p_plus: Exponent
    p_c: float

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def essential_range(P: VarExponent) -> EssentialRange:
    """R(P): the atom exponents (all weights are positive) together with the
    limit points declared by the tail, sorted and deduplicated."""
    vals = set(P.exponents)
    if P.tail.kind is not TailKind.NONE:
        vals.update(limit_points(P))
    ordered = tuple(sorted(vals))
    p_minus = ordered[0]
    return EssentialRange(ordered, p_minus, ordered[-1], min(1.0, p_minus.value))


def limit_points(P: VarExponent) -> tuple[Exponent, ...]:
    """A(P), read off the declared tail."""
    tail = P.tail
    if tail.kind is TailKind.NONE:
        raise ExponentDomainError("A(P) undefined for finitely supported exponents")
    return tuple(sorted(set(tail.values)))
