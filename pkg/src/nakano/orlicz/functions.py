"""Orlicz functions in closed or sampled form.

Every form is a frozen dataclass that is callable on scalars or arrays and
returns floats, with ``np.inf`` where the function takes the value ∞.
:func:`evaluate` is the scalar entry point and returns an :class:`ExtReal`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..exponents import Exponent, _reject_unknown, phi, psi
from ..extreal import ExtReal

__all__ = [
    "OrliczFn",
    "PowerPhi",
    "PowerPsi",
    "LogPerturbed",
    "ExponentMeasure",
    "Mixture",
    "LacunarySeries",
    "Sampled",
    "SampleDomainError",
    "evaluate",
    "evaluate_with_bound",
    "psi_mixture",
    "orlicz_from_json",
]


class SampleDomainError(ValueError):
    """A sampled function was queried outside its grid."""


class OrliczFn:
    """Common surface of the Orlicz function forms."""

    def __call__(self, t):
        raise NotImplementedError

    @property
    def convex(self) -> bool:
        return False

    @property
    def infinite_beyond(self) -> float | None:
        """c with {F = ∞} = (c, ∞), or None when F is finite everywhere."""
        return None

    def tail_bound(self, t) -> float:
        """Upper bound on the evaluation error at t (zero for closed forms)."""
        return 0.0


def _asarray(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("Orlicz functions are evaluated at t >= 0")
    return arr


@dataclass(frozen=True)
class PowerPhi(OrliczFn):
    """Φ_p(t) = t^p."""

    p: Exponent

    def __post_init__(self):
        object.__setattr__(self, "p", Exponent(self.p))

    def __call__(self, t):
        return phi(self.p.value, _asarray(t))

    @property
    def convex(self):
        return self.p.value >= 1

    @property
    def infinite_beyond(self):
        return 1.0 if self.p.is_infinite else None


@dataclass(frozen=True)
class PowerPsi(OrliczFn):
    """Ψ_p(t) = t^p / p."""

    p: Exponent

    def __post_init__(self):
        object.__setattr__(self, "p", Exponent(self.p))

    def __call__(self, t):
        return psi(self.p.value, _asarray(t))

    @property
    def convex(self):
        return self.p.value >= 1

    @property
    def infinite_beyond(self):
        return 1.0 if self.p.is_infinite else None


@dataclass(frozen=True)
class LogPerturbed(OrliczFn):
    """F_{r,a}(t) = t^r (−log t)^a on (0, 1/e], t^r beyond, 0 at 0."""

    r: float
    a: float

    def __post_init__(self):
        if not (0 < self.r < math.inf):
            raise ValueError("LogPerturbed needs 0 < r < inf")

    def __call__(self, t):
        t = _asarray(t)
        out = np.zeros(t.shape)
        small = (t > 0) & (t <= math.exp(-1))
        big = t > math.exp(-1)
        ts = t[small]
        out[small] = ts**self.r * (-np.log(ts)) ** self.a
        out[big] = t[big] ** self.r
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class ExponentMeasure:
    """A probability measure with finitely many atoms on (0, ∞]."""

    exponents: tuple[Exponent, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        exps = tuple(Exponent(p) for p in self.exponents)
        ws = tuple(float(w) for w in self.weights)
        if not exps or len(exps) != len(ws):
            raise ValueError("measure needs matching, nonempty exponents and weights")
        if any(not (w > 0) for w in ws):
            raise ValueError("atom weights must be positive")
        if abs(math.fsum(ws) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {math.fsum(ws)!r}")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def dirac(cls, p) -> "ExponentMeasure":
        return cls((p,), (1.0,))

    @classmethod
    def from_atoms(cls, atoms: Sequence[tuple]) -> "ExponentMeasure":
        return cls(tuple(a[0] for a in atoms), tuple(a[1] for a in atoms))

    @property
    def p(self) -> np.ndarray:
        return np.array([e.value for e in self.exponents])

    @property
    def w(self) -> np.ndarray:
        return np.array(self.weights)

    @property
    def support(self) -> tuple[Exponent, ...]:
        return tuple(sorted(set(self.exponents)))

    def to_json(self) -> list:
        return [{"p": e.to_json(), "w": w} for e, w in zip(self.exponents, self.weights)]


def _mixture_values(mu: ExponentMeasure, t: np.ndarray) -> np.ndarray:
    vals = psi(mu.p[:, None], np.atleast_1d(t)[None, :])
    with np.errstate(invalid="ignore"):
        out = (mu.w[:, None] * vals).sum(axis=0)
    return out.reshape(np.shape(t))


@dataclass(frozen=True)
class Mixture(OrliczFn):
    """ψ_μ(t) = Σ w_i Ψ_{p_i}(t), extended beyond t = 1 by the same formula."""

    mu: ExponentMeasure

    def __call__(self, t):
        t = _asarray(t)
        out = _mixture_values(self.mu, t)
        return out if out.ndim else float(out)

    @property
    def convex(self):
        return bool(np.all(self.mu.p >= 1))

    @property
    def infinite_beyond(self):
        return 1.0 if np.any(np.isinf(self.mu.p)) else None


def psi_mixture(mu: ExponentMeasure, t):
    """ψ_μ on [0, 1]; always finite there since Ψ_∞ vanishes on [0, 1]."""
    arr = _asarray(t)
    if np.any(arr > 1):
        raise ValueError("psi_mixture is defined on [0, 1]")
    out = _mixture_values(mu, arr)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class LacunarySeries(OrliczFn):
    """F(t) = Σ_{n≤J} b_n t^{r_n}, truncated; ``tail_weight`` bounds Σ_{n>J} b_n."""

    r: tuple[float, ...]
    b: tuple[float, ...]
    tail_weight: float = 0.0
    r_limit: float | None = None

    def __post_init__(self):
        r = tuple(float(x) for x in self.r)
        b = tuple(float(x) for x in self.b)
        if not r or len(r) != len(b):
            raise ValueError("lacunary series needs matching, nonempty r and b")
        if any(x <= 0 for x in r) or any(x <= 0 for x in b):
            raise ValueError("lacunary exponents and coefficients must be positive")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "b", b)
        if self.r_limit is None:
            object.__setattr__(self, "r_limit", min(r))

    def __call__(self, t):
        t = _asarray(t)
        tt = np.atleast_1d(t)
        with np.errstate(over="ignore"):
            terms = np.array(self.b)[:, None] * tt[None, :] ** np.array(self.r)[:, None]
        out = terms.sum(axis=0).reshape(t.shape)
        return out if out.ndim else float(out)

    def tail_bound(self, t):
        t = np.asarray(t, dtype=float)
        out = self.tail_weight * np.maximum(1.0, t ** self.r[-1])
        return out if out.ndim else float(out)

    @property
    def convex(self):
        return min(self.r) >= 1


def _loglog_interp(x: np.ndarray, xp: np.ndarray, fp: np.ndarray) -> np.ndarray:
    """Piecewise power-law interpolation; linear where a node value is 0,
    ∞ on any cell touching an infinite node."""
    idx = np.clip(np.searchsorted(xp, x, side="right") - 1, 0, len(xp) - 2)
    x0, x1 = xp[idx], xp[idx + 1]
    f0, f1 = fp[idx], fp[idx + 1]
    out = np.empty(x.shape)
    exact0 = x == x0
    exact1 = x == x1
    inf_cell = np.isinf(f0) | np.isinf(f1)
    pos = (f0 > 0) & (f1 > 0) & ~inf_cell & (x0 > 0)
    lin = ~pos & ~inf_cell
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.log(f1 / f0) / np.log(x1 / x0)
        out[pos] = (f0 * np.exp(slope * np.log(x / x0)))[pos]
        out[lin] = (f0 + (f1 - f0) * (x - x0) / (x1 - x0))[lin]
    out[inf_cell] = np.inf
    out[exact0] = f0[exact0]
    out[exact1] = f1[exact1]
    return out


@dataclass(frozen=True)
class Sampled(OrliczFn):
    """A function known on an ascending grid; evaluated by power-law
    interpolation between nodes, never extrapolated."""

    grid: np.ndarray = field(compare=False)
    values: np.ndarray = field(compare=False)
    is_convex: bool = False

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or len(g) < 2:
            raise ValueError("sampled function needs 1-D grid and values of equal length >= 2")
        if np.any(np.diff(g) <= 0) or g[0] < 0:
            raise ValueError("grid must be nonnegative and strictly ascending")
        if np.any(np.isnan(v)) or np.any(v < 0):
            raise ValueError("sampled values must be nonnegative (inf allowed)")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.grid[0]) or np.any(t > self.grid[-1]):
            raise SampleDomainError(
                f"sampled function queried outside [{self.grid[0]}, {self.grid[-1]}]"
            )
        out = _loglog_interp(np.atleast_1d(t), self.grid, self.values).reshape(t.shape)
        return out if out.ndim else float(out)

    @property
    def convex(self):
        return self.is_convex

    @property
    def infinite_beyond(self):
        if not np.isinf(self.values).any():
            return None
        return self.finite_domain_end

    @property
    def finite_domain_end(self) -> float:
        """Largest grid point carrying a finite value."""
        fin = np.flatnonzero(np.isfinite(self.values))
        return float(self.grid[fin[-1]]) if fin.size else float(self.grid[0])


def evaluate(F: OrliczFn | Callable, t: float) -> ExtReal:
    """Scalar evaluation returning an extended real."""
    if t < 0:
        raise ValueError("Orlicz functions are evaluated at t >= 0")
    return ExtReal(float(F(float(t))))


def evaluate_with_bound(F: OrliczFn, t: float) -> tuple[ExtReal, float]:
    """Value and the reported truncation bound (nonzero only for series)."""
    return evaluate(F, t), float(F.tail_bound(t))


def orlicz_from_json(obj: dict) -> OrliczFn:
    """Build an Orlicz function from a JSON descriptor such as
    ``{"kind": "psi", "p": 2}`` or ``{"kind": "mixture", "atoms": [...]}``."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("Orlicz descriptor needs a 'kind'")
    kind = obj["kind"]
    if kind in ("psi", "phi"):
        _reject_unknown(obj, {"kind", "p"}, kind)
        return (PowerPsi if kind == "psi" else PowerPhi)(Exponent(obj["p"]))
    if kind == "log":
        _reject_unknown(obj, {"kind", "r", "a"}, kind)
        return LogPerturbed(float(obj["r"]), float(obj["a"]))
    if kind == "mixture":
        _reject_unknown(obj, {"kind", "atoms"}, kind)
        atoms = obj["atoms"]
        for a in atoms:
            _reject_unknown(a, {"p", "w"}, "mixture atom")
        return Mixture(ExponentMeasure(tuple(a["p"] for a in atoms), tuple(a["w"] for a in atoms)))
    if kind == "lacunary":
        _reject_unknown(obj, {"kind", "r", "b", "tail_weight"}, kind)
        return LacunarySeries(tuple(obj["r"]), tuple(obj["b"]), float(obj.get("tail_weight", 0.0)))
    raise ValueError(f"unknown Orlicz kind {kind!r}")
