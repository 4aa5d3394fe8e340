"""Hölder pairing of conjugate variable exponents, norming pairs, kernel
operators with their adjoints, and the projection built from norming pairs."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .exponents import Exponent, ExponentDomainError, VarExponent
from .modular import WeightedVector, _as_dense, luxemburg, modular_phi

__all__ = [
    "HolderResult",
    "holder_pair",
    "NormingError",
    "NormingPair",
    "norming_pair",
    "KernelMatrix",
    "kernel_apply",
    "kernel_adjoint_apply",
    "bilinear_defect",
    "Projection",
    "build_projection",
]


def _require_convex(P: VarExponent) -> VarExponent:
    if not P.is_convex():
        raise ExponentDomainError("conjugate exponent undefined: some atom has p < 1")
    return P.conjugate()


@dataclass(frozen=True)
class HolderResult:
    pairing: float
    gauge_f: float
    gauge_g: float
    bound_ok: bool | None  # None when a Ψ-gauge exceeds 1 and the bound does not apply

    @property
    def applicable(self) -> bool:
        return self.bound_ok is not None


def holder_pair(P: VarExponent, f, g, slack: float = 1e-12) -> HolderResult:
    """Σ w_i f_i g_i, and whether it stays ≤ 2 when both Ψ-gauges are ≤ 1
    (f measured against P, g against the atomwise conjugate)."""
    Q = _require_convex(P)
    x, y = _as_dense(P, f), _as_dense(Q, g)
    pairing = math.fsum(P.w * x * y)
    gf, gg = luxemburg(P, x, "psi"), luxemburg(Q, y, "psi")
    ok = None
    if gf <= 1 + slack and gg <= 1 + slack:
        ok = pairing <= 2 + slack
    return HolderResult(pairing, gf, gg, ok)


class NormingError(ValueError):
    """Preconditions of the norming-pair construction fail, or its identity does."""


@dataclass(frozen=True)
class NormingPair:
    """f = g^{Q−1} against g, with P the atomwise conjugate of Q."""

    f: np.ndarray = field(compare=False)
    g: np.ndarray = field(compare=False)
    P: VarExponent
    Q: VarExponent
    pairing: float
    rho_P: float
    rho_Q: float

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.g != 0)

    def rescaled(self, c: float) -> "NormingPair":
        """The same pair with f scaled by c; a deliberate defect for controls."""
        return replace(self, f=c * self.f, pairing=c * self.pairing)

    def to_json(self) -> dict:
        return {
            "f": WeightedVector.from_dense(self.f).to_json(),
            "g": WeightedVector.from_dense(self.g).to_json(),
            "pairing": self.pairing,
            "rho_P": self.rho_P,
            "rho_Q": self.rho_Q,
        }


def norming_pair(Q: VarExponent, g, tol: float = 1e-9) -> NormingPair:
    """Build f_i = g_i^{q_i − 1} (0^0 = 0) and verify pairing = ρ_P(f) = ρ_Q(g) = 1.

    Needs g ≥ 0 with Φ-gauge 1 over Q, and Q finite and > 1 on supp(g) so
    that f is defined and P = Q′ is finite there too.
    """
    P = _require_convex(Q)
    y = _as_dense(Q, g)
    if np.any(y < 0):
        raise NormingError("g must be nonnegative")
    gauge = luxemburg(Q, y, "phi")
    if abs(gauge - 1.0) > tol:
        raise NormingError(f"g must have Phi-gauge 1, got {gauge!r}")
    sup = y > 0
    q = Q.p
    if np.any(~np.isfinite(q[sup])) or np.any(q[sup] <= 1):
        raise NormingError("Q must be finite and > 1 on supp(g)")
    f = np.zeros_like(y)
    f[sup] = y[sup] ** (q[sup] - 1.0)
    pairing = math.fsum(Q.w * f * y)
    rho_P = float(modular_phi(P, f).value)
    rho_Q = float(modular_phi(Q, y).value)
    for name, val in (("pairing", pairing), ("rho_P(f)", rho_P), ("rho_Q(g)", rho_Q)):
        if abs(val - 1.0) > tol:
            raise NormingError(f"{name} = {val!r} differs from 1 by more than {tol}")
    return NormingPair(f, y, P, Q, pairing, rho_P, rho_Q)


@dataclass(frozen=True)
class KernelMatrix:
    """Nonnegative kernel K(i, j) with measures ``w`` on rows and ``v`` on columns."""

    K: np.ndarray = field(compare=False)
    w: np.ndarray = field(compare=False)
    v: np.ndarray = field(compare=False)

    def __post_init__(self):
        K = np.array(self.K, dtype=float)
        if K.ndim != 2:
            raise ValueError("kernel must be a 2-D array")
        w = np.ones(K.shape[0]) if self.w is None else np.array(self.w, dtype=float)
        v = np.ones(K.shape[1]) if self.v is None else np.array(self.v, dtype=float)
        if w.shape != (K.shape[0],) or v.shape != (K.shape[1],):
            raise ValueError("row/column measures do not match the kernel shape")
        if not np.all(np.isfinite(K)) or np.any(K < 0):
            raise ValueError("kernel entries must be finite and nonnegative")
        if np.any(w <= 0) or np.any(v <= 0):
            raise ValueError("measures must be positive")
        for a in (K, w, v):
            a.setflags(write=False)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, K, w=None, v=None) -> "KernelMatrix":
        return cls(K, w, v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        for row in self.K:
            wr.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, w=None, v=None) -> "KernelMatrix":
        rows = [[float(x) for x in r] for r in csv.reader(io.StringIO(text)) if r]
        if len({len(r) for r in rows}) > 1:
            raise ValueError("kernel CSV rows differ in length")
        return cls(np.array(rows), w, v)


def _vec(x, n: int) -> np.ndarray:
    if isinstance(x, WeightedVector):
        return x.dense(n)
    arr = np.asarray(x, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {arr.shape}")
    return arr


def kernel_apply(K: KernelMatrix, f) -> WeightedVector:
    """T f (j) = Σ_i K(i, j) f_i w_i."""
    x = _vec(f, K.K.shape[0])
    return WeightedVector.from_dense(K.K.T @ (K.w * x))


def kernel_adjoint_apply(K: KernelMatrix, g) -> WeightedVector:
    """T′ g (i) = Σ_j K(i, j) g_j v_j."""
    y = _vec(g, K.K.shape[1])
    return WeightedVector.from_dense(K.K @ (K.v * y))


def bilinear_defect(K: KernelMatrix, f, g) -> float:
    """⟨T f, g⟩_v − ⟨f, T′ g⟩_w."""
    x, y = _vec(f, K.K.shape[0]), _vec(g, K.K.shape[1])
    Tf = np.array(kernel_apply(K, x).values)
    Tg = np.array(kernel_adjoint_apply(K, y).values)
    return math.fsum(K.v * Tf * y) - math.fsum(K.w * x * Tg)


@dataclass(frozen=True)
class Projection:
    """T: (a_n) ↦ Σ a_n f_n as an (atoms × N) matrix; S′: h ↦ (⟨g_n, h⟩)_n as
    (N × atoms); ``product`` = S′T."""

    T: np.ndarray = field(compare=False)
    S_prime: np.ndarray = field(compare=False)
    product: np.ndarray = field(compare=False)
    residual: float
    r: Exponent | None


def build_projection(pairs: Sequence[NormingPair], r=None) -> Projection:
    if not pairs:
        raise ValueError("need at least one norming pair")
    w = pairs[0].Q.w
    n_atoms = len(w)
    owner = np.full(n_atoms, -1)
    for n, pr in enumerate(pairs):
        if len(pr.g) != n_atoms:
            raise ValueError("norming pairs live on different atom sets")
        sup = (pr.g != 0) | (pr.f != 0)
        clash = sup & (owner >= 0)
        if clash.any():
            i = int(np.flatnonzero(clash)[0])
            raise ValueError(f"pairs {owner[i]} and {n} overlap at atom {i}")
        owner[sup] = n
    T = np.column_stack([pr.f for pr in pairs])
    S = np.vstack([w * pr.g for pr in pairs])
    prod = S @ T
    residual = float(np.max(np.abs(prod - np.eye(len(pairs)))))
    return Projection(T, S, prod, residual, None if r is None else Exponent(r))
