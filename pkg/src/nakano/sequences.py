"""Disjoint block families, the Musielak–Orlicz sequences they induce, and
the explicit block bases built from a pairing of ℕ×ℕ onto ℕ."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .exponents import Exponent, TailSpec, VarExponent, phi, psi
from .grids import near_zero_grid, unit_grid
from .modular import WeightedVector, luxemburg
from .orlicz.functions import Sampled
from .verdict import Verdict, VerdictKind

__all__ = [
    "cantor_pair",
    "cantor_unpair",
    "BlockFamily",
    "InducedOrlicz",
    "induced_orlicz",
    "induced_to_csv",
    "BlockBasis",
    "BlockSeries",
    "block_basis",
    "EmbedSearch",
    "musielak_embed_check",
    "Dichotomy",
    "dichotomy_normalize",
]


def cantor_pair(k: int, j: int) -> int:
    """1-based Cantor pairing ℕ×ℕ → ℕ."""
    if k < 1 or j < 1:
        raise ValueError("pairing arguments are 1-based")
    x, y = k - 1, j - 1
    return (x + y) * (x + y + 1) // 2 + y + 1


def cantor_unpair(n: int) -> tuple[int, int]:
    """Inverse of :func:`cantor_pair`; the second component is β(n)."""
    if n < 1:
        raise ValueError("pairing values are 1-based")
    z = n - 1
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y + 1, y + 1


@dataclass(frozen=True)
class BlockFamily:
    """Nonzero, pairwise disjointly supported vectors over one exponent."""

    P: VarExponent
    blocks: tuple[WeightedVector, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise ValueError("a block family needs at least one block")
        seen: dict[int, int] = {}
        for n, x in enumerate(blocks):
            x.dense(len(self.P))  # index range check
            if x.is_zero:
                raise ValueError(f"block {n} is zero")
            for i, v in zip(x.indices, x.values):
                if v == 0:
                    continue
                if i in seen:
                    raise ValueError(f"blocks {seen[i]} and {n} overlap at atom {i}")
                seen[i] = n
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def dense(self) -> np.ndarray:
        """Blocks as rows of an N × (atoms) array."""
        return np.array([x.dense(len(self.P)) for x in self.blocks])

    def to_json(self) -> dict:
        return {"exponent": self.P.to_json(), "blocks": [x.to_json() for x in self.blocks]}

    @classmethod
    def from_json(cls, obj) -> "BlockFamily":
        if isinstance(obj, str):
            obj = json.loads(obj)
        extra = set(obj) - {"exponent", "blocks"}
        if extra:
            raise ValueError(f"unknown keys in block family descriptor: {sorted(extra)}")
        return cls(VarExponent.from_json(obj["exponent"]), tuple(WeightedVector.from_json(b) for b in obj["blocks"]))


@dataclass(frozen=True)
class InducedOrlicz:
    """Per-block functions sampled on ``grid``.

    ``F[n]`` is the induced function of block n, ``G[n]`` its finite-exponent
    part rescaled by the common gauge bound ``b``, and ``c[n] = G``-mass.
    """

    grid: np.ndarray = field(compare=False)
    F: np.ndarray = field(compare=False)
    G: np.ndarray = field(compare=False)
    c: np.ndarray = field(compare=False)
    b: float
    kind: str

    def sampled_F(self, n: int) -> Sampled:
        return Sampled(self.grid, self.F[n])

    def sampled_G(self, n: int) -> Sampled:
        return Sampled(self.grid, self.G[n])


def induced_orlicz(P: VarExponent, X: BlockFamily, grid=None, kind: str = "psi") -> InducedOrlicz:
    """Sample F_n(t) = Σ_i w_i M_{p_i}(t|x_{n,i}|) (M = Ψ or Φ) on ``grid``.

    b is the largest Φ-Luxemburg gauge among the blocks, which makes every
    c_n = Σ_{p_i<∞} w_i (|x_{n,i}|/b)^{p_i} at most 1. G_n is Σ_{p_i<∞}
    w_i Ψ_{p_i}(t|x_{n,i}|/b), so F_n(t) = G_n(tb) for t ≤ 1/b when M = Ψ.
    """
    if X.P != P:
        raise ValueError("block family is defined over a different exponent")
    if kind not in ("psi", "phi"):
        raise ValueError("kind must be 'psi' or 'phi'")
    M = psi if kind == "psi" else phi
    t = unit_grid() if grid is None else np.asarray(grid, dtype=float)
    if np.any(t < 0) or np.any(t > 1):
        raise ValueError("grid must lie in [0, 1]")
    A = np.abs(X.dense())
    p, w = P.p, P.w
    fin = ~P.infinite_mask
    b = max(luxemburg(P, row, "phi") for row in A)
    F = np.empty((len(A), t.size))
    G = np.empty((len(A), t.size))
    c = np.empty(len(A))
    for n, row in enumerate(A):
        sup = row > 0
        F[n] = (w[sup, None] * M(p[sup, None], t[None, :] * row[sup, None])).sum(axis=0)
        s = sup & fin
        G[n] = (w[s, None] * psi(p[s, None], t[None, :] * row[s, None] / b)).sum(axis=0)
        c[n] = math.fsum(w[s] * (row[s] / b) ** p[s])
    return InducedOrlicz(t, F, G, c, float(b), kind)


def induced_to_csv(ind: InducedOrlicz, which: str = "F") -> str:
    """CSV text with columns t, F_1(t), ..., F_N(t) (or G_n)."""
    rows = ind.F if which == "F" else ind.G
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["t"] + [f"{which}_{n + 1}" for n in range(len(rows))])
    for k, tv in enumerate(ind.grid):
        wr.writerow([repr(float(tv))] + [repr(float(v)) if np.isfinite(v) else "inf" for v in rows[:, k]])
    return buf.getvalue()


@dataclass(frozen=True)
class BlockSeries:
    """F(t) = Σ_j (t a_j)^{q_j}, the common modular of every block."""

    q: tuple[float, ...]
    a: tuple[float, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t)
        terms = phi(np.array(self.q)[:, None], tt[None, :] * np.array(self.a)[:, None])
        out = np.array([math.fsum(col) for col in terms.T]).reshape(t.shape)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class BlockBasis:
    family: BlockFamily
    F: BlockSeries
    scale: float

    @property
    def P(self) -> VarExponent:
        return self.family.P


def block_basis(q: Sequence[float], a: Sequence[float], K: int, auto_scale: bool = False) -> BlockBasis:
    """Blocks x_k = Σ_j a_j e_{σ(k,j)}, k = 1..K, over the exponent p_n = q_{β(n)}.

    The exponent lives on the labels σ(k, j) that the blocks use; every q_j
    recurs along ℕ, which the periodic tail records. With ``auto_scale`` the
    coefficients are multiplied by the common factor making Σ a_j^{q_j} = 1.
    """
    q = [float(Exponent(v).value) for v in q]
    a = [float(v) for v in a]
    if not q or len(q) != len(a) or K < 1:
        raise ValueError("need matching nonempty q and a, and K >= 1")
    if any(math.isinf(v) for v in q):
        raise ValueError("block exponents must be finite")
    if any(x1 < x2 for x1, x2 in zip(q, q[1:])):
        raise ValueError("q_j must be nonincreasing")
    if any(v <= 0 for v in a):
        raise ValueError("coefficients a_j must be positive")

    def mass(lam: float) -> float:
        return math.fsum((lam * aj) ** qj for aj, qj in zip(a, q))

    scale = 1.0
    if abs(mass(1.0) - 1.0) > 1e-10:
        if not auto_scale:
            raise ValueError(f"sum of a_j^q_j is {mass(1.0)!r}, not 1 (pass auto_scale to rescale)")
        hi = 1.0
        while mass(hi) < 1.0:
            hi *= 2.0
        lo = hi
        while mass(lo) > 1.0:
            lo /= 2.0
        scale = brentq(lambda lam: mass(lam) - 1.0, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
        a = [scale * v for v in a]

    J = len(q)
    labels = sorted(cantor_pair(k, j) for k in range(1, K + 1) for j in range(1, J + 1))
    pos = {n: i for i, n in enumerate(labels)}
    exps = tuple(q[cantor_unpair(n)[1] - 1] for n in labels)
    P = VarExponent(exps, (1.0,) * len(labels), TailSpec.periodic(sorted(set(q))), tuple(labels))
    blocks = tuple(
        WeightedVector(tuple(pos[cantor_pair(k, j)] for j in range(1, J + 1)), tuple(a))
        for k in range(1, K + 1)
    )
    return BlockBasis(BlockFamily(P, blocks), BlockSeries(tuple(q), tuple(a)), scale)


@dataclass(frozen=True)
class EmbedSearch:
    delta_grid: tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8)
    b_grid: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    C_grid: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    a_budget: float = 1e-9
    min_points: int = 8
    growth_decades: int = 2

    def to_json(self) -> dict:
        return {
            "delta_grid": list(self.delta_grid),
            "b_grid": list(self.b_grid),
            "C_grid": list(self.C_grid),
            "a_budget": self.a_budget,
            "min_points": self.min_points,
        }


def _family_on(fam: Sequence, grid: np.ndarray) -> list[Callable]:
    out = []
    for f in fam:
        if callable(f):
            out.append(f)
            continue
        arr = np.asarray(f, dtype=float)
        if arr.shape != grid.shape:
            raise ValueError(f"sampled function has {arr.size} values for a grid of {grid.size}")
        out.append(Sampled(grid, arr))
    return out


def musielak_embed_check(F: Sequence, G: Sequence, grid=None, search: EmbedSearch | None = None) -> Verdict:
    """Search (δ, b, C) with Σ_n a_n ≤ a_budget, where
    a_n = max(0, max{G_n(t) − C F_n(bt) : t on the grid, F_n(t) < δ}).

    Only t with bt inside the grid are used, and a δ is admissible only when
    at least ``min_points`` positive grid points satisfy F_n(t) < δ for every
    n (otherwise the grid cannot resolve the condition). Witnesses are tried
    in order of b, then C, then decreasing δ.
    """
    search = search or EmbedSearch()
    grid = near_zero_grid() if grid is None else np.asarray(grid, dtype=float)
    if len(F) != len(G):
        raise ValueError(f"families differ in length: {len(F)} vs {len(G)}")
    if not len(F):
        raise ValueError("families must be nonempty")
    Fs, Gs = _family_on(F, grid), _family_on(G, grid)
    box = search.to_json()
    top = grid[-1]

    Ft = np.array([np.asarray(f(grid), dtype=float) for f in Fs])
    Gt = np.array([np.asarray(g(grid), dtype=float) for g in Gs])
    for b in sorted(search.b_grid):
        ok = b * grid <= top
        t = grid[ok]
        Fb = np.array([np.asarray(f(b * t), dtype=float) for f in Fs])
        Fo, Go = Ft[:, ok], Gt[:, ok]
        for C in sorted(search.C_grid):
            with np.errstate(invalid="ignore"):
                deficit = Go - C * Fb
            for delta in sorted(search.delta_grid, reverse=True):
                mask = Fo < delta
                if np.min(np.sum(mask & (t > 0), axis=1)) < search.min_points:
                    continue
                a = np.where(mask, deficit, -np.inf).max(axis=1)
                a = np.maximum(a, 0.0)
                if not np.all(np.isfinite(a)):
                    continue
                if math.fsum(a) <= search.a_budget:
                    return Verdict(VerdictKind.WITNESS, {"delta": delta, "b": b, "C": C, "a": a.tolist()}, box)

    # no witness: look for relative growth of G_n/(C F_n(bt)) toward 0 at the extreme box corner
    b, C = max(search.b_grid), max(search.C_grid)
    t_pos = grid[(grid > 0) & (b * grid <= top)]
    if t_pos.size < 2:
        return Verdict(VerdictKind.INCONCLUSIVE, {"reason": "grid too coarse for the growth test"}, box)
    decades = t_pos.min() * 10.0 ** np.arange(search.growth_decades + 1)
    t_pts = t_pos[np.unique([int(np.argmin(np.abs(np.log(t_pos / d)))) for d in decades])]
    for n, (f, g) in enumerate(zip(Fs, Gs)):
        fb = C * np.asarray(f(b * t_pts), dtype=float)
        gv = np.asarray(g(t_pts), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(fb > 0, gv / fb, np.inf)
        if ratio[0] > 1 and np.all(ratio[:-1] > ratio[1:] * (1 + 1e-9)):
            return Verdict(
                VerdictKind.VIOLATION,
                {"n": n, "t": float(t_pts[0]), "b": b, "C": C, "ratio": ratio.tolist(), "t_points": t_pts.tolist()},
                box,
            )
    return Verdict(VerdictKind.INCONCLUSIVE, {}, box)


@dataclass(frozen=True)
class Dichotomy:
    """Both branches of the c_n dichotomy on a finite prefix.

    ``case`` follows the limsup surrogate: the largest c_n over the second
    half of the prefix compared against ε.
    """

    case: str
    eps: float
    large: tuple[int, ...]
    small: tuple[int, ...]
    normalized: np.ndarray = field(compare=False)
    consecutive_distance: float
    summable_total: float
    c_total: float
    selection_log: tuple[str, ...]


def dichotomy_normalize(ind: InducedOrlicz, eps: float = 1e-6) -> Dichotomy:
    c = np.asarray(ind.c, dtype=float)
    large = tuple(int(n) for n in np.flatnonzero(c > eps))
    small = tuple(int(n) for n in np.flatnonzero(c <= eps))
    log = [f"eps={eps!r}", f"c_n > eps at {list(large)}", f"c_n <= eps at {list(small)}"]

    normalized = ind.G[list(large)] / c[list(large), None] if large else np.empty((0, ind.grid.size))
    dist = 0.0
    if len(large) > 1:
        dist = float(np.max(np.abs(np.diff(normalized, axis=0))))
    total = math.fsum(c[list(small)]) if small else 0.0

    half = c[len(c) // 2 :]
    tail_max = float(half.max())
    case = "inf" if tail_max > eps else "summable"
    log.append(f"max c_n over indices >= {len(c) // 2} is {tail_max!r} -> case {case}")
    if case == "inf":
        log.append(f"subsequence kept: {list(large)}")
    else:
        log.append(f"subsequence kept: {list(small)}; sum c_n = {total!r}")
    return Dichotomy(case, eps, large, small, normalized, dist, total, math.fsum(c), tuple(log))
