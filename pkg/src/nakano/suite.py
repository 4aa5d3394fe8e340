"""Seeded invariant suite.

Each property draws from ``np.random.default_rng([seed, property_id, case])``
so results do not depend on execution order. A property returns one
:class:`PropertyResult` row.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .duality import KernelMatrix, bilinear_defect, build_projection, holder_pair, norming_pair
from .exponents import Exponent, VarExponent, conjugate_array, phi, psi
from .grids import near_zero_grid, unit_grid
from .modular import luxemburg, luxemburg_many, modular_phi
from .orlicz import (
    ExponentMeasure,
    Mixture,
    PowerPsi,
    conjugate,
    conjugate_values,
    decay_diagnostic,
    krs_membership,
    psi_mixture,
    psi_sup_distance,
)
from .sequences import block_basis, musielak_embed_check

__all__ = ["PropertyResult", "PROPERTIES", "case_rng", "run_suite"]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    cases: int
    violations: int
    worst: float  # largest excess over the tolerance-free bound (≤ 0 is clean)
    tol: float
    grid: str
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0


def case_rng(seed: int, prop_id: int, case: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, prop_id, case])


def _result(name, cases, excess, tol, grid="-") -> PropertyResult:
    excess = np.atleast_1d(np.asarray(excess, dtype=float))
    return PropertyResult(name, cases, int(np.sum(excess > tol)), float(np.max(excess)), tol, grid)


def _random_exponent(rng, n, lo=0.5, hi=10.0, p_inf=0.0) -> VarExponent:
    p = rng.uniform(lo, hi, n)
    if p_inf:
        p[rng.random(n) < p_inf] = np.inf
    return VarExponent(tuple(p), tuple(rng.uniform(0.2, 2.0, n)))


def prop_ts(seed, n=100_000):
    rng = case_rng(seed, 1)
    r = rng.uniform(0.1, 10, n)
    s = r + rng.exponential(3.0, n)
    s[rng.random(n) < 0.1] = np.inf
    u, v = np.sort(rng.random((2, n)), axis=0)
    gap = (psi(s, v) - psi(s, u)) - (psi(r, v) - psi(r, u))
    return _result("ts_inequality", n, gap, 1e-12)


def prop_psi_distance(seed, n=100):
    grid = np.linspace(0.0, 1.0, 1024)
    excess, where = [], []
    for k in range(n):
        rng = case_rng(seed, 2, k)
        r = rng.uniform(0.2, 8)
        s = np.inf if rng.random() < 0.2 else r + rng.exponential(2.0)
        d, t = psi_sup_distance(r, s, grid)
        excess.append(abs(d - (1 / r - Exponent(s).reciprocal())))
        where.append(t)
    excess = np.array(excess)
    excess[np.array(where) != 1.0] = np.inf
    return _result("psi_sup_distance", n, excess, 1e-9, "lin:0:1:1024")


def prop_mass_push(seed, n=100):
    grid = unit_grid(257)
    out = []
    for k in range(n):
        rng = case_rng(seed, 3, k)
        m = rng.integers(2, 6)
        p = np.sort(rng.uniform(0.5, 8, m))
        w = rng.dirichlet(np.ones(m))
        i, j = sorted(rng.choice(m, 2, replace=False))
        moved = w[i] * rng.random()
        w2 = w.copy()
        w2[i] -= moved
        w2[j] += moved
        keep = w2 > 0
        mu = ExponentMeasure(tuple(p), tuple(w))
        mu2 = ExponentMeasure(tuple(p[keep]), tuple(w2[keep] / w2[keep].sum()))
        out.append(np.max(psi_mixture(mu2, grid) - psi_mixture(mu, grid)))
    return _result("mixture_mass_push", n, out, 1e-15, "log:1e-8:1:256+0")


def prop_fenchel_young(seed, n=2000):
    out = []
    for k in range(20):
        rng = case_rng(seed, 4, k)
        F = PowerPsi(rng.uniform(1.2, 4.0))
        u, v = rng.uniform(0, 2, (2, n // 20))
        fstar = conjugate_values(F, v)
        out.append(np.max(u * v - F(u) - fstar))
    return _result("fenchel_young", n, out, 1e-9)


def prop_biconjugation(seed):
    v = np.geomspace(1e-3, 2.0, 256)
    u = np.geomspace(0.05, 1.0, 64)
    out = []
    for p in (1.5, 2.0, 3.0):
        Fs = conjugate(PowerPsi(p), v)
        out.append(np.max(np.abs(conjugate_values(Fs, u) - psi(p, u))))
    return _result("biconjugation", 3, out, 1e-5, "log:1e-3:2:256")


def prop_krs_mixture(seed, n=20):
    grid = unit_grid(97)
    out = []
    for k in range(n):
        rng = case_rng(seed, 6, k)
        m = rng.integers(1, 4)
        p = rng.uniform(0.5, 6, m)
        if rng.random() < 0.25:
            p[0] = np.inf
        mu = ExponentMeasure(tuple(p), tuple(rng.dirichlet(np.ones(m))))
        rep = krs_membership(Mixture(mu), float(p.min()), float(p.max()), grid)
        out.append(0.0 if rep.passed else max(v.margin for v in rep.violations))
    return _result("krs_mixture", n, out, 0.0, "log:1e-8:1:96+0")


def _vectors(rng, n, m):
    return rng.normal(size=(n, m)) * rng.lognormal(0, 1, (n, 1))


def prop_homogeneity(seed, n=1000):
    rng = case_rng(seed, 7)
    P = _random_exponent(rng, 6, p_inf=0.15)
    X = _vectors(rng, n, 6)
    c = rng.uniform(0.01, 100, (n, 1))
    a, b = luxemburg_many(P, c * X), c[:, 0] * luxemburg_many(P, X)
    return _result("luxemburg_homogeneity", n, np.abs(a - b) / b, 1e-10)


def prop_monotone(seed, n=1000):
    rng = case_rng(seed, 8)
    P = _random_exponent(rng, 6, p_inf=0.15)
    G = np.abs(_vectors(rng, n, 6))
    F = G * rng.random((n, 6))
    return _result("luxemburg_monotone", n, luxemburg_many(P, F) - luxemburg_many(P, G), 1e-12)


def prop_pc_norm(seed, n=1000):
    rng = case_rng(seed, 9)
    P = _random_exponent(rng, 6, lo=0.3, hi=5, p_inf=0.1)
    pc = min(1.0, float(P.p.min()))
    F, G = np.abs(_vectors(rng, n, 6)), np.abs(_vectors(rng, n, 6))
    lhs = luxemburg_many(P, F + G) ** pc
    rhs = luxemburg_many(P, F) ** pc + luxemburg_many(P, G) ** pc
    return _result("pc_triangle", n, lhs - rhs, 1e-10)


def prop_pminus_convex(seed, n=50):
    x = np.linspace(0, 1, 129)
    iu, ju = np.triu_indices(x.size, 1)
    out = []
    for k in range(n):
        rng = case_rng(seed, 10, k)
        P = _random_exponent(rng, 5, lo=0.3, hi=6)
        pm = float(P.p.min())
        for p in P.p:
            g = lambda t: phi(p, t ** (1 / pm))  # noqa: E731
            out.append(np.max(g(0.5 * (x[iu] + x[ju])) - 0.5 * (g(x[iu]) + g(x[ju]))))
    return _result("pminus_convexity", n, out, 1e-12, "lin:0:1:129")


def prop_gauge_equivalence(seed, n=10_000):
    rng = case_rng(seed, 11)
    P = _random_exponent(rng, 6, lo=0.5, hi=8)
    X = _vectors(rng, n, 6)
    ratio = luxemburg_many(P, X, "phi") / luxemburg_many(P, X, "psi")
    p = P.p
    # per-atom constants bracket the ratio: min/max of p^{1/p} over atoms and 1
    lo = min(1.0, float(np.min(p ** (1 / p))))
    hi = max(1.0, float(np.max(p ** (1 / p))))
    bounded = np.maximum(lo - ratio, ratio - hi)
    const = []
    for q in (0.5, 1.0, 2.0, 4.0, 7.5):
        Pc = VarExponent.constant(q, 6)
        r2 = luxemburg_many(Pc, X[:200], "phi") / luxemburg_many(Pc, X[:200], "psi")
        const.append(np.max(np.abs(r2 - q ** (1 / q))))
    return _result("gauge_equivalence", n, np.concatenate([bounded - 1e-9, np.array(const) - 1e-9]), 0.0)


def prop_unit_ball(seed, n=1000):
    rng = case_rng(seed, 12)
    P = _random_exponent(rng, 6, lo=0.5, hi=8)
    X = _vectors(rng, n, 6)
    X = X / luxemburg_many(P, X)[:, None] * rng.uniform(0.2, 1.0, (n, 1))
    mod = np.array([float(modular_phi(P, x).value) for x in X])
    return _result("unit_ball_modular", n, mod - 1.0, 1e-9)


def prop_block(seed, n=10):
    out_add, out_same, out_decay = [], [], []
    t = near_zero_grid(1e-6, 1, 25)
    for k in range(n):
        rng = case_rng(seed, 13, k)
        J = int(rng.integers(2, 8))
        q = np.sort(rng.uniform(1.0, 4.0, J))[::-1]
        bb = block_basis(q, rng.random(J) + 0.1, K=int(rng.integers(2, 5)), auto_scale=True)
        P, blocks = bb.P, bb.family.blocks
        vals = np.array([[float(modular_phi(P, x.scaled(tv)).value) for tv in t] for x in blocks])
        out_same.append(np.max(vals.max(axis=0) - vals.min(axis=0)))
        coef = rng.random(len(blocks))
        total = sum(c * x.dense(len(P)) for c, x in zip(coef, blocks))
        parts = math.fsum(float(modular_phi(P, x.scaled(c)).value) for c, x in zip(coef, blocks))
        out_add.append(abs(float(modular_phi(P, total).value) - parts) / max(1.0, parts))
        diag = decay_diagnostic(bb.F, float(q.min()), (2, 4, 6))
        out_decay.append(0.0 if diag.strictly_decreasing else 1.0)
    return [
        _result("block_additivity", n, out_add, 1e-15),
        _result("block_identical", n, out_same, 0.0),
        _result("block_decay", n, out_decay, 0.0),
    ]


def prop_embed_identity(seed, n=5):
    grid = near_zero_grid(1e-8, 1, 257)
    out = []
    for k in range(n):
        rng = case_rng(seed, 14, k)
        fam = [PowerPsi(p) for p in rng.uniform(0.8, 5, 3)]
        v = musielak_embed_check(fam, fam, grid)
        out.append(0.0 if (v.witness_found and v["b"] == 1 and v["C"] == 1 and max(v["a"]) == 0) else 1.0)
    return _result("embed_identity", n, out, 0.0, "log:1e-8:1:257")


def prop_pointwise_young(seed, n=100_000):
    rng = case_rng(seed, 15)
    p = rng.uniform(1, 10, n)
    p[rng.random(n) < 0.1] = np.inf
    p[rng.random(n) < 0.05] = 1.0
    u, v = rng.random((2, n))
    return _result("pointwise_young", n, u * v - psi(p, u) - psi(conjugate_array(p), v), 1e-12)


def prop_pairing_bound(seed, n=10_000):
    rng = case_rng(seed, 16)
    P = _random_exponent(rng, 6, lo=1.0, hi=8, p_inf=0.15)
    Q = P.conjugate()
    F = np.abs(_vectors(rng, n, 6))
    G = np.abs(_vectors(rng, n, 6))
    F /= luxemburg_many(P, F, "psi")[:, None]
    G /= luxemburg_many(Q, G, "psi")[:, None]
    pairing = (P.w * F * G).sum(axis=1)
    spot = holder_pair(P, F[0], G[0])
    extra = [0.0 if spot.bound_ok else np.inf]
    return _result("pairing_bound", n, np.concatenate([pairing - 2.0, extra]), 1e-12)


def prop_norming_exact(seed, n=100):
    out = []
    for k in range(n):
        rng = case_rng(seed, 17, k)
        Q = _random_exponent(rng, 5, lo=1.5, hi=5)
        g = rng.random(5)
        g /= luxemburg(Q, g)
        pr = norming_pair(Q, g)
        fg = pr.f * pr.g
        fp = phi(pr.P.p, pr.f)
        gq = phi(Q.p, pr.g)
        out.append(max(np.max(np.abs(fg - fp)), np.max(np.abs(fg - gq))))
    return _result("norming_exact", n, out, 1e-14)


def prop_projection_defect(seed):
    rng = case_rng(seed, 18)
    m, N = 3, 4
    Q = _random_exponent(rng, m * N, lo=1.5, hi=4)
    pairs = []
    for n in range(N):
        g = np.zeros(m * N)
        g[n * m : (n + 1) * m] = rng.random(m)
        pairs.append(norming_pair(Q, g / luxemburg(Q, g)))
    out = []
    for d in (0.0, 1e-3, 1e-2, 0.1, 0.5):
        bad = list(pairs)
        bad[1] = bad[1].rescaled(1 - d)
        out.append(abs(build_projection(bad).residual - d))
    return _result("projection_defect_linear", 5, out, 1e-12)


def prop_kernel_adjoint(seed, n=100):
    out = []
    for k in range(n):
        rng = case_rng(seed, 19, k)
        a, b = rng.integers(1, 9, 2)
        K = KernelMatrix.of(rng.random((a, b)), rng.uniform(0.1, 2, a), rng.uniform(0.1, 2, b))
        f, g = rng.normal(size=a), rng.normal(size=b)
        out.append(abs(bilinear_defect(K, f, g)))
    return _result("kernel_adjoint", n, out, 1e-12)


PROPERTIES: list[Callable] = [
    prop_ts,
    prop_psi_distance,
    prop_mass_push,
    prop_fenchel_young,
    prop_biconjugation,
    prop_krs_mixture,
    prop_homogeneity,
    prop_monotone,
    prop_pc_norm,
    prop_pminus_convex,
    prop_gauge_equivalence,
    prop_unit_ball,
    prop_block,
    prop_embed_identity,
    prop_pointwise_young,
    prop_pairing_bound,
    prop_norming_exact,
    prop_projection_defect,
    prop_kernel_adjoint,
]


def run_suite(seed: int = 0, timing: bool = False) -> list[PropertyResult]:
    """Run every property in a fixed order. Timings are left at 0 unless
    requested so that reports stay byte-identical across runs."""
    rows: list[PropertyResult] = []
    for prop in PROPERTIES:
        t0 = time.perf_counter()
        res = prop(seed)
        dt = time.perf_counter() - t0 if timing else 0.0
        for r in res if isinstance(res, list) else [res]:
            rows.append(PropertyResult(r.name, r.cases, r.violations, r.worst, r.tol, r.grid, dt))
    return rows
