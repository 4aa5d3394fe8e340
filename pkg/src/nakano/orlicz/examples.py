"""Named example families: the log-perturbed power identity and lacunary
power series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import gamma

from .functions import LacunarySeries
from .quadrature import QuadratureError, integrate

__all__ = [
    "LogIdentityResult",
    "log_perturbed_identity",
    "log_identity_asymptote",
    "lacunary_build",
    "decay_diagnostic",
    "DecayDiagnostic",
]


@dataclass(frozen=True)
class LogIdentityResult:
    """C(t) on ``t`` by the substituted integral and by the direct p-integral."""

    t: np.ndarray
    c_substituted: np.ndarray
    c_direct: np.ndarray

    @property
    def max_disagreement(self) -> float:
        return float(np.max(np.abs(self.c_substituted - self.c_direct)))

    @property
    def values(self) -> list[float]:
        return self.c_substituted.tolist()

    def within(self, lo: float, hi: float) -> bool:
        c = self.c_substituted
        return bool(np.all((c > lo) & (c < hi)))


def _c_substituted(r: float, a: float, s: float, t: float, abs_tol: float) -> float:
    # C = a/(s−r)^a · L^{1−2a} ∫_0^{(s−r)L} v^{a−1} e^{−v}/(v + rL) dv, L = −log t
    L = -math.log(t)
    V = (s - r) * L
    if a < 1:
        # v = w^{1/a} removes the v^{a−1} singularity
        def f(w):
            v = w ** (1.0 / a)
            return np.exp(-v) / (v + r * L) / a

        upper = V**a
    else:

        def f(v):
            return v ** (a - 1) * np.exp(-v) / (v + r * L)

        upper = V
    # split where e^{−v} has mostly decayed so the adaptive scheme sees the bulk
    knot = min(upper, 40.0 ** (a if a < 1 else 1.0))
    inner = integrate(f, 0.0, knot, abs_tol=abs_tol)[0]
    if knot < upper:
        inner += integrate(f, knot, upper, abs_tol=abs_tol)[0]
    return a / (s - r) ** a * L ** (1 - 2 * a) * inner


def _c_direct(r: float, a: float, s: float, t: float, abs_tol: float) -> float:
    # ∫_r^s (t^p/p)·a(p−r)^{a−1}/(s−r)^a dp ÷ t^r(−log t)^a, with the
    # algebraic endpoint weight handled by QUADPACK
    L = -math.log(t)
    val, err = sp_integrate.quad(
        lambda p: math.exp(-(p - r) * L) / p,
        r,
        s,
        weight="alg",
        wvar=(a - 1.0, 0.0),
        epsabs=abs_tol * 1e-2,
        epsrel=1e-13,
        limit=500,
    )
    if not math.isfinite(val) or err > abs_tol:
        raise QuadratureError("direct p-integral did not converge", val, err)
    return a / (s - r) ** a * val / L**a


def log_perturbed_identity(r: float, a: float, s: float, t_grid, abs_tol: float = 1e-10) -> LogIdentityResult:
    """Constant C(t) in ∫_r^s Ψ_p(t) dμ(p) = C(t)·t^r(−log t)^a for the measure
    dμ = a(p−r)^{a−1}/(s−r)^a dp on [r, s], computed two independent ways."""
    if not (0 < r < s < math.inf) or not a > 0:
        raise ValueError("need 0 < r < s < inf and a > 0")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(t <= 0) or np.any(t > math.exp(-1) * (1 + 1e-15)):
        raise ValueError("t_grid must lie in (0, 1/e]")
    c1 = np.array([_c_substituted(r, a, s, float(x), abs_tol) for x in t])
    c2 = np.array([_c_direct(r, a, s, float(x), abs_tol) for x in t])
    return LogIdentityResult(t, c1, c2)


def log_identity_asymptote(r: float, a: float, s: float) -> float:
    """K with C(t)·(−log t)^{2a} → K as t → 0⁺; equals aΓ(a)/(r(s−r)^a)."""
    return a * gamma(a) / (r * (s - r) ** a)


def _materialize(seq, n: int) -> list[float]:
    if callable(seq):
        return [float(seq(k)) for k in range(1, n + 1)]
    return [float(x) for x in seq[:n]]


def lacunary_build(
    r: Sequence[float] | Callable[[int], float],
    b: Sequence[float] | Callable[[int], float],
    J: int | None = None,
    r_limit: float | None = None,
    tail_target: float = 1e-12,
    max_terms: int = 100_000,
) -> LacunarySeries:
    """Truncated Σ b_n t^{r_n} with r_n strictly decreasing and Σ b_n = 1.

    ``r`` and ``b`` may be sequences or callables of the 1-based index. The
    tail weight is 1 − Σ_{n≤J} b_n; without ``J`` the smallest J bringing it
    below ``tail_target`` is used.
    """
    if J is None:
        if callable(b):
            acc, J = [], 0
            while True:
                J += 1
                acc.append(float(b(J)))
                if 1.0 - math.fsum(acc) < tail_target:
                    break
                if J >= max_terms:
                    raise ValueError(f"tail weight still >= {tail_target} after {max_terms} terms")
        else:
            J = len(b)
    rs, bs = _materialize(r, J), _materialize(b, J)
    if len(rs) != J or len(bs) != J:
        raise ValueError(f"need at least J = {J} terms of r and b")
    if any(x1 <= x2 for x1, x2 in zip(rs, rs[1:])):
        raise ValueError("lacunary exponents r_n must be strictly decreasing")
    total = math.fsum(bs)
    if total > 1.0 + 1e-12:
        raise ValueError(f"partial sum of b_n is {total!r} > 1")
    tail = max(0.0, 1.0 - total)
    return LacunarySeries(tuple(rs), tuple(bs), tail, r_limit if r_limit is not None else rs[-1])


@dataclass(frozen=True)
class DecayDiagnostic:
    t: np.ndarray
    ratio: np.ndarray

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.ratio) < 0))


def decay_diagnostic(F: Callable, r: float, ks: Sequence[int] = (2, 3, 4, 5, 6)) -> DecayDiagnostic:
    """F(10^{−k})/10^{−kr} along ``ks``; strict decrease signals F ∉ O(t^r)."""
    t = 10.0 ** (-np.asarray(ks, dtype=float))
    return DecayDiagnostic(t, np.asarray(F(t), dtype=float) / t**r)
