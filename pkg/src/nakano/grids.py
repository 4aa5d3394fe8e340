"""Evaluation grids and their text descriptors (``log:1e-8:1:512``, ``lin:0:1:257``)."""

from __future__ import annotations

import numpy as np

__all__ = ["near_zero_grid", "unit_grid", "parse_grid", "DEFAULT_GRID"]

DEFAULT_GRID = "log:1e-8:1:512"


def near_zero_grid(lo: float = 1e-8, hi: float = 1.0, n: int = 512) -> np.ndarray:
    """Logarithmically spaced points on [lo, hi], endpoints exact."""
    g = np.geomspace(lo, hi, n)
    g[0], g[-1] = lo, hi
    return g


def unit_grid(n: int = 257) -> np.ndarray:
    """{0} together with a log grid on [1e-8, 1]."""
    return np.concatenate([[0.0], near_zero_grid(1e-8, 1.0, n - 1)])


def parse_grid(text: str) -> np.ndarray:
    try:
        kind, lo, hi, n = text.split(":")
        lo_f, hi_f, n_i = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise ValueError(f"grid descriptor {text!r} is not of the form kind:lo:hi:n") from exc
    if n_i < 2 or not lo_f < hi_f:
        raise ValueError(f"grid descriptor {text!r} needs n >= 2 and lo < hi")
    if kind == "log":
        if lo_f <= 0:
            raise ValueError("log grid needs lo > 0")
        return near_zero_grid(lo_f, hi_f, n_i)
    if kind == "lin":
        return np.linspace(lo_f, hi_f, n_i)
    raise ValueError(f"unknown grid kind {kind!r}")
