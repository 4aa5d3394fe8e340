"""Command-line driver: ``nakano <subcommand> [--input FILE] [--grid KIND:LO:HI:N] ...``.

Exit codes: 0 when every check passes (a verdict of any kind is a result),
1 when a property violation is found, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from .duality import build_projection, holder_pair, norming_pair
from .exponents import Exponent, ExponentDomainError, VarExponent
from .grids import DEFAULT_GRID, parse_grid
from .modular import WeightedVector, attainment, luxemburg, modular
from .orlicz import (
    ExponentMeasure,
    NearZeroSearch,
    PowerPsi,
    conjugate_values,
    decay_diagnostic,
    equivalence_near_zero,
    krs_membership,
    minsupp_sandwich,
    orlicz_from_json,
)
from .sequences import EmbedSearch, block_basis, musielak_embed_check
from .suite import case_rng, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Malformed or inconsistent user input (exit code 2)."""


def fmt(x: Any) -> str:
    """Render a report cell: 12 significant digits, literal inf."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".12g")
    if isinstance(x, (dict, list, tuple)):
        return json.dumps(_jsonable(x), sort_keys=True, separators=(",", ":"))
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(format(x, ".12g"))
    if isinstance(x, np.integer):
        return int(x)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


class Report:
    """Rows with a fixed header; rendered as CSV or JSON."""

    def __init__(self, header: Sequence[str]):
        self.header = list(header)
        self.rows: list[dict] = []
        self.violation = False

    def add(self, **row):
        missing = set(self.header) - set(row)
        if missing:
            raise KeyError(f"report row lacks {sorted(missing)}")
        self.rows.append(row)

    def render(self, form: str) -> str:
        if form == "json":
            rows = [{k: _jsonable(r[k]) for k in self.header} for r in self.rows]
            return json.dumps(rows, indent=1, sort_keys=False) + "\n"
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(self.header)
        for r in self.rows:
            wr.writerow([fmt(r[k]) for k in self.header])
        return buf.getvalue()


def _load(path: str | None) -> Any:
    if path is None:
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load_or(path: str | None, default: Any) -> Any:
    data = _load(path)
    return default if data is None else data


def _need(obj: Any, key: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"input needs a '{key}' field")
    return obj[key]


def _grid_label(args) -> str:
    return args.grid


# subcommands ---------------------------------------------------------------


def cmd_norm(args, grid) -> Report:
    data = _load(args.input)
    if data is None:
        data = {"exponent": {"atoms": [{"p": 1, "w": 1}, {"p": 2, "w": 1}]}, "vectors": [{"entries": [{"i": 0, "v": 1}, {"i": 1, "v": 1}]}]}
    P = VarExponent.from_json(_need(data, "exponent"))
    vectors = [WeightedVector.from_json(v) for v in _need(data, "vectors")]
    kinds = data.get("kinds", ["phi", "psi"])
    tol = args.tol if args.tol is not None else 1e-14
    rep = Report(["vector", "kind", "norm", "modular_at_unit", "attainment", "tol", "grid"])
    for k, f in enumerate(vectors):
        for kind in kinds:
            if kind not in ("phi", "psi"):
                raise InputError(f"unknown gauge kind {kind!r}")
            norm = luxemburg(P, f, kind, tol)
            if norm == 0:
                rep.add(vector=k, kind=kind, norm=0.0, modular_at_unit=None, attainment="zero", tol=tol, grid="-")
                continue
            x = f.dense(len(P))
            at = float(modular(P, np.abs(x) / norm, kind).value)
            try:
                cls = attainment(P, x, kind).value
            except Exception:  # noqa: BLE001 - reported as a violation row
                cls = "inconsistent"
                rep.violation = True
            rep.add(vector=k, kind=kind, norm=norm, modular_at_unit=at, attainment=cls, tol=tol, grid="-")
    return rep


def _target_for(F, desc: dict | None):
    if desc is not None:
        return orlicz_from_json(desc)
    if isinstance(F, PowerPsi) and F.p.value >= 1:
        return PowerPsi(F.p.conjugate())
    return None


def cmd_conjugate(args, grid) -> Report:
    data = _load_or(args.input, {"function": {"kind": "psi", "p": 2}})
    F = orlicz_from_json(_need(data, "function"))
    target = _target_for(F, data.get("target"))
    tol = args.tol if args.tol is not None else 1e-6
    vals = conjugate_values(F, grid)
    rep = Report(["v", "conjugate", "target", "abs_err", "tol", "grid"])
    for v, c in zip(grid, vals):
        tv = float(target(v)) if target is not None else None
        if tv is None:
            err = None
        elif math.isinf(tv) or math.isinf(c):
            err = 0.0 if (math.isinf(tv) and math.isinf(c)) else math.inf
        else:
            err = abs(c - tv)
        if err is not None and err > tol:
            rep.violation = True
        rep.add(v=v, conjugate=c, target=tv, abs_err=err, tol=tol, grid=_grid_label(args))
    return rep


def _verdict_row(rep: Report, check: str, verdict, tol, grid_label):
    rep.add(check=check, verdict=verdict.kind.value, details=verdict.details, searched=verdict.searched, tol=tol, grid=grid_label)


def cmd_embed(args, grid) -> Report:
    data = _load_or(args.input, {"F": [{"kind": "psi", "p": 2}] * 3, "G": [{"kind": "psi", "p": 1}] * 3})
    F = [orlicz_from_json(d) for d in _need(data, "F")]
    G = [orlicz_from_json(d) for d in _need(data, "G")]
    box = data.get("search", {})
    try:
        search = EmbedSearch(**{k: tuple(v) if isinstance(v, list) else v for k, v in box.items()})
    except TypeError as exc:
        raise InputError(f"bad search box: {exc}") from exc
    if args.tol is not None:
        search = EmbedSearch(search.delta_grid, search.b_grid, search.C_grid, args.tol, search.min_points)
    rep = Report(["check", "verdict", "details", "searched", "tol", "grid"])
    _verdict_row(rep, "musielak_embed", musielak_embed_check(F, G, grid, search), search.a_budget, _grid_label(args))
    return rep


def cmd_block_basis(args, grid) -> Report:
    data = _load(args.input)
    if data is None:
        J = 20
        q = [1 + 1 / j for j in range(1, J + 1)]
        a = [(2.0**-j / (1 - 2.0**-J)) ** (1 / qj) for j, qj in zip(range(1, J + 1), q)]
        data = {"q": q, "a": a, "K": 4}
    bb = block_basis(_need(data, "q"), _need(data, "a"), int(data.get("K", 4)), bool(data.get("auto_scale", False)))
    tol = args.tol if args.tol is not None else 0.0
    t = grid[grid <= 1.0]
    P = bb.P
    rep = Report(["t", "F", "block_spread", "series_err", "tol", "grid"])
    for tv in t:
        vals = [float(modular(P, x.scaled(float(tv))).value) for x in bb.family.blocks]
        spread = max(vals) - min(vals)
        err = abs(vals[0] - float(bb.F(tv)))
        if spread > tol or err > tol:
            rep.violation = True
        rep.add(t=tv, F=vals[0], block_spread=spread, series_err=err, tol=tol, grid=_grid_label(args))
    diag = decay_diagnostic(bb.F, min(bb.F.q), (2, 4, 6))
    if len(set(bb.F.q)) > 1 and not diag.strictly_decreasing:
        rep.violation = True
    return rep


def _random_q(rng, n):
    return VarExponent(tuple(rng.uniform(1.5, 5.0, n)), tuple(rng.uniform(0.2, 2.0, n)))


def cmd_duality(args, grid) -> Report:
    data = _load_or(args.input, {})
    seed = args.seed
    tol = args.tol if args.tol is not None else 1e-9
    rep = Report(["check", "case", "value", "target", "passed", "tol", "grid"])

    def row(check, case, value, target, passed):
        rep.violation |= not passed
        rep.add(check=check, case=case, value=value, target=target, passed=passed, tol=tol, grid="-")

    if "Q" in data:
        Q = VarExponent.from_json(data["Q"])
        gs = [WeightedVector.from_json(g).dense(len(Q)) for g in _need(data, "g")]
    else:
        Q = None
        gs = []
    n_random = int(data.get("random_pairs", 100))
    for k in range(len(gs) or n_random):
        if Q is None:
            rng = case_rng(seed, 101, k)
            Qk = _random_q(rng, 5)
            g = rng.random(5)
            g = g / luxemburg(Qk, g)
        else:
            Qk, g = Q, gs[k]
        pr = norming_pair(Qk, g, tol)
        worst = max(abs(pr.pairing - 1), abs(pr.rho_P - 1), abs(pr.rho_Q - 1))
        row("norming_pair", k, worst, 0.0, worst <= tol)

    rng = case_rng(seed, 102)
    P = VarExponent(tuple(rng.uniform(1.0, 8.0, 6)), tuple(rng.uniform(0.2, 2.0, 6)))
    worst_pair = -math.inf
    for k in range(int(data.get("holder_cases", 200))):
        r = case_rng(seed, 103, k)
        f, g = np.abs(r.normal(size=6)), np.abs(r.normal(size=6))
        f /= luxemburg(P, f, "psi")
        g /= luxemburg(P.conjugate(), g, "psi")
        h = holder_pair(P, f, g)
        worst_pair = max(worst_pair, h.pairing)
        if h.bound_ok is False:
            row("holder_bound", k, h.pairing, 2.0, False)
    row("holder_bound_max", "all", worst_pair, 2.0, worst_pair <= 2 + 1e-12)

    m, N = 4, int(data.get("projection_pairs", 8))
    rng = case_rng(seed, 104)
    Qp = _random_q(rng, m * N)
    pairs = []
    for n in range(N):
        g = np.zeros(m * N)
        g[n * m : (n + 1) * m] = rng.random(m)
        pairs.append(norming_pair(Qp, g / luxemburg(Qp, g), tol))
    res = build_projection(pairs).residual
    row("projection_residual", N, res, 0.0, res <= 1e-10)
    bad = list(pairs[:3])
    bad[1] = bad[1].rescaled(0.9)
    res = build_projection(bad).residual
    row("projection_negative_control", 3, res, 0.1, abs(res - 0.1) <= 1e-12)
    return rep


def cmd_classify(args, grid) -> Report:
    data = _load_or(args.input, {"task": "equivalence", "F": {"kind": "psi", "p": 2.5}, "G": {"kind": "psi", "p": 2}})
    task = _need(data, "task")
    tol = args.tol
    label = _grid_label(args)
    if task == "sandwich":
        atoms = _need(data, "mu")
        mu = ExponentMeasure(tuple(a["p"] for a in atoms), tuple(a["w"] for a in atoms))
        g = grid[(grid >= 0) & (grid <= 1)]
        res = minsupp_sandwich(mu, Exponent(_need(data, "s")), g, tol if tol is not None else 1e-13)
        rep = Report(["lambda", "nu", "max_violation", "holds", "tol", "grid"])
        rep.add(**{"lambda": res.lam}, nu=res.nu.to_json(), max_violation=res.max_violation, holds=res.holds, tol=res.tol, grid=label)
        rep.violation = not res.holds
        return rep
    if task == "krs":
        phi_fn = orlicz_from_json(_need(data, "phi"))
        g = np.concatenate([[0.0], grid[(grid > 0) & (grid <= 1)]])
        res = krs_membership(phi_fn, _need(data, "r"), _need(data, "s"), g, rtol=tol if tol is not None else 1e-12)
        rep = Report(["condition", "points", "margin", "passed", "tol", "grid"])
        for v in res.violations:
            rep.add(condition=v.condition, points=list(v.points), margin=v.margin, passed=False, tol=tol or 1e-12, grid=label)
        if res.passed:
            rep.add(condition="all", points=[], margin=0.0, passed=True, tol=tol or 1e-12, grid=label)
        return rep
    if task == "equivalence":
        F = orlicz_from_json(_need(data, "F"))
        G = orlicz_from_json(_need(data, "G"))
        box = data.get("search", {})
        try:
            search = NearZeroSearch(grid=grid[grid > 0], **{k: tuple(v) if isinstance(v, list) else v for k, v in box.items()})
        except TypeError as exc:
            raise InputError(f"bad search box: {exc}") from exc
        rep = Report(["check", "verdict", "details", "searched", "tol", "grid"])
        _verdict_row(rep, "near_zero_equivalence", equivalence_near_zero(F, G, search), 1e-12, label)
        return rep
    raise InputError(f"unknown classify task {task!r} (expected sandwich, krs or equivalence)")


def cmd_props(args, grid) -> Report:
    rep = Report(["property", "cases", "violations", "worst_excess", "passed", "tol", "grid"])
    for r in run_suite(args.seed):
        rep.violation |= not r.passed
        rep.add(property=r.name, cases=r.cases, violations=r.violations, worst_excess=r.worst, passed=r.passed, tol=r.tol, grid=r.grid)
    return rep


COMMANDS = {
    "norm": (cmd_norm, "Luxemburg gauges and attainment of vectors"),
    "conjugate": (cmd_conjugate, "tabulate a Fenchel conjugate against its analytic target"),
    "embed": (cmd_embed, "Musielak embedding check between two families"),
    "block-basis": (cmd_block_basis, "build and verify a block basis over a Cantor-paired exponent"),
    "duality": (cmd_duality, "norming pairs, Hölder bound and projection residuals"),
    "classify": (cmd_classify, "minimal-support sandwich, K_{r,s} report or near-zero equivalence"),
    "props": (cmd_props, "run the seeded invariant suite"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nakano", description="Variable exponent sequence space experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="JSON input file")
        p.add_argument("--grid", default=DEFAULT_GRID, help="grid descriptor kind:lo:hi:n (default %(default)s)")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--seed", type=int, default=0, help="root seed for randomized cases")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed < 0:
        print("error: --seed must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        grid = parse_grid(args.grid)
        report = COMMANDS[args.command][0](args, grid)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError, ExponentDomainError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if report.violation else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
