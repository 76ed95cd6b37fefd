"""Command-line front end.

    origin-universality <command> [--config PATH] [--out DIR] [--seed U64] [--n-list 8,16] [--alpha A]

Commands: equilibrium, universality, szego, parametrix, mcmc, kernel-table.
Exit codes: 0 all thresholds met, 1 a threshold failed, 2 invalid configuration,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import plotting
from .config import ConfigError, grid_values, resolve_config
from .equilibrium import (
    EquilibriumError,
    SupportBands,
    check_variational,
    eval_density,
    solve_equilibrium_one_band,
)
from .kernels import eval_origin_bessel
from .orthopoly import QuadratureError, build_table
from .output import config_hash, write_csv, write_json, write_metadata
from .parametrix import (
    UnsupportedConfiguration,
    check_matching,
    psi_cyclic_residual,
    psi_jump_residual,
    psi_model,
)
from .potential import AdmissibilityError, EnsembleParams, Potential
from .sampler import AcceptanceWarning, McmcConfig, default_proposal_scale, run_chains
from .szego import SzegoError, check_szego, solve_xi
from .universality import kernel_table, universality_sweep

__all__ = ["main", "build_parser", "COMMANDS", "EXIT_OK", "EXIT_THRESHOLD", "EXIT_CONFIG", "EXIT_NUMERIC"]

EXIT_OK, EXIT_THRESHOLD, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

THRESHOLDS = {
    "variational_residual": 1e-8,
    "slope_window": (-1.3, -0.7),
    "szego_jump": 1e-8,
    "szego_linear": 1e-10,
    "szego_variation": 2.0,
    "psi_residual": 1e-10,
    "matching_ratio": (1.5, 2.6),
    "ks_distance": 0.05,
    "depletion": 0.2,
}


class _Run:
    """Collects files and checks for one command; writes happen in ``finish``."""

    def __init__(self, command: str, cfg: dict):
        self.command = command
        self.cfg = cfg
        hashed = {k: v for k, v in cfg.items() if k not in ("out", "workers")}
        self.digest = config_hash({"command": command, **hashed})
        self.out = Path(cfg["out"])
        self.pending = []
        self.checks = {}
        self.metrics = {}

    def csv(self, name, columns, rows, comments=()):
        self.pending.append(("csv", name, (columns, rows, comments)))

    def plot(self, name, fn, *args, **kw):
        self.pending.append(("png", name, (fn, args, kw)))

    def check(self, name: str, ok: bool, value):
        self.checks[name] = bool(ok)
        self.metrics[name] = value

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def finish(self, argv) -> int:
        self.out.mkdir(parents=True, exist_ok=True)
        files = []
        for kind, name, payload in self.pending:
            path = self.out / f"{self.command}_{name}"
            if kind == "csv":
                columns, rows, comments = payload
                seed_note = [f"command={self.command}", f"seed={self.cfg['seed']}"]
                files.append(write_csv(path, self.digest, columns, rows, seed_note + list(comments)))
            else:
                fn, args, kw = payload
                files.append(fn(path, *args, **kw))
        failing = sorted(k for k, ok in self.checks.items() if not ok)
        summary = {
            "command": self.command,
            "seed": self.cfg["seed"],
            "passed": self.passed,
            "failing_metrics": failing,
            "checks": self.checks,
            "metrics": self.metrics,
            "config": {k: v for k, v in self.cfg.items() if k != "out"},
        }
        files.append(write_json(self.out / f"{self.command}_summary.json", self.digest, summary))
        write_metadata(self.out / f"{self.command}_metadata.json", self.digest, self.command, argv, files)
        for name in failing:
            print(f"threshold failed: {name} = {self.metrics[name]}", file=sys.stderr)
        print(f"{self.command}: {'pass' if self.passed else 'FAIL'} ({self.out})")
        return EXIT_OK if self.passed else EXIT_THRESHOLD


def _potential(cfg) -> Potential:
    return Potential(tuple(cfg["potential"]))


def _table_options(cfg) -> dict:
    q = cfg["quadrature"]
    return {"order": int(q["order"]), "max_panels": int(q["max_panels"]), "tol": float(q["tol"])}


# ---------------------------------------------------------------------------
# commands


def cmd_equilibrium(cfg: dict) -> _Run:
    run = _Run("equilibrium", cfg)
    p = _potential(cfg)
    eq = solve_equilibrium_one_band(p)
    opts = cfg["equilibrium"]
    lo, hi = eq.left, eq.right
    x = np.linspace(lo, hi, int(opts["samples"]))
    psi = np.asarray(eval_density(eq, x))
    inside = np.linspace(lo, hi, int(opts["probes"]) + 2)[1:-1]
    k = np.arange(1, int(opts["outside_probes"]) + 1) / int(opts["outside_probes"])
    outside = np.concatenate((lo - eq.radius * k, hi + eq.radius * k))
    rep = check_variational(eq, p, inside, outside)

    run.csv("endpoints.csv", ["index", "endpoint"], [(0, lo), (1, hi)])
    run.csv("density.csv", ["x", "psi"], zip(x, psi))
    run.csv(
        "variational.csv",
        ["x", "kind", "value"],
        [(v, "equality_residual", r) for v, r in zip(inside, rep.equality_residuals)]
        + [(v, "outside_margin", m) for v, m in zip(outside, rep.outside_margins)],
    )
    run.plot("density.png", plotting.plot_density, x, psi, [lo, hi])
    run.metrics.update(eq.summary())
    run.check("variational_residual", rep.max_equality_residual <= THRESHOLDS["variational_residual"], rep.max_equality_residual)
    run.check("outside_margin_positive", rep.min_outside_margin > 0 and not rep.singular, rep.min_outside_margin)
    return run


def cmd_universality(cfg: dict) -> _Run:
    run = _Run("universality", cfg)
    p = _potential(cfg)
    grid = grid_values(cfg["grid"])
    eq = solve_equilibrium_one_band(p)
    sweep = universality_sweep(p, cfg["alpha"], cfg["n_list"], grid, eq=eq, table_options=_table_options(cfg))
    cols = ["n", "u", "v", "khat", "limit", "abs_err", "weighted_err"]
    run.csv("kernel_errors.csv", cols, sweep.rows)
    run.csv(
        "decay.csv",
        ["n", "weighted_err", "unweighted_err"],
        zip(sweep.n_list, sweep.weighted_errors, sweep.unweighted_errors),
    )
    run.plot("decay.png", plotting.plot_error_decay, sweep.n_list, sweep.weighted_errors, sweep.unweighted_errors, sweep.slope)
    limit_row = np.asarray(eval_origin_bessel(cfg["alpha"], grid[0], np.asarray(grid)))
    run.plot("kernel_slices.png", plotting.plot_kernel_slices, np.asarray(grid), sweep.tables, limit_row)
    lo, hi = THRESHOLDS["slope_window"]
    run.metrics.update({"psi0": eq.psi0, "unweighted_slope": sweep.unweighted_slope})
    run.check("slope", lo <= sweep.slope <= hi, sweep.slope)
    run.check("strictly_decreasing", sweep.strictly_decreasing, [float(v) for v in sweep.weighted_errors])
    return run


def _szego_support(cfg) -> SupportBands:
    bands = cfg["szego"]["bands"]
    if bands is None:
        eq = solve_equilibrium_one_band(_potential(cfg))
        return eq.support
    return SupportBands(tuple((float(a), float(b)) for a, b in bands))


def cmd_szego(cfg: dict) -> _Run:
    run = _Run("szego", cfg)
    support = _szego_support(cfg)
    alphas = cfg["szego"]["alphas"] or [cfg["alpha"]]
    xi_rows, var_rows = [], []
    for a in alphas:
        sd = solve_xi(support, float(a))
        rep = check_szego(
            sd,
            probes_per_band=int(cfg["szego"]["probes_per_band"]),
            probes_per_gap=int(cfg["szego"]["probes_per_gap"]),
        )
        for j, v in enumerate(sd.xi):
            xi_rows.append((a, j, v))
        for k, m in enumerate(rep.details["m"]):
            var_rows.append((a, m, rep.details["abs_z_minus_alpha_D"][0][k], rep.details["abs_z_minus_alpha_D"][1][k]))
        tag = f"alpha={a:g}"
        run.check(f"{tag}:band_jump", rep.band_jump_residual <= THRESHOLDS["szego_jump"], rep.band_jump_residual)
        run.check(f"{tag}:gap_jump", rep.gap_jump_residual <= THRESHOLDS["szego_jump"], rep.gap_jump_residual)
        run.check(f"{tag}:linear", rep.linear_residual <= THRESHOLDS["szego_linear"], rep.linear_residual)
        run.check(f"{tag}:variation", rep.bounded_variation <= THRESHOLDS["szego_variation"], rep.bounded_variation)
        run.metrics[f"{tag}:d_infinity"] = [sd.d_infinity.real, sd.d_infinity.imag]
        run.metrics[f"{tag}:d_infinity_crosscheck"] = rep.d_infinity_crosscheck
        run.metrics[f"{tag}:cond_a"] = sd.cond_a
    run.csv("xi.csv", ["alpha", "gap", "xi"], xi_rows)
    run.csv("variation.csv", ["alpha", "m", "upper_right", "upper_left"], var_rows)
    ms = [r[1] for r in var_rows if r[0] == alphas[0]]
    vals = [[r[2] for r in var_rows if r[0] == alphas[0]], [r[3] for r in var_rows if r[0] == alphas[0]]]
    run.plot("variation.png", plotting.plot_szego_variation, ms, vals)
    return run


def cmd_parametrix(cfg: dict) -> _Run:
    run = _Run("parametrix", cfg)
    a = cfg["alpha"]
    radii = [float(r) for r in cfg["parametrix"]["radii"]]
    jump_rows, worst = [], 0.0
    for r in radii:
        for j in range(1, 9):
            res = psi_jump_residual(a, j, r)
            jump_rows.append((j, r, res))
            worst = max(worst, res)
    cyc = max(psi_cyclic_residual(a, cmath.rect(r, math.pi * 1.1)) for r in radii)
    det_err = 0.0
    for r in radii:
        for s in range(8):
            z = cmath.rect(r, (s + 0.5) * math.pi / 4)
            det_err = max(det_err, abs(np.linalg.det(psi_model(a, z)) - 1))
    run.csv("psi_jumps.csv", ["ray", "radius", "residual"], jump_rows)
    run.check("psi_jump", worst <= THRESHOLDS["psi_residual"], worst)
    run.check("psi_cyclic", cyc <= THRESHOLDS["psi_residual"], cyc)
    run.check("psi_det", det_err <= THRESHOLDS["psi_residual"], det_err)

    p = _potential(cfg)
    eq = solve_equilibrium_one_band(p)
    sd = solve_xi(eq.support, a)
    delta = cfg["delta"]
    rep = check_matching(eq, sd, a, cfg["n_list"], delta, count=int(cfg["parametrix"]["count"]))
    run.csv("decay.csv", ["n", "max_residual"], zip(rep.n_list, rep.max_residual), ["norm=max-entry"])
    pts = rep.per_point["points"]
    run.csv(
        "boundary_residuals.csv",
        ["n", "re_z", "im_z", "residual"],
        [(n, x, y, r) for n in rep.n_list for (x, y), r in zip(pts, rep.per_point["residuals"][int(n)])],
    )
    run.plot("decay.png", plotting.plot_matching_decay, rep.n_list, rep.max_residual)
    run.metrics["matching_slope"] = rep.slope
    if rep.ratios:
        lo, hi = THRESHOLDS["matching_ratio"]
        last = rep.ratios[-1]
        run.check("matching_ratio", lo <= last <= hi, last)
    return run


def cmd_mcmc(cfg: dict) -> _Run:
    run = _Run("mcmc", cfg)
    p = _potential(cfg)
    mc = cfg["mcmc"]
    n = int(mc["n_particles"])
    eq = solve_equilibrium_one_band(p)
    scale = mc["proposal_scale"] or default_proposal_scale(eq, n)
    seeds = [(cfg["seed"] + k) % 2**64 for k in range(int(mc["chains"]))]
    configs = [McmcConfig(n, int(mc["sweeps"]), int(mc["burn_in"]), float(scale), s) for s in seeds]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AcceptanceWarning)
        chains = run_chains(p, EnsembleParams(cfg["alpha"], n), configs, eq, bins=int(mc["bins"]), workers=cfg["workers"])
        compare = None
        if mc["compare_alpha"] is not None:
            compare = run_chains(
                p, EnsembleParams(float(mc["compare_alpha"]), n), configs, eq, bins=int(mc["bins"]), workers=cfg["workers"]
            )
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    rows = []
    for c in chains:
        for lo, hi, d in zip(c.bin_edges[:-1], c.bin_edges[1:], c.density):
            rows.append((c.seed, lo, hi, d))
    run.csv("histogram.csv", ["seed", "bin_left", "bin_right", "density"], rows)
    run.csv(
        "chains.csv",
        ["seed", "acceptance_rate", "ks_distance", "recorded", "underflow", "overflow"],
        [(c.seed, c.acceptance_rate, c.ks_distance, c.recorded, c.underflow, c.overflow) for c in chains],
    )
    xs = np.linspace(eq.left, eq.right, 201)
    run.plot(
        "histogram.png",
        plotting.plot_histogram,
        chains[0].bin_edges,
        [chains[0].density] + ([compare[0].density] if compare else []),
        xs,
        np.asarray(eval_density(eq, xs)),
        [f"alpha={cfg['alpha']:g}"] + ([f"alpha={mc['compare_alpha']:g}"] if compare else []),
    )
    ks = float(np.median([c.ks_distance for c in chains]))
    run.metrics["proposal_scale"] = float(scale)
    run.metrics["acceptance_rates"] = [c.acceptance_rate for c in chains]
    run.metrics["acceptance_flagged"] = any(c.acceptance_flagged for c in chains)
    run.check("median_ks", ks <= THRESHOLDS["ks_distance"], ks)
    if compare:
        zero = chains[0].bin_containing(0.0)
        base = float(np.median([c.counts[zero] / c.recorded for c in chains]))
        other = float(np.median([c.counts[zero] / c.recorded for c in compare]))
        depletion = 1.0 - other / base if base > 0 else float("nan")
        run.csv(
            "zero_bin.csv",
            ["seed", "mass_alpha", "mass_compare"],
            [(a.seed, a.counts[zero] / a.recorded, b.counts[zero] / b.recorded) for a, b in zip(chains, compare)],
        )
        run.check("zero_bin_depletion", depletion >= THRESHOLDS["depletion"], depletion)
    return run


def cmd_kernel_table(cfg: dict) -> _Run:
    run = _Run("kernel-table", cfg)
    p = _potential(cfg)
    eq = solve_equilibrium_one_band(p)
    grid = grid_values(cfg["grid"])
    rows = []
    for n in cfg["n_list"]:
        t = build_table(p, EnsembleParams(cfg["alpha"], int(n)), **_table_options(cfg))
        tab = kernel_table(t, eq, grid)
        for i, u in enumerate(tab.grid):
            for j, v in enumerate(tab.grid):
                rows.append((tab.n, u, v, tab.values[i, j]))
    run.csv("values.csv", ["n", "u", "v", "khat"], rows, [f"alpha={cfg['alpha']!r}", f"psi0={eq.psi0!r}"])
    run.metrics["psi0"] = eq.psi0
    return run


COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "universality": cmd_universality,
    "szego": cmd_szego,
    "parametrix": cmd_parametrix,
    "mcmc": cmd_mcmc,
    "kernel-table": cmd_kernel_table,
}


# ---------------------------------------------------------------------------
# argument handling


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="origin-universality", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, default=None, help="YAML, TOML or JSON config file")
        sp.add_argument("--out", default=None, help="output directory (created if missing)")
        sp.add_argument("--seed", type=_u64, default=None)
        sp.add_argument("--n-list", type=_int_list, default=None, help="e.g. 8,16,32,64")
        sp.add_argument("--alpha", type=float, default=None)
    return parser


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    parser.__class__ = _Parser
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for sp in action.choices.values():
            sp.__class__ = _Parser
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args.config, seed=args.seed, n_list=args.n_list, alpha=args.alpha, out=args.out)
    except (_ArgError, ConfigError, AdmissibilityError) as exc:
        print(f"config invalid: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        run = COMMANDS[args.command](cfg)
    except (ConfigError, AdmissibilityError, UnsupportedConfiguration) as exc:
        print(f"config invalid: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EquilibriumError, SzegoError, QuadratureError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config invalid: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run.finish(argv)


if __name__ == "__main__":
    raise SystemExit(main())
