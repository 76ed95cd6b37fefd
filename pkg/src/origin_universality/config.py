"""Run configuration: a YAML, TOML or JSON file with nested sections plus flag overrides."""

from __future__ import annotations

import copy
import json
import math
from pathlib import Path

from .potential import EnsembleParams, Potential, validate

__all__ = ["ConfigError", "DEFAULTS", "load_config", "resolve_config", "grid_values"]


class ConfigError(ValueError):
    pass


DEFAULTS: dict = {
    "potential": [0.0, 0.0, 1.0],
    "alpha": 0.0,
    "n": 32,
    "n_list": [8, 16, 32, 64],
    "grid": {"start": 0.25, "stop": 2.5, "count": 10},
    "delta": None,
    "seed": 0,
    "out": "results",
    "workers": 1,
    "quadrature": {"order": 40, "max_panels": 256, "tol": 1e-12},
    "equilibrium": {"samples": 201, "probes": 50, "outside_probes": 20},
    "szego": {"bands": None, "alphas": None, "probes_per_band": 12, "probes_per_gap": 5},
    "parametrix": {"count": 96, "radii": [0.5, 5.0]},
    "mcmc": {
        "n_particles": 50,
        "sweeps": 4000,
        "burn_in": 500,
        "proposal_scale": None,
        "chains": 5,
        "bins": 61,
        "compare_alpha": None,
    },
}

_TYPES = {
    "potential": list,
    "alpha": (int, float),
    "n": int,
    "n_list": list,
    "grid": (dict, list),
    "delta": (int, float, type(None)),
    "seed": int,
    "out": str,
    "workers": int,
}


def _read(path: Path) -> dict:
    text = path.read_text()
    suffix = path.suffix.lower()
    try:
        if suffix in (".yaml", ".yml"):
            import yaml

            data = yaml.safe_load(text)
        elif suffix == ".toml":
            import tomli

            data = tomli.loads(text)
        elif suffix == ".json":
            data = json.loads(text)
        else:
            raise ConfigError(f"unsupported config format '{suffix}' (use .yaml, .toml or .json)")
    except ConfigError:
        raise
    except Exception as exc:  # parser errors of any of the three formats
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return data


def _merge(base: dict, override: dict, where: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        name = f"{where}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key '{name}'")
        if isinstance(base[key], dict) and key != "grid":
            if not isinstance(val, dict):
                raise ConfigError(f"'{name}' must be a section")
            out[key] = _merge(base[key], val, f"{name}.")
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULTS)
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return _merge(DEFAULTS, _read(path))


def grid_values(grid) -> list[float]:
    if isinstance(grid, list):
        vals = [float(v) for v in grid]
    else:
        extra = set(grid) - {"start", "stop", "count"}
        if extra:
            raise ConfigError(f"unknown grid keys {sorted(extra)}")
        try:
            start, stop, count = float(grid["start"]), float(grid["stop"]), int(grid["count"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("grid needs start, stop and count") from exc
        if count < 1:
            raise ConfigError("grid count must be positive")
        vals = [start] if count == 1 else [start + (stop - start) * k / (count - 1) for k in range(count)]
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise ConfigError("grid values must be positive and finite")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError("grid must be strictly increasing")
    return vals


def _check(cfg: dict) -> None:
    for key, kind in _TYPES.items():
        if isinstance(cfg[key], bool) or not isinstance(cfg[key], kind):
            raise ConfigError(f"'{key}' has the wrong type")
    try:
        coeffs = [float(c) for c in cfg["potential"]]
    except (TypeError, ValueError) as exc:
        raise ConfigError("potential must be a list of numbers") from exc
    if len(coeffs) < 1:
        raise ConfigError("potential must have coefficients")
    n_list = cfg["n_list"]
    if not n_list or any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in n_list):
        raise ConfigError("n_list must be positive integers")
    if list(n_list) != sorted(set(n_list)):
        raise ConfigError("n_list must be strictly ascending")
    if not 0 <= cfg["seed"] < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    if cfg["workers"] < 1:
        raise ConfigError("workers must be at least 1")
    grid_values(cfg["grid"])
    problems = validate(Potential(tuple(coeffs)), EnsembleParams(float(cfg["alpha"]), max(1, int(cfg["n"]))))
    if problems:
        raise ConfigError("; ".join(problems))
    if cfg["n"] < 1:
        raise ConfigError("n must be a positive integer")
    mc = cfg["mcmc"]
    if not (isinstance(mc["sweeps"], int) and isinstance(mc["burn_in"], int) and mc["sweeps"] > mc["burn_in"] >= 0):
        raise ConfigError("mcmc needs integer sweeps > burn_in >= 0")
    if not isinstance(mc["bins"], int) or mc["bins"] % 2 == 0 or mc["bins"] < 1:
        raise ConfigError("mcmc.bins must be a positive odd integer")
    if mc["proposal_scale"] is not None and not mc["proposal_scale"] > 0:
        raise ConfigError("mcmc.proposal_scale must be positive")
    if not isinstance(mc["chains"], int) or mc["chains"] < 1:
        raise ConfigError("mcmc.chains must be a positive integer")
    if mc["compare_alpha"] is not None and not mc["compare_alpha"] > -0.5:
        raise ConfigError("mcmc.compare_alpha: alpha must exceed -1/2")
    bands = cfg["szego"]["bands"]
    if bands is not None:
        try:
            pairs = [(float(a), float(b)) for a, b in bands]
        except (TypeError, ValueError) as exc:
            raise ConfigError("szego.bands must be a list of [lo, hi] pairs") from exc
        if any(b <= a for a, b in pairs) or any(pairs[k][1] >= pairs[k + 1][0] for k in range(len(pairs) - 1)):
            raise ConfigError("szego.bands must be disjoint increasing intervals")


def resolve_config(path=None, *, seed=None, n_list=None, alpha=None, out=None) -> dict:
    """Load, apply flag overrides and validate before any computation."""
    cfg = load_config(path)
    if seed is not None:
        cfg["seed"] = seed
    if n_list is not None:
        cfg["n_list"] = list(n_list)
    if alpha is not None:
        cfg["alpha"] = alpha
    if out is not None:
        cfg["out"] = out
    _check(cfg)
    cfg["potential"] = [float(c) for c in cfg["potential"]]
    cfg["alpha"] = float(cfg["alpha"])
    return cfg
