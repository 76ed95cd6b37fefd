"""Rescaled finite-n kernels at the origin compared with the origin Bessel kernel.

The rescaling is K_hat_n(u, v) = K_n(u / (n psi0), v / (n psi0)) / (n psi0), with
psi0 taken from the equilibrium solver and never fitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import EquilibriumData, conformal_map_f, solve_equilibrium_one_band
from .kernels import correlation_det, eval_origin_bessel, eval_origin_bessel_extended
from .orthopoly import RecurrenceTable, build_table, cd_kernel
from .potential import EnsembleParams, Potential, require_admissible

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_N_LIST",
    "KernelTable",
    "SweepResult",
    "NotationCheck",
    "rescaled_kernel",
    "extended_rescaled",
    "finite_n_correlations",
    "kernel_table",
    "universality_sweep",
    "fit_slope",
    "check_notation_asymptotics",
]

DEFAULT_GRID = tuple(0.25 * k for k in range(1, 11))
DEFAULT_N_LIST = (8, 16, 32, 64)


@dataclass(frozen=True)
class KernelTable:
    grid: np.ndarray
    values: np.ndarray
    n: int
    alpha: float
    psi0: float
    potential: str

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or np.any(g <= 0) or np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing and positive")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (g.size, g.size) or not np.all(np.isfinite(v)):
            raise ValueError("kernel values must be a finite square matrix matching the grid")
        if not np.allclose(v, v.T, rtol=1e-10, atol=1e-14):
            raise ValueError("kernel table must be symmetric")


@dataclass
class SweepResult:
    alpha: float
    n_list: tuple[int, ...]
    grid: np.ndarray
    weighted_errors: np.ndarray
    unweighted_errors: np.ndarray
    slope: float
    unweighted_slope: float
    tables: list[KernelTable] = field(repr=False)
    rows: list[dict] = field(repr=False)

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.weighted_errors) < 0))

    def passed(self, window=(-1.3, -0.7)) -> bool:
        return self.strictly_decreasing and window[0] <= self.slope <= window[1]

    def summary(self) -> dict:
        return {
            "alpha": self.alpha,
            "n_list": list(self.n_list),
            "weighted_errors": [float(v) for v in self.weighted_errors],
            "unweighted_errors": [float(v) for v in self.unweighted_errors],
            "slope": self.slope,
            "unweighted_slope": self.unweighted_slope,
            "strictly_decreasing": self.strictly_decreasing,
            "passed": self.passed(),
        }


def _scale(t: RecurrenceTable, eq: EquilibriumData) -> float:
    return t.ensemble.n * eq.psi0


def _rescale(t, eq, u, v):
    s = _scale(t, eq)
    x = np.asarray(u, dtype=float) / s
    y = np.asarray(v, dtype=float) / s
    lo, hi = eq.left, eq.right
    if np.any((x <= lo) | (x >= hi) | (y <= lo) | (y >= hi)):
        raise ValueError("rescaled point escapes the support; n is too small for the requested u")
    return s, x, y


def rescaled_kernel(t: RecurrenceTable, eq: EquilibriumData, u, v):
    """K_n(u/(n psi0), v/(n psi0)) / (n psi0) for u, v > 0."""
    if np.any(np.asarray(u) <= 0) or np.any(np.asarray(v) <= 0):
        raise ValueError("rescaled_kernel takes u, v > 0; use extended_rescaled for signed arguments")
    s, x, y = _rescale(t, eq, u, v)
    return cd_kernel(t, x, y) / s


def extended_rescaled(t: RecurrenceTable, eq: EquilibriumData, u, v):
    """|u|^-alpha |v|^-alpha K_hat_n(u, v) for nonzero real u, v of either sign."""
    uu, vv = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if np.any(uu == 0) or np.any(vv == 0):
        raise ValueError("extended kernel needs u, v != 0")
    s, x, y = _rescale(t, eq, uu, vv)
    a = t.ensemble.alpha
    out = cd_kernel(t, x, y) / s * np.abs(uu) ** (-a) * np.abs(vv) ** (-a)
    return float(out) if np.ndim(out) == 0 else out


def finite_n_correlations(t: RecurrenceTable, points) -> float:
    """m-point correlation det(K_n(y_i, y_j)) at unscaled points."""
    y = np.asarray(points, dtype=float).ravel()
    if y.size == 0:
        raise ValueError("need at least one point")
    xx, yy = np.meshgrid(y, y, indexing="ij")
    return correlation_det(cd_kernel(t, xx, yy))


def kernel_table(t: RecurrenceTable, eq: EquilibriumData, grid) -> KernelTable:
    g = np.asarray(grid, dtype=float)
    uu, vv = np.meshgrid(g, g, indexing="ij")
    vals = np.asarray(rescaled_kernel(t, eq, uu, vv), dtype=float)
    vals = 0.5 * (vals + vals.T)
    return KernelTable(
        grid=g, values=vals, n=t.ensemble.n, alpha=t.ensemble.alpha, psi0=eq.psi0, potential=t.potential.describe()
    )


def fit_slope(n_list, errors) -> float:
    """Least-squares slope of log(error) against log(n)."""
    return float(np.polyfit(np.log(np.asarray(n_list, dtype=float)), np.log(np.asarray(errors, dtype=float)), 1)[0])


def universality_sweep(
    p: Potential,
    alpha: float,
    n_list=DEFAULT_N_LIST,
    grid=DEFAULT_GRID,
    eq: EquilibriumData | None = None,
    table_options: dict | None = None,
) -> SweepResult:
    """Weighted error E(n) = max |K_hat_n - J_alpha| / (u^alpha v^alpha) over grid pairs, with its log-log slope."""
    n_list = tuple(int(n) for n in n_list)
    if list(n_list) != sorted(n_list) or len(set(n_list)) != len(n_list):
        raise ValueError("n_list must be strictly ascending")
    g = np.asarray(grid, dtype=float)
    if np.any(g <= 0):
        raise ValueError("grid must lie in (0, inf)")
    require_admissible(p, EnsembleParams(alpha, n_list[0]))
    eq = solve_equilibrium_one_band(p) if eq is None else eq
    uu, vv = np.meshgrid(g, g, indexing="ij")
    limit = np.asarray(eval_origin_bessel(alpha, uu, vv), dtype=float)
    weight = uu**alpha * vv**alpha

    weighted, plain, tables, rows = [], [], [], []
    for n in n_list:
        t = build_table(p, EnsembleParams(alpha, n), **(table_options or {}))
        tab = kernel_table(t, eq, g)
        err = np.abs(tab.values - limit)
        weighted.append(float(np.max(err / weight)))
        plain.append(float(np.max(err)))
        tables.append(tab)
        for i in range(g.size):
            for j in range(g.size):
                rows.append(
                    {
                        "n": n,
                        "u": g[i],
                        "v": g[j],
                        "khat": tab.values[i, j],
                        "limit": limit[i, j],
                        "abs_err": err[i, j],
                        "weighted_err": err[i, j] / weight[i, j],
                    }
                )
    return SweepResult(
        alpha=float(alpha),
        n_list=n_list,
        grid=g,
        weighted_errors=np.array(weighted),
        unweighted_errors=np.array(plain),
        slope=fit_slope(n_list, weighted),
        unweighted_slope=fit_slope(n_list, plain),
        tables=tables,
        rows=rows,
    )


@dataclass(frozen=True)
class NotationCheck:
    n_list: tuple[int, ...]
    constants: np.ndarray  # max over u of n |n_u - pi u| / u^2, per n
    points_used: tuple[int, ...]

    @property
    def spread(self) -> float:
        """Ratio of the largest to the smallest fitted constant."""
        return float(np.max(self.constants) / np.min(self.constants))


def check_notation_asymptotics(eq: EquilibriumData, n_list=DEFAULT_N_LIST, grid=DEFAULT_GRID) -> NotationCheck:
    """n_u = n f(u/(n psi0)) approaches pi u with error C u^2 / n; returns C for each n.

    Grid points whose rescaled location leaves the local disk are skipped.
    """
    g = np.asarray(grid, dtype=float)
    consts, used = [], []
    for n in n_list:
        s = n * eq.psi0
        inside = g[g / s < eq.delta]
        if inside.size == 0:
            raise ValueError(f"no grid point inside the local disk at n={n}")
        nu = np.array([n * conformal_map_f(eq, complex(u / s, 0.0)).real for u in inside])
        consts.append(float(np.max(n * np.abs(nu - math.pi * inside) / inside**2)))
        used.append(int(inside.size))
    return NotationCheck(n_list=tuple(n_list), constants=np.array(consts), points_used=tuple(used))
