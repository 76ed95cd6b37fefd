"""PNG figures written next to the CSV outputs.

All figures use the non-interactive Agg backend and a small shared style so that
repeated runs give the same pictures.
"""

from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "STYLE",
    "plot_density",
    "plot_error_decay",
    "plot_kernel_slices",
    "plot_szego_variation",
    "plot_matching_decay",
    "plot_histogram",
]

_GOLDEN = (5**0.5 - 1) / 2
STYLE = {
    "figure.figsize": (5.0, 5.0 * _GOLDEN),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.prop_cycle": matplotlib.cycler(color=["#08589e", "#d95f02", "#1b9e77", "#7570b3", "#e7298a"]),
}


@contextmanager
def _figure(path: Path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            yield fig, ax
            fig.tight_layout()
            # no Software/date entries, so the file depends only on the data
            fig.savefig(path, metadata={"Software": None})
        finally:
            plt.close(fig)


def plot_density(path, x, psi, endpoints=None) -> Path:
    path = Path(path)
    with _figure(path) as (_, ax):
        ax.plot(x, psi, label="equilibrium density")
        for e in endpoints or ():
            ax.axvline(e, color="0.5", linestyle=":", linewidth=0.8)
        ax.set_xlabel("x")
        ax.set_ylabel("psi(x)")
        ax.legend()
    return path


def plot_error_decay(path, n_list, weighted, unweighted=None, slope=None) -> Path:
    """Log-log decay of the sweep error with a 1/n reference line."""
    path = Path(path)
    n = np.asarray(n_list, dtype=float)
    with _figure(path) as (_, ax):
        label = "weighted error" if slope is None else f"weighted error (slope {slope:.2f})"
        ax.loglog(n, weighted, "o-", label=label)
        if unweighted is not None:
            ax.loglog(n, unweighted, "s--", label="unweighted error")
        ref = weighted[0] * n[0] / n
        ax.loglog(n, ref, color="0.6", linestyle=":", label="1/n reference")
        ax.set_xlabel("n")
        ax.set_ylabel("max error over grid")
        ax.legend()
    return path


def plot_kernel_slices(path, grid, tables, limit_row, row_index=0) -> Path:
    """One row u = grid[row_index] of each rescaled kernel against the limit kernel."""
    path = Path(path)
    with _figure(path) as (_, ax):
        for tab in tables:
            ax.plot(grid, tab.values[row_index], marker=".", label=f"n={tab.n}")
        ax.plot(grid, limit_row, color="k", linewidth=1.6, label="limit kernel")
        ax.set_xlabel("v")
        ax.set_ylabel(f"kernel at u={grid[row_index]:g}")
        ax.legend()
    return path


def plot_szego_variation(path, m, values) -> Path:
    path = Path(path)
    with _figure(path) as (_, ax):
        for k, row in enumerate(values):
            ax.semilogy(m, row, "o-", label="upper right ray" if k == 0 else "upper left ray")
        ax.set_xlabel("m  (|z| ~ 2^-m)")
        ax.set_ylabel("|z^-alpha D(z)|")
        ax.legend()
    return path


def plot_matching_decay(path, n_list, residuals) -> Path:
    path = Path(path)
    n = np.asarray(n_list, dtype=float)
    r = np.maximum(np.asarray(residuals, dtype=float), 1e-300)
    with _figure(path) as (_, ax):
        ax.loglog(n, r, "o-", label="max |P P_inf^-1 - I|")
        ax.loglog(n, r[0] * n[0] / n, color="0.6", linestyle=":", label="1/n reference")
        ax.set_xlabel("n")
        ax.set_ylabel("boundary residual")
        ax.legend()
    return path


def plot_histogram(path, edges, densities, x, psi, labels=None) -> Path:
    """Sample densities (one step curve per chain) over the equilibrium density."""
    path = Path(path)
    with _figure(path) as (_, ax):
        for k, d in enumerate(densities):
            lab = labels[k] if labels else None
            ax.stairs(d, edges, alpha=0.7, label=lab)
        ax.plot(x, psi, color="k", label="equilibrium density")
        ax.set_xlabel("x")
        ax.set_ylabel("density")
        ax.legend()
    return path
