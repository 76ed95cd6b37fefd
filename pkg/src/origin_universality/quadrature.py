"""Composite Gauss-Legendre rules shared by the equilibrium and Szego modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gauss_legendre", "mapped_rule", "graded_rule"]


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def mapped_rule(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def _geometric_breaks(lo: float, hi: float, toward_lo: bool, ratio: float, levels: int):
    """Breakpoints of [lo, hi] shrinking geometrically toward one end."""
    length = hi - lo
    fractions = ratio ** np.arange(levels + 1)
    if toward_lo:
        return np.concatenate(([lo], lo + length * fractions[::-1]))
    return np.concatenate((hi - length * fractions, [hi]))


def graded_rule(
    a: float,
    b: float,
    singular=(),
    ratio: float = 0.15,
    levels: int = 12,
    order: int = 16,
    base: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on [a, b] refined geometrically toward interior points.

    Each point of ``singular`` lying in (a, b) becomes a breakpoint, and every
    sub-interval adjacent to such a point is split into panels whose lengths
    shrink by ``ratio`` toward it.  Endpoint singularities are left to the
    caller (they are normally removed by a substitution).  ``base`` uniform
    panels are laid down before the grading.
    """
    pts = sorted(float(s) for s in singular if a < s < b)
    clearance = 1e-3 * (b - a)
    uniform = [u for u in np.linspace(a, b, base + 1)[1:-1] if all(abs(u - p) > clearance for p in pts)]
    edges = sorted({a, b, *pts, *(float(u) for u in uniform)})
    marked = {p for p in pts}
    breaks = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        left, right = lo in marked, hi in marked
        if left and right:
            mid = 0.5 * (lo + hi)
            seg = np.concatenate(
                (
                    _geometric_breaks(lo, mid, True, ratio, levels)[:-1],
                    _geometric_breaks(mid, hi, False, ratio, levels),
                )
            )
        elif left:
            seg = _geometric_breaks(lo, hi, True, ratio, levels)
        elif right:
            seg = _geometric_breaks(lo, hi, False, ratio, levels)
        else:
            seg = np.array([lo, hi])
        breaks.append(seg if not breaks else seg[1:])
    br = np.concatenate(breaks)
    x0, w0 = gauss_legendre(order)
    lo, hi = br[:-1], br[1:]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (lo + hi))[:, None] + half[:, None] * x0[None, :]
    weights = half[:, None] * w0[None, :]
    return nodes.ravel(), weights.ravel()
