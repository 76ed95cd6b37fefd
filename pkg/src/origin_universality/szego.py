"""Szego function of |x|^(2 alpha) on a union of bands.

With bands [p_0, q_0] < ... < [p_N, q_N] and gaps [q_j, p_{j+1}],

    Phi(z) = R^{1/2}(z) ( (1/2 pi i) int_J 2 alpha log|x| / R_+^{1/2}(x) dx/(x - z)
                          + sum_j xi_j int_{gap j} 1/R^{1/2}(x) dx/(x - z) ),

and D = exp(Phi).  The constants xi_j make Phi bounded at infinity.

Every band or gap integral is computed in the angle variable
x = m + h cos(theta), which turns dx / sqrt((x - p)(q - x)) into d theta.
The remaining factor is smooth on the open interval, apart from log|x| at
the origin, which is treated with geometrically graded panels.  For points
close to an interval the Cauchy integral is split as

    int F(x)/(x - z) d theta = int (F(x) - F(x0))/(x - z) d theta + F(x0) C(z),

with x0 = Re z and the closed form C(z) = -pi / (sqrt(z - p) sqrt(z - q)).
Boundary values on the real axis are requested with a signed-zero
imaginary part, which the principal square roots respect.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import SupportBands, sqrt_r
from .quadrature import graded_rule

__all__ = [
    "SzegoData",
    "SzegoError",
    "SzegoReport",
    "band_gap_moments",
    "solve_xi",
    "eval_phi_szego",
    "eval_D",
    "d_infinity",
    "check_szego",
]

_ORDER = 24
_BASE = 4


class SzegoError(RuntimeError):
    pass


@dataclass(frozen=True)
class _Segment:
    """A band or gap in the angle variable, with the smooth part of 1/R^{1/2}."""

    lo: float
    hi: float
    is_band: bool
    index: int
    others: tuple[float, ...]  # endpoints not belonging to this interval
    phase: complex  # R_+^{1/2} / (sqrt((x - lo)(hi - x)) prod_other sqrt|x - e|)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def half(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def x_of(self, theta):
        return self.mid + self.half * np.cos(theta)

    def theta_of(self, x: float) -> float:
        return math.acos(max(-1.0, min(1.0, (x - self.mid) / self.half)))

    def inv_root(self, x):
        """sqrt((x - lo)(hi - x)) / R_+^{1/2}(x) on the interval."""
        prod = np.ones_like(np.asarray(x, dtype=float))
        for e in self.others:
            prod = prod * np.sqrt(np.abs(x - e))
        return 1.0 / (self.phase * prod)

    def cauchy_weight(self, z: complex) -> complex:
        """int_0^pi d theta / (x(theta) - z)."""
        return -math.pi / (cmath.sqrt(z - self.lo) * cmath.sqrt(z - self.hi))


def _segments(support: SupportBands) -> list[_Segment]:
    ends = support.endpoints
    segs = []
    for j, (lo, hi) in enumerate(support.bands):
        right = sum(1 for e in ends if e > 0.5 * (lo + hi))
        segs.append(
            _Segment(lo, hi, True, j, tuple(e for e in ends if e not in (lo, hi)), 1j**right)
        )
    for j, (lo, hi) in enumerate(support.gaps):
        right = sum(1 for e in ends if e > 0.5 * (lo + hi))
        segs.append(
            _Segment(lo, hi, False, j, tuple(e for e in ends if e not in (lo, hi)), complex((-1) ** (right // 2)))
        )
    return segs


def _rule(seg: _Segment, marks) -> tuple[np.ndarray, np.ndarray]:
    thetas = [seg.theta_of(m) for m in marks if seg.lo < m < seg.hi]
    return graded_rule(0.0, math.pi, thetas, order=_ORDER, base=_BASE)


def _band_density(seg: _Segment, alpha: float, x):
    """(1/2 pi i) 2 alpha log|x| sqrt((x-lo)(hi-x)) / R_+^{1/2}(x)."""
    return (2.0 * alpha / (2j * math.pi)) * np.log(np.abs(x)) * seg.inv_root(x)


@dataclass(frozen=True)
class SzegoData:
    support: SupportBands
    alpha: float
    xi: np.ndarray
    a_matrix: np.ndarray
    rhs: np.ndarray
    cond_a: float
    d_infinity: complex
    segments: list = field(repr=False, default_factory=list)

    def to_record(self) -> dict:
        return {
            "bands": [list(b) for b in self.support.bands],
            "alpha": self.alpha,
            "xi": [float(v) for v in self.xi],
            "cond_a": self.cond_a,
            "d_infinity": [self.d_infinity.real, self.d_infinity.imag],
        }


def _require_origin_inside(support: SupportBands):
    j = support.band_index(0.0)
    if j is None:
        raise SzegoError("0 must lie strictly inside a band")
    lo, hi = support.bands[j]
    if min(-lo, hi) < 1e-12:
        raise SzegoError("0 is too close to a band endpoint")


def band_gap_moments(support: SupportBands, alpha: float, k: int) -> tuple[complex, list[float]]:
    """((1/2 pi i) int_J 2 alpha log|x| x^k / R_+^{1/2} dx, [int_gap x^k / R^{1/2} dx])."""
    _require_origin_inside(support)
    band_total = 0j
    gaps = []
    for seg in _segments(support):
        th, w = _rule(seg, [0.0])
        x = seg.x_of(th)
        if seg.is_band:
            if alpha != 0:
                band_total += complex(np.dot(w, _band_density(seg, alpha, x) * x**k))
        else:
            gaps.append(float(np.dot(w, (seg.inv_root(x) * x**k).real)))
    return band_total, gaps


def solve_xi(support: SupportBands, alpha: float) -> SzegoData:
    """Solve A xi = -rhs for the phase constants and record D_infinity."""
    _require_origin_inside(support)
    N = support.n_gaps
    rows = [band_gap_moments(support, alpha, k) for k in range(N + 1)]
    rhs = np.array([r[0].real for r in rows[:N]])
    a_mat = np.array([r[1] for r in rows[:N]]).reshape(N, N)
    if N:
        cond = float(np.linalg.cond(a_mat))
        if not np.isfinite(cond) or cond > 1e12:
            raise SzegoError("moment matrix A is numerically singular")
        xi = np.linalg.solve(a_mat, -rhs)
    else:
        cond, xi = 1.0, np.zeros(0)
    band_n, gaps_n = rows[N]
    m_n = band_n + float(np.dot(xi, gaps_n)) if N else band_n
    return SzegoData(
        support=support,
        alpha=float(alpha),
        xi=xi,
        a_matrix=a_mat,
        rhs=rhs,
        cond_a=cond,
        d_infinity=complex(cmath.exp(-m_n)),
        segments=_segments(support),
    )


def _on_cut(sd: SzegoData, z: complex) -> bool:
    ends = sd.support.endpoints
    return z.imag == 0 and ends[0] <= z.real <= ends[-1]


def _cauchy(seg: _Segment, density, z: complex, marks) -> complex:
    """int_0^pi density(x(theta)) / (x(theta) - z) d theta with near-pole subtraction."""
    x0 = z.real
    near = seg.lo < x0 < seg.hi and abs(z.imag) < 2 * seg.half and x0 != 0.0
    th, w = _rule(seg, list(marks) + ([x0] if near else []))
    x = seg.x_of(th)
    f = density(x)
    if not near:
        return complex(np.dot(w, f / (x - z)))
    f0 = complex(density(np.array([x0]))[0])
    # x - x0 without cancellation near the subtraction point
    t0 = seg.theta_of(x0)
    dx = -2.0 * seg.half * np.sin(0.5 * (th + t0)) * np.sin(0.5 * (th - t0))
    return complex(np.dot(w, (f - f0) / (dx - 1j * z.imag))) + f0 * seg.cauchy_weight(z)


def eval_phi_szego(sd: SzegoData, z, side: int = 0) -> complex:
    """Phi(z); points on [b_0, a_{N+1}] need side = +1 (from above) or -1."""
    z = complex(z)
    if _on_cut(sd, z):
        if side not in (1, -1):
            raise ValueError("point on the cut requires a side flag")
        z = complex(z.real, side * 0.0)
    if z in (complex(e) for e in sd.support.endpoints):
        raise ValueError("Phi is not evaluated at band endpoints")
    if sd.alpha == 0:
        return 0j
    total = 0j
    for seg in sd.segments:
        if seg.is_band:
            dens = lambda x, s=seg: _band_density(s, sd.alpha, x)  # noqa: E731
            total += _cauchy(seg, dens, z, [0.0])
        else:
            xi = sd.xi[seg.index]
            dens = lambda x, s=seg, c=xi: c * s.inv_root(x)  # noqa: E731
            total += _cauchy(seg, dens, z, [])
    return sqrt_r(sd.support, z) * total


def eval_D(sd: SzegoData, z, side: int = 0) -> complex:
    return cmath.exp(eval_phi_szego(sd, z, side))


def d_infinity(sd: SzegoData) -> complex:
    return sd.d_infinity


@dataclass(frozen=True)
class SzegoReport:
    band_jump_residual: float
    gap_jump_residual: float
    linear_residual: float
    bounded_variation: float
    inverse_bounded_variation: float
    d_infinity_crosscheck: float
    details: dict = field(repr=False, default_factory=dict)

    def passed(self, tol_jump=1e-8, tol_lin=1e-10, factor=2.0) -> bool:
        return (
            self.band_jump_residual <= tol_jump
            and self.gap_jump_residual <= tol_jump
            and self.linear_residual <= tol_lin
            and self.bounded_variation <= factor
        )


def _interior_probes(lo, hi, count, margin):
    pad = margin * (hi - lo)
    return np.linspace(lo + pad, hi - pad, count)


def check_szego(
    sd: SzegoData,
    *,
    probes_per_band: int = 12,
    probes_per_gap: int = 5,
    margin: float = 1e-3,
    m_range: tuple[int, int] = (4, 20),
) -> SzegoReport:
    """Jump residuals, linear-system residual and boundedness near the origin."""
    a = sd.alpha
    band_res = []
    for lo, hi in sd.support.bands:
        for x in _interior_probes(lo, hi, probes_per_band, margin):
            if abs(x) < 1e-6:
                continue
            prod = eval_D(sd, x, 1) * eval_D(sd, x, -1)
            target = abs(x) ** (2 * a)
            band_res.append(abs(prod - target) / target)
    gap_res = []
    for j, (lo, hi) in enumerate(sd.support.gaps):
        expected = cmath.exp(2j * math.pi * sd.xi[j])
        for x in _interior_probes(lo, hi, probes_per_gap, margin):
            ratio = eval_D(sd, x, 1) / eval_D(sd, x, -1)
            gap_res.append(abs(ratio - expected))
    lin = float(np.max(np.abs(sd.a_matrix @ sd.xi + sd.rhs))) if sd.xi.size else 0.0

    ms = np.arange(m_range[0], m_range[1] + 1)
    seq, inv_seq = [], []
    for sgn in (1.0, -1.0):
        vals, inv = [], []
        for m in ms:
            z = complex(sgn * 2.0**-m, 2.0**-m)
            dz = eval_D(sd, z)
            za = cmath.exp(a * cmath.log(z))
            vals.append(abs(dz / za))
            inv.append(abs(za / dz))
        seq.append(vals)
        inv_seq.append(inv)
    seq = np.array(seq)
    inv_seq = np.array(inv_seq)
    variation = float(np.max(seq.max(axis=1) / seq.min(axis=1)))
    inv_variation = float(np.max(inv_seq.max(axis=1) / inv_seq.min(axis=1)))

    # numeric limit D(iR) with one Richardson step in 1/R
    big = 2.0 * eval_D(sd, 2e3j) - eval_D(sd, 1e3j)
    cross = abs(big - sd.d_infinity) / abs(sd.d_infinity)
    return SzegoReport(
        band_jump_residual=float(max(band_res, default=0.0)),
        gap_jump_residual=float(max(gap_res, default=0.0)),
        linear_residual=lin,
        bounded_variation=variation,
        inverse_bounded_variation=inv_variation,
        d_infinity_crosscheck=float(cross),
        details={"m": ms.tolist(), "abs_z_minus_alpha_D": seq.tolist()},
    )
