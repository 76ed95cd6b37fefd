"""Model Riemann-Hilbert solution Psi_alpha, outer and local parametrices, matching check.

Rays Gamma_1..Gamma_8 leave the origin at angles (j - 1) pi / 4 and cut the
plane into sectors I..VIII (sector j lies between Gamma_j and Gamma_{j+1}).
Gamma_1, Gamma_2, Gamma_3, Gamma_7, Gamma_8 are oriented away from the origin
and Gamma_4, Gamma_5, Gamma_6 toward it; with these orientations the constant
jump matrices below are consistent with the continuation factors W and omega.
The "+" side of a ray is its left-hand side.

Psi is evaluated from the Hankel formula in sector I, continued analytically
to the angle of the point, multiplied by the product of jump matrices crossed
along the way.  Sectors I..IV are reached counterclockwise and sectors
V..VIII clockwise, so only principal branches are needed.  Winding further
(used by the cyclic-consistency check) goes through ``hankel_continued``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import EquilibriumData, conformal_map_f, eval_phi
from .potential import EnsembleParams
from .specialfn import hankel_continued
from .szego import SzegoData, eval_D

__all__ = [
    "sector_of",
    "jump_matrix",
    "ray_orientation_outward",
    "eval_omega",
    "eval_W",
    "psi_model",
    "psi_sector_value",
    "psi_jump_residual",
    "psi_cyclic_residual",
    "outer_parametrix",
    "local_parametrix",
    "local_parametrix_parts",
    "MatchingReport",
    "check_matching",
    "boundary_samples",
    "UnsupportedConfiguration",
]

QUARTER = math.pi / 4
_OUTWARD = {1: True, 2: True, 3: True, 4: False, 5: False, 6: False, 7: True, 8: True}
_SIGMA3 = np.diag([1.0, -1.0]).astype(complex)
_ROT = np.array([[0, 1], [-1, 0]], dtype=complex)


class UnsupportedConfiguration(ValueError):
    """Outer parametrix requested for a multi-band support."""


def _diag(a: complex, b: complex) -> np.ndarray:
    return np.array([[a, 0], [0, b]], dtype=complex)


def _sigma3_power(value: complex) -> np.ndarray:
    """value^sigma3 = diag(value, 1/value)."""
    return _diag(value, 1.0 / value)


def _exp_sigma3(x: complex) -> np.ndarray:
    return _diag(cmath.exp(x), cmath.exp(-x))


def sector_of(zeta: complex) -> int:
    """Sector number 1..8; a point on a ray belongs to the counterclockwise sector."""
    theta = math.atan2(zeta.imag, zeta.real) % (2 * math.pi)
    return min(8, int(theta // QUARTER) + 1)


def ray_orientation_outward(j: int) -> bool:
    return _OUTWARD[j]


def jump_matrix(alpha: float, j: int) -> np.ndarray:
    """Jump J_j on Gamma_j: Psi_+ = Psi_- J_j."""
    k = (j - 1) % 4 + 1
    if k == 1:
        return _ROT.copy()
    if k == 2:
        return np.array([[1, 0], [cmath.exp(-2j * math.pi * alpha), 1]], dtype=complex)
    if k == 3:
        return _exp_sigma3(1j * math.pi * alpha)
    return np.array([[1, 0], [cmath.exp(2j * math.pi * alpha), 1]], dtype=complex)


def _ccw_factor(alpha: float, j: int) -> np.ndarray:
    """F with Psi_{sector after Gamma_j} = Psi_{sector before} F, moving counterclockwise."""
    jm = jump_matrix(alpha, j)
    # outward ray: ccw side is the + side; inward ray: ccw side is the - side
    return jm if _OUTWARD[j] else np.linalg.inv(jm)


def _sector_multiplier(alpha: float, sector: int) -> np.ndarray:
    """M_s with Psi_s = (sector-I formula continued) M_s along the principal route."""
    m = np.eye(2, dtype=complex)
    if sector <= 4:
        for j in range(2, sector + 1):
            m = m @ _ccw_factor(alpha, j)
    else:
        # clockwise from sector I: cross Gamma_1, Gamma_8, ..., Gamma_{sector+1}
        m = np.linalg.inv(_ccw_factor(alpha, 1))
        for j in range(8, sector, -1):
            m = m @ np.linalg.inv(_ccw_factor(alpha, j))
    return m


def _psi_one(alpha: float, r: float, theta: float) -> np.ndarray:
    """Sector-I formula continued to zeta = r e^{i theta} for any real theta."""
    wind = 0
    tp = theta
    while tp > math.pi:
        tp -= 2 * math.pi
        wind += 2
    while tp <= -math.pi:
        tp += 2 * math.pi
        wind -= 2
    zp = cmath.rect(r, tp)
    h2p = hankel_continued(alpha + 0.5, zp, wind, 2)
    h1p = hankel_continued(alpha + 0.5, zp, wind, 1)
    h2m = hankel_continued(alpha - 0.5, zp, wind, 2)
    h1m = hankel_continued(alpha - 0.5, zp, wind, 1)
    root = math.sqrt(r) * cmath.exp(0.5j * theta)
    base = 0.5 * math.sqrt(math.pi) * root * np.array([[h2p, -1j * h1p], [h2m, -1j * h1m]], dtype=complex)
    return base @ _exp_sigma3(-(alpha + 0.25) * math.pi * 1j)


def psi_sector_value(alpha: float, zeta: complex, sector: int) -> np.ndarray:
    """The sector's formula at zeta, which may lie on one of the sector's bounding rays."""
    zeta = complex(zeta)
    if zeta == 0:
        raise ValueError("Psi is singular at the origin")
    r = abs(zeta)
    theta = math.atan2(zeta.imag, zeta.real)
    # principal route: sectors I..IV use theta in [0, pi], V..VIII use [-pi, 0]
    if sector <= 4 and theta < 0:
        theta += 2 * math.pi
    elif sector >= 5 and theta > 0:
        theta -= 2 * math.pi
    return _psi_one(alpha, r, theta) @ _sector_multiplier(alpha, sector)


def psi_model(alpha: float, zeta: complex, sector: int | None = None) -> np.ndarray:
    """Psi_alpha(zeta).  ``sector`` selects a boundary value when zeta lies on a ray."""
    zeta = complex(zeta)
    if zeta == 0:
        raise ValueError("Psi is singular at the origin")
    return psi_sector_value(alpha, zeta, sector_of(zeta) if sector is None else sector)


def _plus_minus_sectors(j: int) -> tuple[int, int]:
    ccw = j
    cw = 8 if j == 1 else j - 1
    return (ccw, cw) if _OUTWARD[j] else (cw, ccw)


def psi_jump_residual(alpha: float, j: int, radius: float) -> float:
    """max |Psi_+ - Psi_- J_j| (entrywise) at the point of Gamma_j with |zeta| = radius."""
    zeta = cmath.rect(radius, (j - 1) * QUARTER)
    if j == 1:
        zeta = complex(radius, 0.0)
    if j == 5:
        zeta = complex(-radius, 0.0)
    plus, minus = _plus_minus_sectors(j)
    diff = psi_sector_value(alpha, zeta, plus) - psi_sector_value(alpha, zeta, minus) @ jump_matrix(alpha, j)
    return float(np.max(np.abs(diff)))


def psi_cyclic_residual(alpha: float, zeta: complex) -> float:
    """Compare sector V reached counterclockwise (winding past pi) with the clockwise value."""
    zeta = complex(zeta)
    if sector_of(zeta) != 5:
        raise ValueError("cyclic check is done at points of sector V")
    r = abs(zeta)
    theta = math.atan2(zeta.imag, zeta.real) % (2 * math.pi)  # in [pi, 5pi/4)
    ccw = _psi_one(alpha, r, theta) @ _sector_multiplier(alpha, 4) @ _ccw_factor(alpha, 5)
    cw = psi_sector_value(alpha, zeta, 5)
    return float(np.max(np.abs(ccw - cw)))


# ---------------------------------------------------------------------------
# continuation factors


def eval_omega(alpha: float, z: complex) -> complex:
    z = complex(z)
    if z.real == 0:
        raise ValueError("omega is defined off the imaginary axis")
    base = z if z.real > 0 else -z
    return cmath.exp(2 * alpha * cmath.log(base))


def eval_W(alpha: float, f_value: complex, z: complex) -> complex:
    """W(z) = z^alpha if pi/2 < |arg f(z)| < pi, (-z)^alpha if 0 < |arg f(z)| < pi/2."""
    f_value, z = complex(f_value), complex(z)
    a = abs(cmath.phase(f_value))
    if f_value == 0 or a in (0.0, math.pi / 2, math.pi) or f_value.imag == 0:
        raise ValueError("W is not defined on a sector boundary")
    base = z if a > math.pi / 2 else -z
    return cmath.exp(alpha * cmath.log(base))


# ---------------------------------------------------------------------------
# parametrices


def _require_one_band(eq: EquilibriumData):
    if eq.support.n_gaps:
        raise UnsupportedConfiguration(
            "outer parametrix is implemented for one-band supports only; "
            "multi-band supports need the Riemann theta-function construction"
        )


def outer_parametrix(eq: EquilibriumData, sd: SzegoData, z: complex, side: int = 0) -> np.ndarray:
    """P_inf = D_inf^sigma3 M(z) D(z)^-sigma3 with the one-band matrix M."""
    _require_one_band(eq)
    if sd.support.n_gaps:
        raise UnsupportedConfiguration("Szego data must be for the same single band")
    z = complex(z)
    lo, hi = eq.left, eq.right
    if z.imag == 0 and lo <= z.real <= hi:
        if side not in (1, -1):
            raise ValueError("point on the band requires a side flag")
        z = complex(z.real, side * 0.0)
    # gamma = ((z - lo)/(z - hi))^(1/4); principal logs honor a signed-zero side
    gam = cmath.exp(0.25 * (cmath.log(z - lo) - cmath.log(z - hi)))
    s, d = 0.5 * (gam + 1 / gam), (gam - 1 / gam)
    m = np.array([[s, d / (-2j)], [d / 2j, s]], dtype=complex)
    dz = eval_D(sd, z, side if z.imag == 0 and lo <= z.real <= hi else 0)
    return _sigma3_power(sd.d_infinity) @ m @ _sigma3_power(1.0 / dz)


@dataclass(frozen=True)
class _LocalParts:
    f: complex
    sector: int
    W: complex
    phi: complex
    E: np.ndarray
    En: np.ndarray
    psi: np.ndarray


def _local_parts(eq, sd, e: EnsembleParams, z: complex, delta: float | None, side: int = 0) -> _LocalParts:
    _require_one_band(eq)
    z = complex(z)
    delta = eq.delta if delta is None else delta
    if z == 0:
        raise ValueError("the local parametrix is singular at 0")
    if abs(z) >= delta:
        raise ValueError("point outside the local disk")
    if z.imag == 0:
        # boundary value on the real diameter (Sigma_1 or Sigma_5)
        if side not in (1, -1):
            raise ValueError("point on a jump contour requires a side flag")
        x = z.real
        z = complex(x, side * 0.0)
        fz = conformal_map_f(eq, x, delta)
        zeta = complex(e.n * fz.real, 0.0)
        if x > 0:
            sector = 1 if side > 0 else 8
        else:
            sector = 4 if side > 0 else 5
        # W on the axis: the limit of (-z)^alpha or z^alpha from the chosen side
        base = -z if x > 0 else z
        w = cmath.exp(e.alpha * cmath.log(base))
        phi = eval_phi(eq, x, side)
        pinf = outer_parametrix(eq, sd, x, side)
    else:
        fz = conformal_map_f(eq, z, delta)
        zeta = e.n * fz
        theta = math.atan2(zeta.imag, zeta.real) % (2 * math.pi)
        if abs(theta / QUARTER - round(theta / QUARTER)) < 1e-14:
            raise ValueError("point lies on a sector boundary")
        sector = sector_of(zeta)
        w = eval_W(e.alpha, fz, z)
        phi = eval_phi(eq, z)
        pinf = outer_parametrix(eq, sd, z)
    a = e.alpha
    wsig = _sigma3_power(w)
    if sector in (1, 2):
        big_e = pinf @ wsig @ _exp_sigma3(0.5j * a * math.pi)
    elif sector in (3, 4):
        big_e = pinf @ wsig @ _exp_sigma3(-0.5j * a * math.pi)
    elif sector in (5, 6):
        big_e = pinf @ wsig @ _ROT @ _exp_sigma3(-0.5j * a * math.pi)
    else:
        big_e = pinf @ wsig @ _ROT @ _exp_sigma3(0.5j * a * math.pi)
    en = (
        big_e
        @ _exp_sigma3(e.n * eq.phi_plus_0)
        @ _exp_sigma3(-0.25j * math.pi)
        @ (np.array([[1, 1j], [1j, 1]], dtype=complex) / math.sqrt(2))
    )
    psi = psi_sector_value(a, zeta, sector)
    return _LocalParts(f=fz, sector=sector, W=w, phi=phi, E=big_e, En=en, psi=psi)


def local_parametrix_parts(eq, sd, e, z, delta=None, side: int = 0) -> _LocalParts:
    return _local_parts(eq, sd, e, z, delta, side)


def local_parametrix(
    eq: EquilibriumData, sd: SzegoData, e: EnsembleParams, z: complex, delta=None, side: int = 0
) -> np.ndarray:
    """P(z) = E_n(z) Psi(n f(z)) W(z)^-sigma3 exp(-n phi(z) sigma3).

    Real z gives the boundary value from above (side=+1) or below (side=-1).
    """
    parts = _local_parts(eq, sd, e, z, delta, side)
    return parts.En @ parts.psi @ _sigma3_power(1.0 / parts.W) @ _exp_sigma3(-e.n * parts.phi)


# ---------------------------------------------------------------------------
# matching


def boundary_samples(eq: EquilibriumData, delta: float, count: int = 96, exclusion: float = 0.05):
    """Points of |z| = delta whose image under f stays away from the rays by ``exclusion`` radians."""
    out = []
    for k in range(count):
        z = cmath.rect(delta, 2 * math.pi * (k + 0.5) / count)
        if z.imag == 0:
            continue
        fz = conformal_map_f(eq, z, delta * (1 + 1e-12))
        theta = math.atan2(fz.imag, fz.real) % (2 * math.pi)
        gap = abs(theta - QUARTER * round(theta / QUARTER))
        if gap >= exclusion:
            out.append(z)
    return out


@dataclass(frozen=True)
class MatchingReport:
    n_list: list
    max_residual: list
    slope: float
    ratios: list
    norm: str = "max-entry"
    per_point: dict = field(repr=False, default_factory=dict)


def check_matching(eq, sd, alpha: float, n_list, delta: float | None = None, *, count: int = 96) -> MatchingReport:
    """max over the disk boundary of |P P_inf^-1 - I| (max-entry norm) for each n."""
    delta = eq.delta if delta is None else delta
    radius = delta * (1 - 1e-9)
    pts = boundary_samples(eq, radius, count)
    maxima, per_point = [], {}
    for n in n_list:
        e = EnsembleParams(alpha, int(n))
        res = []
        for z in pts:
            p = local_parametrix(eq, sd, e, z, delta)
            pinf = outer_parametrix(eq, sd, z)
            res.append(float(np.max(np.abs(p @ np.linalg.inv(pinf) - np.eye(2)))))
        per_point[int(n)] = res
        maxima.append(max(res))
    logs = np.log(np.maximum(np.array(maxima), 1e-300))
    slope = float(np.polyfit(np.log(np.asarray(n_list, dtype=float)), logs, 1)[0]) if len(n_list) > 1 else float("nan")
    ratios = [maxima[i] / maxima[i + 1] for i in range(len(maxima) - 1)]
    return MatchingReport(n_list=list(n_list), max_residual=maxima, slope=slope, ratios=ratios, per_point={
        "points": [(z.real, z.imag) for z in pts], "residuals": per_point})
