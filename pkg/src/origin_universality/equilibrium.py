"""Equilibrium measure of a polynomial external field on a single band.

On a band [c - r, c + r] write t = (x - c)/r.  The density is

    psi(x) = (r / 2 pi) sqrt(1 - t^2) h(t),

with h a polynomial stored by its Chebyshev coefficients.  Expanding
V'(c + r t) = sum_k v_k T_k(t), the one-band endpoint conditions read
v_0 = 0 and r v_1 = 4, and h = (1/r) sum_{k>=1} v_k U_{k-1}(t).

Everything downstream (g, phi, f, the distribution function) is expressed
through the Chebyshev coefficients m_k of q(t) = (r^2 / 2 pi)(1 - t^2) h(t),
which satisfies psi(x) dx = q(cos theta) d theta for x = c + r cos theta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

from .potential import Potential, eval_potential, require_admissible
from .quadrature import gauss_legendre, graded_rule

__all__ = [
    "SupportBands",
    "EquilibriumData",
    "EquilibriumError",
    "VariationalReport",
    "solve_equilibrium_one_band",
    "eval_density",
    "equilibrium_cdf",
    "log_potential",
    "check_variational",
    "eval_g",
    "eval_phi",
    "conformal_map_f",
    "sqrt_r",
]


class EquilibriumError(RuntimeError):
    """The solver failed or the potential is not regular one-band."""


@dataclass(frozen=True)
class SupportBands:
    """Disjoint closed bands [lo_0, hi_0] < [lo_1, hi_1] < ..."""

    bands: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bands = tuple((float(a), float(b)) for a, b in self.bands)
        if not bands:
            raise ValueError("at least one band is required")
        prev = -math.inf
        for lo, hi in bands:
            if not (lo < hi) or lo <= prev:
                raise ValueError("bands must be increasing, disjoint and non-degenerate")
            prev = hi
        object.__setattr__(self, "bands", bands)

    @property
    def n_gaps(self) -> int:
        return len(self.bands) - 1

    @property
    def endpoints(self) -> tuple[float, ...]:
        return tuple(e for band in self.bands for e in band)

    @property
    def gaps(self) -> tuple[tuple[float, float], ...]:
        return tuple((self.bands[j][1], self.bands[j + 1][0]) for j in range(self.n_gaps))

    def band_index(self, x: float) -> int | None:
        for j, (lo, hi) in enumerate(self.bands):
            if lo < x < hi:
                return j
        return None

    def gap_index(self, x: float) -> int | None:
        for j, (lo, hi) in enumerate(self.gaps):
            if lo < x < hi:
                return j
        return None


def sqrt_r(support: SupportBands, z: complex) -> complex:
    """R^{1/2}(z) = prod_e sqrt(z - e), principal roots.

    This is analytic off the bands and behaves like z^(N+1) at infinity.
    For real z a signed-zero imaginary part selects the boundary value
    (``complex(x, +0.0)`` from above, ``complex(x, -0.0)`` from below).
    """
    out = 1.0 + 0j
    for e in support.endpoints:
        out *= cmath.sqrt(complex(z) - e)
    return out


@dataclass(frozen=True)
class EquilibriumData:
    support: SupportBands
    h_cheb: tuple[np.ndarray, ...]
    ell: float
    omega: tuple[float, ...]
    psi0: float
    center: float
    radius: float
    q_cheb: np.ndarray = field(repr=False)
    potential: Potential = field(repr=False)
    phi_plus_0: complex = 0j

    @property
    def left(self) -> float:
        return self.center - self.radius

    @property
    def right(self) -> float:
        return self.center + self.radius

    @property
    def delta(self) -> float:
        """Default local disk radius: a quarter of the distance from 0 to the support edge."""
        return 0.25 * min(-self.left, self.right)

    def summary(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "ell": self.ell,
            "psi0": self.psi0,
            "h_cheb": [float(v) for v in self.h_cheb[0]],
            "delta": self.delta,
        }


def _derivative_cheb(p: Potential, c: float, r: float) -> np.ndarray:
    dv = P.polyder(np.asarray(p.coefficients, dtype=float))
    composed = np.polynomial.Polynomial(dv)(np.polynomial.Polynomial([c, r]))
    coef = composed.convert(kind=np.polynomial.Chebyshev).coef
    return np.concatenate((coef, np.zeros(max(0, 2 - coef.size))))


def _endpoint_residual(p: Potential, c: float, r: float) -> np.ndarray:
    v = _derivative_cheb(p, c, r)
    return np.array([v[0], r * v[1] - 4.0])


def _u_to_t(m: int) -> np.ndarray:
    """Chebyshev-T coefficients of U_m."""
    out = np.zeros(m + 1)
    out[m % 2 :: 2] = 2.0
    if m % 2 == 0:
        out[0] -= 1.0
    return out


def _h_from_derivative(v: np.ndarray, r: float) -> np.ndarray:
    deg = max(1, v.size - 1)
    h = np.zeros(deg)
    for k in range(1, v.size):
        h[:k] += v[k] * _u_to_t(k - 1)
    return h / r


def solve_equilibrium_one_band(
    p: Potential, *, tol: float = 1e-14, max_iter: int = 100, psi0_floor: float = 1e-8
) -> EquilibriumData:
    """Endpoints by Newton iteration on the one-band moment conditions."""
    require_admissible(p)

    # r v_1(0, r) is increasing in r for admissible V; bracket and bisect first
    def f_r(r):
        return _endpoint_residual(p, 0.0, r)[1]

    lo, hi = 1e-6, 1.0
    while f_r(hi) < 0:
        hi *= 2.0
        if hi > 1e8:
            raise EquilibriumError("could not bracket the support radius")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f_r(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * hi:
            break
    x = np.array([0.0, 0.5 * (lo + hi)])

    for _ in range(max_iter):
        res = _endpoint_residual(p, *x)
        if np.max(np.abs(res)) < tol:
            break
        jac = np.empty((2, 2))
        for j in range(2):
            step = 1e-7 * max(1.0, abs(x[j]))
            dx = np.zeros(2)
            dx[j] = step
            jac[:, j] = (_endpoint_residual(p, *(x + dx)) - _endpoint_residual(p, *(x - dx))) / (2 * step)
        x = x - np.linalg.solve(jac, res)
        if x[1] <= 0:
            raise EquilibriumError("Newton iteration left the admissible region")
    else:
        raise EquilibriumError("Newton iteration did not converge")
    c, r = float(x[0]), float(x[1])

    v = _derivative_cheb(p, c, r)
    h = _h_from_derivative(v, r)
    t = np.cos(np.linspace(0.0, math.pi, 2001))
    hv = C.chebval(t, h)
    if np.all(hv <= 0):
        h = -h
        hv = -hv
    if np.min(hv) <= 0:
        raise EquilibriumError("h vanishes on the band: multi-band or singular potential")
    if not (c - r < 0 < c + r):
        raise EquilibriumError("0 lies outside the support")
    q = C.chebmul(np.array([0.5, 0.0, -0.5]), h) * (r * r / (2.0 * math.pi))

    psi0 = float(r / (2 * math.pi) * math.sqrt(1 - (c / r) ** 2) * C.chebval(-c / r, h))
    if psi0 <= psi0_floor:
        raise EquilibriumError("psi(0) vanishes: the origin is not a regular bulk point")

    eq = EquilibriumData(
        support=SupportBands(((c - r, c + r),)),
        h_cheb=(h,),
        ell=0.0,
        omega=(),
        psi0=psi0,
        center=c,
        radius=r,
        q_cheb=q,
        potential=p,
    )
    ell = 2.0 * eval_g(eq, c, side=1).real - float(eval_potential(p, c))
    eq = _replace(eq, ell=ell)
    return _replace(eq, phi_plus_0=eval_phi(eq, 0.0, side=1))


def _replace(eq: EquilibriumData, **kw) -> EquilibriumData:
    from dataclasses import replace

    return replace(eq, **kw)


# ---------------------------------------------------------------------------
# density and distribution


def eval_density(eq: EquilibriumData, x):
    """psi(x); zero outside the closed support."""
    t = (np.asarray(x, dtype=float) - eq.center) / eq.radius
    inside = np.abs(t) < 1
    tt = np.where(inside, t, 0.0)
    val = eq.radius / (2 * math.pi) * np.sqrt(1 - tt * tt) * C.chebval(tt, eq.h_cheb[0])
    out = np.where(inside, val, 0.0)
    return float(out) if np.ndim(x) == 0 else out


def equilibrium_cdf(eq: EquilibriumData, x):
    """mu_V((-inf, x]) in closed form from the coefficients of q."""
    t = np.clip((np.asarray(x, dtype=float) - eq.center) / eq.radius, -1.0, 1.0)
    theta = np.arccos(t)
    m = eq.q_cheb
    out = m[0] * (math.pi - theta)
    for k in range(1, m.size):
        out = out - m[k] * np.sin(k * theta) / k
    out = np.where(t <= -1.0, 0.0, np.where(t >= 1.0, 1.0, out))
    return float(out) if np.ndim(x) == 0 else out


def log_potential(eq: EquilibriumData, x: float, *, order: int = 16) -> float:
    """U(x) = int log|x - s| psi(s) ds by graded quadrature in the angle variable.

    Independent of the closed-form g-function, so it serves as its oracle.
    """
    t = (x - eq.center) / eq.radius
    th, w = graded_rule(0.0, math.pi, [math.acos(t)] if -1 < t < 1 else [], order=order)
    if -1 <= t <= 1:
        # x - s = 2 r sin((theta + theta_x)/2) sin((theta - theta_x)/2), free of cancellation
        tx = math.acos(t)
        dist = 2 * eq.radius * np.abs(np.sin(0.5 * (th + tx)) * np.sin(0.5 * (th - tx)))
    else:
        dist = np.abs(x - eq.center - eq.radius * np.cos(th))
    vals = np.log(dist) * C.chebval(np.cos(th), eq.q_cheb)
    return float(np.dot(w, vals))


@dataclass(frozen=True)
class VariationalReport:
    max_equality_residual: float
    min_outside_margin: float
    singular: bool
    equality_residuals: np.ndarray = field(repr=False)
    outside_margins: np.ndarray = field(repr=False)


def check_variational(eq: EquilibriumData, p: Potential, grid_inside, grid_outside, *, tol: float = 1e-10):
    inside = np.asarray(grid_inside, dtype=float)
    outside = np.asarray(grid_outside, dtype=float)
    res = np.array([2 * log_potential(eq, x) - float(eval_potential(p, x)) - eq.ell for x in inside])
    marg = np.array([eq.ell + float(eval_potential(p, x)) - 2 * log_potential(eq, x) for x in outside])
    h_min = float(np.min(C.chebval(np.cos(np.linspace(0, math.pi, 2001)), eq.h_cheb[0])))
    min_margin = float(np.min(marg)) if marg.size else math.inf
    return VariationalReport(
        max_equality_residual=float(np.max(np.abs(res))) if res.size else 0.0,
        min_outside_margin=min_margin,
        singular=bool(min_margin <= tol or h_min <= tol),
        equality_residuals=res,
        outside_margins=marg,
    )


# ---------------------------------------------------------------------------
# g, phi and f


def _joukowski_inverse(t: complex, side: int) -> tuple[complex, complex]:
    """(w, log w) with t = (w + 1/w)/2 and |w| >= 1; side picks the cut value."""
    if t.imag != 0 or side == 0:
        if t.imag == 0 and t.real < 1:
            raise ValueError("point on the cut requires a side flag")
        w = t + cmath.sqrt(t - 1) * cmath.sqrt(t + 1)
        return w, cmath.log(w)
    x = t.real
    if abs(x) < 1:
        w = complex(x, side * math.sqrt(1 - x * x))
        return w, complex(0.0, math.atan2(w.imag, w.real))
    if x >= 1:
        w = complex(x + math.sqrt(x * x - 1))
        return w, complex(math.log(w.real))
    w = complex(x - math.sqrt(x * x - 1))
    return w, complex(math.log(-w.real), side * math.pi)


def eval_g(eq: EquilibriumData, z, side: int = 0) -> complex:
    """g(z) = int log(z - s) psi(s) ds with the principal logarithm.

    Real z left of the right endpoint needs ``side`` = +1 or -1 for the
    boundary value from above or below.
    """
    z = complex(z)
    t = (z - eq.center) / eq.radius
    if t.imag == 0 and t.real >= 1:
        side = 0
    w, logw = _joukowski_inverse(t, side)
    m = eq.q_cheb
    out = math.pi * m[0] * (math.log(eq.radius) + logw - math.log(2.0))
    winv = 1.0 / w
    power = 1.0 + 0j
    for k in range(1, m.size):
        power *= winv
        out -= math.pi / k * m[k] * power
    return out


def eval_phi(eq: EquilibriumData, z, side: int = 0, *, order: int = 48) -> complex:
    """phi(z) = (1/2) int_z^a R^{1/2}(s) h(s) ds along the segment to the right endpoint.

    The substitution s = a + (z - a) tau^2 removes the square-root endpoint
    behavior.  Real points on the band need ``side``; real points to the left
    of the band are rejected because the segment would pass an endpoint.
    """
    z = complex(z)
    a, b = eq.right, eq.left
    if z == a:
        return 0j
    if z.imag == 0:
        if z.real <= b:
            raise ValueError("segment to the right endpoint would cross the band edge")
        if z.real < a:
            if side not in (1, -1):
                raise ValueError("point on the band requires a side flag")
            z = complex(z.real, side * 0.0)
        else:
            z = complex(z.real, 0.0)
    tau, wts = gauss_legendre(order)
    tau = 0.5 * (tau + 1.0)
    wts = 0.5 * wts
    d = z - a
    s = a + d * tau**2
    root_d = cmath.sqrt(d)
    sb = s - b
    if z.imag == 0:
        sb = sb.real.astype(complex)  # stays to the right of b on the real line
    r_half = root_d * tau * np.sqrt(sb)
    h = C.chebval((s - eq.center) / eq.radius, eq.h_cheb[0])
    integrand = r_half * h * 2.0 * d * tau
    return -0.5 * complex(np.dot(wts, integrand))


def conformal_map_f(eq: EquilibriumData, z, delta: float | None = None) -> complex:
    """The local conformal map f near the origin."""
    delta = eq.delta if delta is None else delta
    z = complex(z)
    if abs(z) >= delta:
        raise ValueError("point outside the local disk")
    if z.imag == 0:
        return complex(math.pi * (equilibrium_cdf(eq, z.real) - equilibrium_cdf(eq, 0.0)))
    phi = eval_phi(eq, z)
    if z.imag > 0:
        return 1j * phi - 1j * eq.phi_plus_0
    return -1j * phi - 1j * eq.phi_plus_0
