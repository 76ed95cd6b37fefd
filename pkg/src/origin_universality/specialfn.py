"""Bessel and Hankel functions of real order on complex arguments.

Two evaluation branches are used:

* ``|z| <= SERIES_RADIUS``: the ascending power series of J_nu, with Y_nu
  from the connection formula (non-integer order) or from the exact
  logarithmic series (integer order).
* ``|z| > SERIES_RADIUS``: the Laplace-type integral representation of the
  Hankel functions,

      H^(1,2)_nu(z) = sqrt(2/(pi z)) exp(+-i(z - nu pi/2 - pi/4)) / Gamma(nu + 1/2)
                      * int_0^inf exp(-u) u^(nu-1/2) (1 +- iu/(2z))^(nu-1/2) du,

  evaluated with generalized Gauss-Laguerre quadrature.  Unlike the
  truncated Hankel asymptotic series, this representation has no
  irreducible truncation error, which keeps the series/large-argument
  overlap zone accurate to near machine precision.  Arguments outside the
  representation's sector of validity are reached through the standard
  reflection z -> -z.

Inside the series disk the integral is also used for a Hankel function
whenever its argument is comfortably inside the integral's sector of
validity.  The power series computes J and Y with absolute error of order
eps * exp(|z|), which is fine for the dominant solution but not for the
recessive one near the imaginary axis.

All public functions accept scalars or numpy arrays for ``z``.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

__all__ = [
    "SERIES_RADIUS",
    "reciprocal_gamma",
    "gamma",
    "bessel_j",
    "bessel_y",
    "hankel_h1",
    "hankel_h2",
    "bessel_j_prime",
    "hankel_h1_prime",
    "hankel_h2_prime",
    "bessel_j_entire",
    "bessel_j_series",
    "hankel_large",
    "hankel_continued",
]

SERIES_RADIUS = 12.0
_LAGUERRE_NODES = 64
_EULER_GAMMA = 0.57721566490153286061


def gamma(x: float) -> float:
    """Gamma function of a real argument (raises at the poles)."""
    return math.gamma(x)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), returning 0 at the non-positive integers."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or nu <= -1.0:
        raise ValueError(f"Bessel order must exceed -1, got {nu}")
    return nu


def _is_integer(nu: float) -> bool:
    return nu == math.floor(nu)


def _vectorize(scalar_fn):
    """Lift a scalar (nu, z) function to array arguments in ``z``."""

    def wrapper(nu, z):
        if np.ndim(z) == 0:
            return scalar_fn(nu, z)
        arr = np.asarray(z)
        out = np.array([scalar_fn(nu, v) for v in arr.ravel()])
        return out.reshape(arr.shape)

    wrapper.__name__ = scalar_fn.__name__.lstrip("_")
    wrapper.__doc__ = scalar_fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# series branch


def _power(z: complex, p: float) -> complex:
    """Principal power z**p with z**0 == 1 and 0**p == 0 for p > 0."""
    if z == 0:
        if p == 0:
            return 1.0 + 0j
        if p > 0:
            return 0j
        raise ZeroDivisionError("negative power of zero")
    return cmath.exp(p * cmath.log(z))


def _j_series(nu: float, z: complex) -> complex:
    """Ascending series for J_nu(z), principal branch of (z/2)^nu."""
    q = -0.25 * z * z
    rg = reciprocal_gamma(nu + 1.0)
    if rg == 0.0:
        # negative integer order: J_{-m} = (-1)^m J_m
        m = int(round(-nu))
        return (-1) ** m * _j_series(float(m), z)
    term = complex(rg)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > abs(z):
            break
        if k > 500:
            break
    return total * _power(0.5 * z, nu)


def _y_integer_series(n: int, z: complex) -> complex:
    """Y_n(z) for integer n >= 0 from the exact logarithmic series."""
    half = 0.5 * z
    q = half * half
    finite = 0j
    if n > 0:
        term = complex(math.factorial(n - 1))
        finite = term
        for k in range(1, n):
            term *= q / (k * (n - k))
            finite += term
        finite *= _power(half, -float(n))
    # digamma at positive integers: psi(m) = -gamma + H_{m-1}
    psi_a = -_EULER_GAMMA
    psi_b = -_EULER_GAMMA + sum(1.0 / j for j in range(1, n + 1))
    term = complex(1.0 / math.factorial(n))
    tail = (psi_a + psi_b) * term
    k = 0
    while True:
        k += 1
        psi_a += 1.0 / k
        psi_b += 1.0 / (n + k)
        term *= -q / (k * (n + k))
        add = (psi_a + psi_b) * term
        tail += add
        if abs(add) <= 1e-17 * abs(tail) and k > abs(z):
            break
        if k > 500:
            break
    tail *= _power(half, float(n))
    return (-finite + 2.0 * cmath.log(half) * _j_series(float(n), z) - tail) / math.pi


def _y_series(nu: float, z: complex) -> complex:
    if _is_integer(nu):
        n = int(nu)
        if n < 0:
            return (-1) ** (-n) * _y_integer_series(-n, z)
        return _y_integer_series(n, z)
    s, c = math.sin(nu * math.pi), math.cos(nu * math.pi)
    return (_j_series(nu, z) * c - _j_series(-nu, z)) / s


def bessel_j_series(nu, z):
    """J_nu(z) from the ascending series alone (any |z|, for cross-checks)."""
    nu = float(nu)
    if np.ndim(z) == 0:
        return _j_series(nu, complex(z))
    arr = np.asarray(z, dtype=complex)
    return np.array([_j_series(nu, v) for v in arr.ravel()]).reshape(arr.shape)


# ---------------------------------------------------------------------------
# large-argument branch


@lru_cache(maxsize=256)
def _laguerre_rule(nu: float):
    x, w = roots_genlaguerre(_LAGUERRE_NODES, nu - 0.5)
    return x, w * reciprocal_gamma(nu + 0.5)


def _laplace(nu: float, z: complex, kind: int) -> complex:
    """Hankel integral representation, valid for nu > -1/2 on its sector.

    The integrand (1 +- i t/(2z))^(nu-1/2) has a branch point at t = +-2iz.  When
    that point lies within pi/4 of the positive axis the path is turned to
    t = e^(i beta) s, with s rescaled by cos(beta) so that the Laguerre weight
    is kept and only a mild oscillation e^(-i s tan(beta)) is left over.
    """
    x, w = _laguerre_rule(nu)
    sgn = 1.0 if kind == 1 else -1.0
    mu = nu - 0.5
    sing = cmath.phase(sgn * 2j * z)
    if abs(sing) < 0.25 * math.pi:
        beta = sing - 0.25 * math.pi if sing >= 0 else sing + 0.25 * math.pi
        rot = cmath.exp(1j * beta) / math.cos(beta)
        t = rot * x
        factor = np.exp(-1j * math.tan(beta) * x) * (1.0 + sgn * 1j * t / (2.0 * z)) ** mu
        integral = rot ** (mu + 1.0) * complex(np.dot(w, factor))
    else:
        factor = (1.0 + sgn * 1j * x / (2.0 * z)) ** mu
        integral = complex(np.dot(w, factor))
    phase = sgn * 1j * (z - 0.5 * nu * math.pi - 0.25 * math.pi)
    return cmath.sqrt(2.0 / (math.pi * z)) * cmath.exp(phase) * integral


def _hankel_pair_large(nu: float, z: complex) -> tuple[complex, complex]:
    """(H1, H2) for nu > -1/2 using the integral and the z -> -z reflection."""
    h1 = h2 = None
    if z.real >= 0 or z.imag >= 0:
        h1 = _laplace(nu, z, 1)
    if z.real >= 0 or z.imag < 0:
        h2 = _laplace(nu, z, 2)
    if h1 is not None and h2 is not None:
        return h1, h2
    w = -z
    e = cmath.exp(1j * nu * math.pi)
    c2 = 2.0 * math.cos(nu * math.pi)
    if h2 is None:  # Re z < 0, Im z >= 0: w lies in the lower half-plane
        h2 = e * _laplace(nu, w, 1) + c2 * _laplace(nu, w, 2)
    else:  # Re z < 0, Im z < 0
        h1 = c2 * _laplace(nu, w, 1) + _laplace(nu, w, 2) / e
    return h1, h2


def hankel_large(nu: float, z: complex) -> tuple[complex, complex]:
    """(H1_nu(z), H2_nu(z)) from the large-argument branch only."""
    nu = _check_order(nu)
    z = complex(z)
    if nu > -0.5:
        return _hankel_pair_large(nu, z)
    # -1 < nu <= -1/2: downward recurrence from nu + 1, nu + 2
    a1, a2 = _hankel_pair_large(nu + 1.0, z)
    b1, b2 = _hankel_pair_large(nu + 2.0, z)
    f = 2.0 * (nu + 1.0) / z
    return f * a1 - b1, f * a2 - b2


# ---------------------------------------------------------------------------
# dispatch


def _pair(nu: float, z: complex) -> tuple[complex, complex]:
    """(J, Y) at z by the appropriate branch."""
    if abs(z) <= SERIES_RADIUS:
        return _j_series(nu, z), _y_series(nu, z)
    h1, h2 = hankel_large(nu, z)
    return 0.5 * (h1 + h2), (h1 - h2) / 2j


def _real_result(z, value: complex):
    """Return a float for real non-negative arguments."""
    if isinstance(z, (float, int, np.floating, np.integer)) and z >= 0:
        return value.real
    return value


def _bessel_j(nu, z):
    """J_nu(z); real non-negative z gives a float."""
    nu = _check_order(nu)
    zc = complex(z)
    if abs(zc) <= SERIES_RADIUS:
        val = _j_series(nu, zc)
    else:
        h1, h2 = hankel_large(nu, zc)
        val = 0.5 * (h1 + h2)
    return _real_result(z, val)


def _bessel_y(nu, z):
    """Y_nu(z), z != 0; real positive z gives a float."""
    nu = _check_order(nu)
    zc = complex(z)
    if zc == 0:
        raise ZeroDivisionError("Y_nu is singular at z = 0")
    return _real_result(z, _pair(nu, zc)[1])


_LAPLACE_MIN = 2.0


def _laplace_any(nu: float, z: complex, kind: int) -> complex:
    """Integral representation for a single kind, all orders nu > -1."""
    if nu > -0.5:
        return _laplace(nu, z, kind)
    return 2.0 * (nu + 1.0) / z * _laplace(nu + 1.0, z, kind) - _laplace(nu + 2.0, z, kind)


def _hankel(nu, z, kind):
    nu = _check_order(nu)
    zc = complex(z)
    if zc == 0:
        raise ZeroDivisionError("Hankel functions are singular at z = 0")
    if abs(zc) > SERIES_RADIUS:
        return hankel_large(nu, zc)[kind - 1]
    # Inside the series disk the series is accurate for the dominant solution
    # only; where the integral is well conditioned (arg z at least pi/4 away
    # from its branch ray) it is used instead, which keeps recessive values exact.
    if abs(zc) >= _LAPLACE_MIN:
        if kind == 1:  # principal H1: arg z in [-pi/4, pi]
            margin_ok = zc.imag >= 0 or zc.imag >= -zc.real
        else:  # principal H2: arg z in [-pi, pi/4]
            margin_ok = zc.imag < 0 or zc.imag <= zc.real
        if margin_ok:
            return _laplace_any(nu, zc, kind)
    j, y = _j_series(nu, zc), _y_series(nu, zc)
    return j + 1j * y if kind == 1 else j - 1j * y


def _hankel_h1(nu, z):
    """H^(1)_nu(z) = J_nu(z) + i Y_nu(z)."""
    return _hankel(nu, z, 1)


def _hankel_h2(nu, z):
    """H^(2)_nu(z) = J_nu(z) - i Y_nu(z)."""
    return _hankel(nu, z, 2)


bessel_j = _vectorize(_bessel_j)
bessel_y = _vectorize(_bessel_y)
hankel_h1 = _vectorize(_hankel_h1)
hankel_h2 = _vectorize(_hankel_h2)


def bessel_j_prime(nu, z):
    """dJ_nu/dz = (nu/z) J_nu(z) - J_{nu+1}(z)."""
    if np.ndim(z) == 0 and z == 0:
        if nu == 1:
            return 0.5
        if nu > 1 or nu == 0:
            return 0.0
        raise ZeroDivisionError("J_nu' is singular at 0 for this order")
    return (nu / z) * bessel_j(nu, z) - bessel_j(nu + 1.0, z)


def hankel_h1_prime(nu, z):
    return (nu / z) * hankel_h1(nu, z) - hankel_h1(nu + 1.0, z)


def hankel_h2_prime(nu, z):
    return (nu / z) * hankel_h2(nu, z) - hankel_h2(nu + 1.0, z)


def _entire(nu: float, x: float) -> float:
    if abs(x) <= SERIES_RADIUS:
        q = -0.25 * x * x
        term = reciprocal_gamma(nu + 1.0) * 2.0 ** (-nu)
        total = term
        k = 0
        while True:
            k += 1
            term *= q / (k * (k + nu))
            total += term
            if abs(term) <= 1e-17 * abs(total) and k > abs(x):
                break
        return total
    ax = abs(x)
    return ax ** (-nu) * _bessel_j(nu, ax)


def bessel_j_entire(nu, x):
    """The even entire function x^(-nu) J_nu(x) for real x of either sign."""
    nu = _check_order(nu)
    if np.ndim(x) == 0:
        return _entire(nu, float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_entire(nu, v) for v in arr.ravel()]).reshape(arr.shape)


def hankel_continued(nu, z, m: int, kind: int) -> complex:
    """H^(kind)_nu evaluated at z * exp(m pi i), continued from the principal value at z.

    Uses J(z e^{m pi i}) = e^{m nu pi i} J(z) and
    Y(z e^{m pi i}) = e^{-m nu pi i} Y(z) + 2i sin(m nu pi) cot(nu pi) J(z),
    with the integer-order limit sin(m nu pi) cot(nu pi) -> m (-1)^(m nu).
    """
    nu = _check_order(nu)
    z = complex(z)
    if m == 0:
        return _hankel(nu, z, kind)
    j, y = _pair(nu, z)
    if _is_integer(nu):
        coupling = m * (-1) ** ((m * int(nu)) % 2)
    else:
        coupling = math.sin(m * nu * math.pi) / math.tan(nu * math.pi)
    jm = cmath.exp(1j * m * nu * math.pi) * j
    ym = cmath.exp(-1j * m * nu * math.pi) * y + 2j * coupling * j
    return jm + 1j * ym if kind == 1 else jm - 1j * ym
