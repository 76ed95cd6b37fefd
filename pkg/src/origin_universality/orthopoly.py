"""Orthonormal polynomials for the varying weight and the Christoffel-Darboux kernel.

Polynomials are handled through the normalized family q_k = p_k * sqrt(mu0),
which satisfies

    x q_k = c_{k+1} q_{k+1} + d_k q_k + c_k q_{k-1},    q_0 = 1,

so that the kernel is

    K_n(x, y) = exp(log w(x)/2 + log w(y)/2 - log mu0) * sum_{j<n} q_j(x) q_j(y).

Keeping mu0 in log form means exp(-n V) never has to be formed on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp, roots_jacobi

from .potential import EnsembleParams, Potential, eval_log_weight, eval_potential, require_admissible

__all__ = [
    "WeightedQuadrature",
    "RecurrenceTable",
    "QuadratureError",
    "build_quadrature",
    "stieltjes_recurrence",
    "build_table",
    "eval_orthopoly",
    "eval_orthopoly_normalized",
    "leading_coeff",
    "log_leading_coeff",
    "cd_kernel",
    "kernel_sum",
    "kernel_via_Y",
]

_TAIL_LOG = 70.0  # exp(-70) ~ 4e-31 relative tail


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class WeightedQuadrature:
    nodes: np.ndarray
    log_weights: np.ndarray
    bounds: tuple[float, float]
    panels: int


@dataclass(frozen=True)
class RecurrenceTable:
    diag: np.ndarray  # d_0 .. d_{K-1}
    offdiag: np.ndarray  # c_1 .. c_K
    log_mu0: float
    potential: Potential = field(repr=False)
    ensemble: EnsembleParams = field(repr=False)

    @property
    def mu0(self) -> float:
        return math.exp(self.log_mu0)

    @property
    def degree(self) -> int:
        return int(self.offdiag.size)

    def to_record(self) -> dict:
        return {
            "alpha": self.ensemble.alpha,
            "n": self.ensemble.n,
            "potential": list(self.potential.coefficients),
            "log_mu0": self.log_mu0,
            "diag": [float(v) for v in self.diag],
            "offdiag": [float(v) for v in self.offdiag],
        }


# ---------------------------------------------------------------------------
# quadrature


def _truncation(p: Potential, e: EnsembleParams, K: int) -> tuple[float, float]:
    """Bounds beyond which the weight times degree-2K growth is negligible."""
    probe = np.linspace(-50, 50, 20001)
    probe = probe[probe != 0]
    peak = float(np.max(eval_log_weight(p, e, probe)))

    def outside(x):
        return eval_log_weight(p, e, x) + 2 * K * math.log1p(abs(x)) < peak - _TAIL_LOG

    bounds = []
    for sign in (-1.0, 1.0):
        lo, hi = 0.0, 1.0
        while not outside(sign * hi):
            lo, hi = hi, 2 * hi
            if hi > 1e6:
                raise QuadratureError("weight does not decay")
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if outside(sign * mid):
                hi = mid
            else:
                lo = mid
        bounds.append(sign * hi)
    return bounds[0], bounds[1]


def _half_line_rule(p, e, X: float, panels: int, order: int):
    """Rule on [0, X] (X may be negative) with |x|^(2 alpha) absorbed on the first panel."""
    side = math.copysign(1.0, X)
    length = abs(X) / panels
    t, w = np.polynomial.legendre.leggauss(order)
    nodes, logw = [], []
    # first panel: Gauss-Jacobi with weight (1 + t)^(2 alpha) resolves |x|^(2 alpha)
    a2 = 2.0 * e.alpha
    tj, wj = roots_jacobi(order, 0.0, a2)
    x0 = side * 0.5 * length * (1.0 + tj)
    nodes.append(x0)
    logw.append(np.log(wj) + (a2 + 1.0) * math.log(0.5 * length) - e.n * eval_potential(p, x0))
    for k in range(1, panels):
        lo = k * length
        xk = side * (lo + 0.5 * length * (1.0 + t))
        nodes.append(xk)
        logw.append(np.log(0.5 * length * w) + eval_log_weight(p, e, xk))
    return np.concatenate(nodes), np.concatenate(logw)


def _rule(p, e, bounds, panels, order) -> WeightedQuadrature:
    xl, wl = _half_line_rule(p, e, bounds[0], panels, order)
    xr, wr = _half_line_rule(p, e, bounds[1], panels, order)
    x = np.concatenate((xl, xr))
    lw = np.concatenate((wl, wr))
    idx = np.argsort(x)
    return WeightedQuadrature(nodes=x[idx], log_weights=lw[idx], bounds=bounds, panels=panels)


def build_quadrature(
    p: Potential,
    e: EnsembleParams,
    K: int,
    *,
    order: int = 40,
    start_panels: int = 2,
    max_panels: int = 256,
    tol: float = 1e-12,
) -> WeightedQuadrature:
    """Composite rule for dx w_n(x), refined until the first K recurrence coefficients settle."""
    require_admissible(p, e)
    if K < 1:
        raise ValueError("K must be at least 1")
    bounds = _truncation(p, e, K)
    panels = start_panels
    prev = None
    while True:
        q = _rule(p, e, bounds, panels, order)
        if q.nodes.size > K + 1:
            d, c, _ = _lanczos(q, K)
            cur = np.concatenate((d, c))
            if prev is not None and np.max(np.abs(cur - prev)) < tol * max(1.0, np.max(np.abs(cur))):
                return q
            prev = cur
        panels *= 2
        if panels > max_panels:
            raise QuadratureError("quadrature refinement did not converge")


# ---------------------------------------------------------------------------
# recurrence


def _lanczos(q: WeightedQuadrature, K: int):
    if K >= q.nodes.size:
        raise QuadratureError("quadrature has too few nodes for the requested degree")
    log_mu0 = float(logsumexp(q.log_weights))
    x = q.nodes
    basis = np.zeros((K + 1, x.size))
    basis[0] = np.exp(0.5 * (q.log_weights - log_mu0))
    d = np.zeros(K)
    c = np.zeros(K)
    for k in range(K):
        v = x * basis[k]
        d[k] = basis[k] @ v
        v -= d[k] * basis[k]
        if k:
            v -= c[k - 1] * basis[k - 1]
        for _ in range(2):  # full reorthogonalization
            v -= basis[: k + 1].T @ (basis[: k + 1] @ v)
        norm = float(np.linalg.norm(v))
        if not norm > 0:
            raise QuadratureError(f"recurrence coefficient c_{k + 1} lost positivity")
        c[k] = norm
        basis[k + 1] = v / norm
    return d, c, log_mu0


def stieltjes_recurrence(q: WeightedQuadrature, K: int, p: Potential, e: EnsembleParams) -> RecurrenceTable:
    """Recurrence coefficients of the discrete measure by Lanczos tridiagonalization."""
    d, c, log_mu0 = _lanczos(q, K)
    return RecurrenceTable(diag=d, offdiag=c, log_mu0=log_mu0, potential=p, ensemble=e)


def build_table(p: Potential, e: EnsembleParams, K: int | None = None, **kw) -> RecurrenceTable:
    """Quadrature plus recurrence; K defaults to n + 1 so that p_n is available."""
    K = e.n + 1 if K is None else K
    q = build_quadrature(p, e, K, **kw)
    return stieltjes_recurrence(q, K, p, e)


# ---------------------------------------------------------------------------
# evaluation


def _normalized_family(t: RecurrenceTable, kmax: int, x, with_derivative=False):
    """Rows q_0 .. q_kmax (and derivatives) at the points x."""
    if kmax > t.degree:
        raise ValueError(f"table only reaches degree {t.degree}")
    x = np.asarray(x, dtype=float)
    q = np.zeros((kmax + 1,) + x.shape)
    dq = np.zeros_like(q)
    q[0] = 1.0
    for k in range(kmax):
        nxt = (x - t.diag[k]) * q[k]
        dn = (x - t.diag[k]) * dq[k] + q[k]
        if k:
            nxt -= t.offdiag[k - 1] * q[k - 1]
            dn -= t.offdiag[k - 1] * dq[k - 1]
        q[k + 1] = nxt / t.offdiag[k]
        dq[k + 1] = dn / t.offdiag[k]
    return (q, dq) if with_derivative else q


def eval_orthopoly_normalized(t: RecurrenceTable, k: int, x):
    """q_k(x) = sqrt(mu0) p_k(x)."""
    return _normalized_family(t, k, x)[k]


def eval_orthopoly(t: RecurrenceTable, k: int, x):
    """Orthonormal p_{k,n}(x)."""
    return eval_orthopoly_normalized(t, k, x) * math.exp(-0.5 * t.log_mu0)


def log_leading_coeff(t: RecurrenceTable, k: int) -> float:
    return -0.5 * t.log_mu0 - float(np.sum(np.log(t.offdiag[:k])))


def leading_coeff(t: RecurrenceTable, k: int) -> float:
    """gamma_{k,n} = mu0^(-1/2) / (c_1 ... c_k)."""
    return math.exp(log_leading_coeff(t, k))


def _log_w(t: RecurrenceTable, x):
    return eval_log_weight(t.potential, t.ensemble, x)


def _prefactor(t, x, y):
    return np.exp(0.5 * _log_w(t, x) + 0.5 * _log_w(t, y) - t.log_mu0)


def _degree(t: RecurrenceTable, n: int | None) -> int:
    n = t.ensemble.n if n is None else n
    if n < 1 or n > t.degree:
        raise ValueError(f"kernel degree {n} not available in a table of degree {t.degree}")
    return n


def kernel_sum(t: RecurrenceTable, x, y, n: int | None = None):
    """K_n by direct summation over j < n."""
    n = _degree(t, n)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    qx = _normalized_family(t, n - 1, x)
    qy = _normalized_family(t, n - 1, y)
    out = _prefactor(t, x, y) * np.sum(qx * qy, axis=0)
    return float(out) if np.ndim(out) == 0 else out


def _confluent(t, x, n):
    """K_n(x, x) = w(x) c_n (p_n' p_{n-1} - p_{n-1}' p_n)."""
    q, dq = _normalized_family(t, n, x, with_derivative=True)
    return _prefactor(t, x, x) * t.offdiag[n - 1] * (dq[n] * q[n - 1] - dq[n - 1] * q[n])


def cd_kernel(t: RecurrenceTable, x, y, n: int | None = None, *, switch: float = 1e-6):
    """Christoffel-Darboux quotient form, confluent form when |x - y| < switch / n."""
    n = _degree(t, n)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    close = np.abs(x - y) < switch / n
    mid = 0.5 * (x + y)
    xs = np.where(close, mid, x)
    ys = np.where(close, mid + 1.0, y)  # harmless placeholder, replaced below
    qx = _normalized_family(t, n, xs)
    qy = _normalized_family(t, n, ys)
    num = qx[n] * qy[n - 1] - qx[n - 1] * qy[n]
    with np.errstate(divide="ignore", invalid="ignore"):
        quotient = _prefactor(t, xs, ys) * t.offdiag[n - 1] * num / (xs - ys)
    out = quotient
    if np.any(close):
        out = np.where(close, _confluent(t, mid, n), quotient)
    return float(out) if out.ndim == 0 else out


def kernel_via_Y(t: RecurrenceTable, x, y, n: int | None = None, *, switch: float = 1e-6):
    """K_n from the first column of the Riemann-Hilbert solution Y.

    Y_11 = p_n / gamma_n and Y_21 = -2 pi i gamma_{n-1} p_{n-1}, and

        K_n(x, y) = w(x)^(1/2) w(y)^(1/2) (Y_11(y) Y_21(x) - Y_21(y) Y_11(x)) / (2 pi i (x - y)).
    """
    n = _degree(t, n)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    half = -0.5 * t.log_mu0
    s11 = math.exp(half - log_leading_coeff(t, n))
    s21 = -2j * math.pi * math.exp(half + log_leading_coeff(t, n - 1))
    root_w = lambda u: np.exp(0.5 * _log_w(t, u))  # noqa: E731

    close = np.abs(x - y) < switch / n
    mid = 0.5 * (x + y)
    xs = np.where(close, mid, x)
    ys = np.where(close, mid + 1.0, y)
    qx, dqx = _normalized_family(t, n, xs, with_derivative=True)
    qy = _normalized_family(t, n, ys)
    y11x, y21x = s11 * qx[n], s21 * qx[n - 1]
    y11y, y21y = s11 * qy[n], s21 * qy[n - 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        val = root_w(xs) * root_w(ys) * (y11y * y21x - y21y * y11x) / (2j * math.pi * (xs - ys))
    if np.any(close):
        # derivative of the numerator in y at y = x
        d11, d21 = s11 * dqx[n], s21 * dqx[n - 1]
        diag = np.exp(_log_w(t, xs)) * (d11 * y21x - d21 * y11x) / (2j * math.pi * -1.0)
        val = np.where(close, diag, val)
    out = val.real
    return float(out) if out.ndim == 0 else out
