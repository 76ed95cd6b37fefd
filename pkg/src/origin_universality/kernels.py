"""Limit kernels: the origin Bessel kernel, the hard-edge Bessel kernel and the sine kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .specialfn import bessel_j, bessel_j_entire, bessel_j_prime

__all__ = [
    "KernelKind",
    "LimitKernel",
    "eval_origin_bessel",
    "eval_origin_bessel_extended",
    "eval_hard_edge",
    "eval_sine",
    "correlation_det",
    "CONFLUENT_TOL",
]

CONFLUENT_TOL = 1e-6


class KernelKind(str, Enum):
    ORIGIN_BESSEL = "origin_bessel"
    HARD_EDGE_BESSEL = "hard_edge_bessel"
    SINE = "sine"


@dataclass(frozen=True)
class LimitKernel:
    kind: KernelKind
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind != KernelKind.SINE and not self.alpha > -0.5:
            raise ValueError("alpha must exceed -1/2")

    def __call__(self, u: float, v: float) -> float:
        if self.kind == KernelKind.ORIGIN_BESSEL:
            return eval_origin_bessel(self.alpha, u, v)
        if self.kind == KernelKind.HARD_EDGE_BESSEL:
            return eval_hard_edge(self.alpha, u, v)
        return eval_sine(u, v)


def _positive(u, v):
    if not (u > 0 and v > 0):
        raise ValueError("Bessel kernels need u, v > 0")


def _origin_scalar(alpha: float, u: float, v: float) -> float:
    _positive(u, v)
    nu_p, nu_m = alpha + 0.5, alpha - 0.5
    if abs(u - v) < CONFLUENT_TOL:
        s = 0.5 * (u + v)
        x = math.pi * s
        jp, jm = bessel_j(nu_p, x), bessel_j(nu_m, x)
        dp, dm = bessel_j_prime(nu_p, x), bessel_j_prime(nu_m, x)
        return 0.5 * math.pi * math.pi * s * (dp * jm - dm * jp)
    num = bessel_j(nu_p, math.pi * u) * bessel_j(nu_m, math.pi * v) - bessel_j(nu_m, math.pi * u) * bessel_j(
        nu_p, math.pi * v
    )
    return math.pi * math.sqrt(u) * math.sqrt(v) * num / (2.0 * (u - v))


def _extended_scalar(alpha: float, u: float, v: float) -> float:
    if u == 0 or v == 0:
        raise ValueError("extended kernel is evaluated at nonzero arguments")
    scale = math.pi ** (2 * alpha + 1)
    ep = lambda s: bessel_j_entire(alpha + 0.5, math.pi * s)  # noqa: E731
    em = lambda s: bessel_j_entire(alpha - 0.5, math.pi * s)  # noqa: E731
    if abs(u - v) < CONFLUENT_TOL:
        s = 0.5 * (u + v)
        a, b = ep(s), em(s)
        # d/dx [x^-nu J_nu(x)] = -x * x^-(nu+1) J_{nu+1}(x)
        da = -math.pi * math.pi * s * bessel_j_entire(alpha + 1.5, math.pi * s)
        db = -math.pi * math.pi * s * bessel_j_entire(alpha + 0.5, math.pi * s)
        return scale * (a * b + s * (da * b - db * a)) / 2.0
    return scale * (u * ep(u) * em(v) - v * em(u) * ep(v)) / (2.0 * (u - v))


def _hard_edge_scalar(alpha: float, u: float, v: float) -> float:
    _positive(u, v)
    if abs(u - v) < CONFLUENT_TOL:
        s = math.sqrt(0.5 * (u + v))
        j, dj = bessel_j(alpha, s), bessel_j_prime(alpha, s)
        return (dj * dj + (1.0 - alpha * alpha / (s * s)) * j * j) / 4.0
    su, sv = math.sqrt(u), math.sqrt(v)
    num = bessel_j(alpha, su) * sv * bessel_j_prime(alpha, sv) - bessel_j(alpha, sv) * su * bessel_j_prime(alpha, su)
    return num / (2.0 * (u - v))


def _lift(fn):
    def wrapper(*args):
        *lead, u, v = args
        if np.ndim(u) == 0 and np.ndim(v) == 0:
            return fn(*lead, float(u), float(v))
        uu, vv = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        out = np.array([fn(*lead, a, b) for a, b in zip(uu.ravel(), vv.ravel())])
        return out.reshape(uu.shape)

    wrapper.__name__ = fn.__name__
    return wrapper


@_lift
def eval_origin_bessel(alpha: float, u: float, v: float) -> float:
    """The origin Bessel kernel pi sqrt(uv) (J+(pi u) J-(pi v) - J-(pi u) J+(pi v)) / (2(u - v)).

    J+ and J- have orders alpha + 1/2 and alpha - 1/2.  Near the diagonal the
    derivative (confluent) form is used.
    """
    return _origin_scalar(alpha, u, v)


@_lift
def eval_origin_bessel_extended(alpha: float, u: float, v: float) -> float:
    """u^-alpha v^-alpha times the origin kernel, continued to all real u, v != 0.

    Written with the entire functions E_nu(x) = x^-nu J_nu(x):

        pi^(2 alpha + 1) (u E+(pi u) E-(pi v) - v E-(pi u) E+(pi v)) / (2(u - v)).
    """
    return _extended_scalar(alpha, u, v)


@_lift
def eval_hard_edge(alpha: float, u: float, v: float) -> float:
    return _hard_edge_scalar(alpha, u, v)


def eval_sine(u, v):
    """sin(pi(u - v)) / (pi(u - v)), equal to 1 on the diagonal."""
    out = np.sinc(np.asarray(u, dtype=float) - np.asarray(v, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def correlation_det(kernel_values) -> float:
    """det of an m x m kernel matrix via pivoted LU with log-magnitude tracking."""
    m = np.asarray(kernel_values, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("correlation determinant needs a square matrix")
    sign, logdet = np.linalg.slogdet(m)
    if sign == 0:
        return 0.0
    return float(sign * math.exp(logdet))
