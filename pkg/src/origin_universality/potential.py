"""Confining potential V and the varying weight w_n(x) = |x|^(2 alpha) exp(-n V(x))."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = [
    "Potential",
    "EnsembleParams",
    "eval_potential",
    "eval_potential_derivative",
    "eval_log_weight",
    "validate",
    "AdmissibilityError",
]


class AdmissibilityError(ValueError):
    """Raised when a potential or ensemble violates an admissibility rule."""


@dataclass(frozen=True)
class Potential:
    """Real polynomial V(x) = sum_k coefficients[k] x^k."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def degree(self) -> int:
        c = self.coefficients
        d = len(c) - 1
        while d > 0 and c[d] == 0.0:
            d -= 1
        return d

    @property
    def is_even(self) -> bool:
        return all(c == 0.0 for c in self.coefficients[1::2])

    def derivative_coefficients(self) -> np.ndarray:
        return P.polyder(np.asarray(self.coefficients))

    def describe(self) -> str:
        terms = [f"{c:g}*x^{k}" for k, c in enumerate(self.coefficients) if c != 0.0]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class EnsembleParams:
    alpha: float
    n: int


def _finite(x):
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite argument")


def eval_potential(p: Potential, x):
    """V(x) by Horner evaluation; accepts scalars or arrays (real or complex)."""
    _finite(x)
    return P.polyval(x, p.coefficients)


def eval_potential_derivative(p: Potential, x):
    _finite(x)
    return P.polyval(x, p.derivative_coefficients())


def eval_log_weight(p: Potential, e: EnsembleParams, x):
    """log w_n(x) = 2 alpha log|x| - n V(x).

    At x = 0 the value is -inf for alpha > 0 and 0 - nV(0) for alpha = 0;
    alpha < 0 has a pole there and raises ``ZeroDivisionError``.
    """
    x_arr = np.asarray(x, dtype=float)
    _finite(x_arr)
    nv = e.n * eval_potential(p, x_arr)
    if e.alpha == 0:
        out = -nv
    else:
        zero = x_arr == 0
        if e.alpha < 0 and np.any(zero):
            raise ZeroDivisionError("weight has a pole at x = 0 for alpha < 0")
        with np.errstate(divide="ignore"):
            out = 2.0 * e.alpha * np.log(np.abs(x_arr)) - nv
    return float(out) if np.ndim(x) == 0 else out


def validate(p: Potential, e: EnsembleParams | None = None) -> list[str]:
    """List every violated admissibility rule; an empty list means usable."""
    problems = []
    c = p.coefficients
    if not all(math.isfinite(v) for v in c):
        problems.append("coefficients must be finite")
        return problems
    d = p.degree
    if d < 2:
        problems.append("degree must be at least 2")
    if d % 2:
        problems.append("even degree required")
    if c[d] <= 0:
        problems.append("leading coefficient must be positive")
    if e is not None:
        if not math.isfinite(e.alpha) or e.alpha <= -0.5:
            problems.append("alpha must exceed -1/2")
        if int(e.n) != e.n or e.n < 1:
            problems.append("n must be a positive integer")
    return problems


def require_admissible(p: Potential, e: EnsembleParams | None = None) -> None:
    problems = validate(p, e)
    if problems:
        raise AdmissibilityError("; ".join(problems))
