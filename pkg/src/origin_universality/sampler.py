"""Single-site Metropolis sampling of the log-gas

    P(x) ~ prod_{i<j} |x_i - x_j|^2  prod_i |x_i|^(2 alpha) exp(-n V(x_i)).

Random numbers come from numpy's PCG64 generator (``numpy.random.default_rng``)
seeded with a 64-bit integer, so a chain is reproducible bit for bit.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import kstest

from .equilibrium import EquilibriumData, equilibrium_cdf, solve_equilibrium_one_band
from .potential import EnsembleParams, Potential, eval_potential, require_admissible

__all__ = [
    "McmcConfig",
    "ChainSummary",
    "AcceptanceWarning",
    "log_target",
    "metropolis_accept",
    "run_chain",
    "run_chains",
    "default_proposal_scale",
    "DEFAULT_BINS",
]

DEFAULT_BINS = 61  # odd, so that 0 sits at the centre of a bin
_ACCEPT_RANGE = (0.05, 0.95)


class AcceptanceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class McmcConfig:
    n_particles: int
    sweeps: int
    burn_in: int
    proposal_scale: float
    seed: int

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("need at least one particle")
        if not self.sweeps > self.burn_in >= 0:
            raise ValueError("need sweeps > burn_in >= 0")
        if not self.proposal_scale > 0:
            raise ValueError("proposal_scale must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class ChainSummary:
    bin_edges: np.ndarray
    counts: np.ndarray
    underflow: int
    overflow: int
    recorded: int
    acceptance_rate: float
    ks_distance: float
    seed: int
    ks_checkpoints: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.counts.sum()) + self.underflow + self.overflow != self.recorded:
            raise ValueError("histogram counts do not add up to the recorded samples")

    @property
    def acceptance_flagged(self) -> bool:
        return not (_ACCEPT_RANGE[0] < self.acceptance_rate < _ACCEPT_RANGE[1])

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.recorded * np.diff(self.bin_edges))

    def bin_containing(self, x: float) -> int:
        return int(np.searchsorted(self.bin_edges, x, side="right") - 1)

    def to_record(self) -> dict:
        return {
            "seed": self.seed,
            "recorded": self.recorded,
            "underflow": self.underflow,
            "overflow": self.overflow,
            "acceptance_rate": self.acceptance_rate,
            "acceptance_flagged": self.acceptance_flagged,
            "ks_distance": self.ks_distance,
            "ks_checkpoints": {str(k): v for k, v in self.ks_checkpoints.items()},
        }


def log_target(p: Potential, e: EnsembleParams, x) -> float:
    """Unnormalized log density; -inf for coincident points, +inf marks a zero coordinate with alpha < 0."""
    x = np.asarray(x, dtype=float).ravel()
    a = e.alpha
    if np.any(x == 0):
        if a < 0:
            return math.inf
        if a > 0:
            return -math.inf
    diff = np.abs(x[:, None] - x[None, :])[np.triu_indices(x.size, 1)]
    if np.any(diff == 0):
        return -math.inf
    single = -e.n * np.sum(eval_potential(p, x))
    if a != 0:
        single += 2 * a * np.sum(np.log(np.abs(x)))
    return float(2 * np.sum(np.log(diff)) + single)


def metropolis_accept(log_ratio: float, u: float) -> bool:
    return log_ratio >= 0 or u < math.exp(log_ratio)


def default_proposal_scale(eq: EquilibriumData, n_particles: int) -> float:
    return (eq.right - eq.left) / math.sqrt(n_particles)


def _initial_state(eq: EquilibriumData, n: int) -> np.ndarray:
    k = np.arange(n)
    x = eq.center + eq.radius * np.cos(math.pi * (k + 0.5) / n)
    x[x == 0] = 0.5 * eq.radius / n
    return np.sort(x)


def _horner(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _site_delta(coeffs, n_weight, alpha, x, i, new):
    """Change in log target when particle i moves to ``new``."""
    old = x[i]
    num = new - x
    den = old - x
    num[i] = den[i] = 1.0
    d = 2.0 * float(np.sum(np.log(np.abs(num / den))))
    d -= n_weight * (_horner(coeffs, new) - _horner(coeffs, old))
    if alpha != 0:
        d += 2.0 * alpha * math.log(abs(new / old))
    return d


def run_chain(
    p: Potential,
    e: EnsembleParams,
    cfg: McmcConfig,
    eq: EquilibriumData | None = None,
    *,
    bins: int = DEFAULT_BINS,
    checkpoints=(),
) -> ChainSummary:
    """Metropolis sweeps with Gaussian single-site proposals.

    Every particle position after burn-in enters the histogram and the KS
    statistic against the equilibrium CDF.  ``checkpoints`` lists sweep counts
    at which the KS distance of the samples gathered so far is also recorded.
    """
    require_admissible(p, e)
    if e.n != cfg.n_particles:
        raise ValueError("ensemble n must equal the particle count")
    if bins % 2 == 0:
        raise ValueError("bin count must be odd")
    eq = solve_equilibrium_one_band(p) if eq is None else eq
    n = cfg.n_particles
    rng = np.random.default_rng(cfg.seed)
    x = _initial_state(eq, n)
    accepted = 0
    coeffs = tuple(float(c) for c in p.coefficients)
    samples = np.empty((cfg.sweeps - cfg.burn_in, n))
    checkpoints = sorted(int(c) for c in checkpoints)
    for sweep in range(cfg.sweeps):
        steps = rng.normal(scale=cfg.proposal_scale, size=n)
        uniforms = rng.random(n)
        for i in range(n):
            new = x[i] + steps[i]
            if new == 0 and e.alpha != 0:
                continue
            if metropolis_accept(_site_delta(coeffs, e.n, e.alpha, x, i, new), uniforms[i]):
                x[i] = new
                accepted += 1
        if sweep >= cfg.burn_in:
            samples[sweep - cfg.burn_in] = x

    cdf = lambda s: equilibrium_cdf(eq, s)  # noqa: E731
    ks_marks = {}
    for c in checkpoints:
        if cfg.burn_in < c <= cfg.sweeps:
            ks_marks[c] = float(kstest(samples[: c - cfg.burn_in].ravel(), cdf).statistic)
    flat = samples.ravel()
    half = 1.25 * max(abs(eq.left), abs(eq.right))
    edges = np.linspace(-half, half, bins + 1)
    counts, _ = np.histogram(flat, bins=edges)
    summary = ChainSummary(
        bin_edges=edges,
        counts=counts,
        underflow=int(np.sum(flat < edges[0])),
        overflow=int(np.sum(flat > edges[-1])),
        recorded=int(flat.size),
        acceptance_rate=accepted / (cfg.sweeps * n),
        ks_distance=float(kstest(flat, cdf).statistic),
        seed=cfg.seed,
        ks_checkpoints=ks_marks,
    )
    if summary.acceptance_flagged:
        warnings.warn(
            f"acceptance rate {summary.acceptance_rate:.3f} outside {_ACCEPT_RANGE}; proposal scale is mis-tuned",
            AcceptanceWarning,
            stacklevel=2,
        )
    return summary


def _run_one(args):
    p, e, cfg, eq, bins, checkpoints = args
    return run_chain(p, e, cfg, eq, bins=bins, checkpoints=checkpoints)


def run_chains(p, e, configs, eq=None, *, bins=DEFAULT_BINS, checkpoints=(), workers: int = 1) -> list[ChainSummary]:
    """Independent chains, optionally in separate processes; results keep the input order."""
    eq = solve_equilibrium_one_band(p) if eq is None else eq
    jobs = [(p, e, cfg, eq, bins, tuple(checkpoints)) for cfg in configs]
    if workers <= 1 or len(jobs) == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))
