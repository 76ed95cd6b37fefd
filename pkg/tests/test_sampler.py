import math

import numpy as np
import pytest

from origin_universality import sampler as M
from origin_universality.potential import EnsembleParams

from conftest import GAUSSIAN


def test_log_target_examples():
    assert M.log_target(GAUSSIAN, EnsembleParams(0.0, 1), [0.0]) == 0.0
    e = EnsembleParams(0.5, 2)
    assert M.log_target(GAUSSIAN, e, [0.3, -0.8]) == pytest.approx(M.log_target(GAUSSIAN, e, [-0.8, 0.3]), rel=1e-15)
    e0 = EnsembleParams(0.0, 2)
    # log(4) - 2*2 versus log(0.25) - 2*1.25
    assert M.log_target(GAUSSIAN, e0, [-1, 1]) == pytest.approx(math.log(4) - 4, rel=1e-14)
    assert M.log_target(GAUSSIAN, e0, [-1, 1]) > M.log_target(GAUSSIAN, e0, [0.5, 1])
    assert M.log_target(GAUSSIAN, e0, [0.4, 0.4]) == -math.inf
    assert M.log_target(GAUSSIAN, EnsembleParams(1.0, 2), [0.0, 1.0]) == -math.inf
    assert M.log_target(GAUSSIAN, EnsembleParams(-0.25, 2), [0.0, 1.0]) == math.inf


def test_site_delta_matches_target():
    rng = np.random.default_rng(1)
    e = EnsembleParams(0.7, 6)
    coeffs = tuple(GAUSSIAN.coefficients)
    x = rng.normal(size=6)
    for i in range(6):
        new = x[i] + 0.3
        y = x.copy()
        y[i] = new
        ref = M.log_target(GAUSSIAN, e, y) - M.log_target(GAUSSIAN, e, x)
        assert M._site_delta(coeffs, e.n, e.alpha, x.copy(), i, new) == pytest.approx(ref, abs=1e-11)


def test_metropolis_detailed_balance():
    # symmetric proposal between two 2-particle states; accept frequencies balance the target ratio
    e = EnsembleParams(0.5, 2)
    a, b = [-0.9, 0.6], [-0.4, 0.6]
    la, lb = M.log_target(GAUSSIAN, e, a), M.log_target(GAUSSIAN, e, b)
    u = np.random.default_rng(7).random(200_000)
    p_ab = np.mean([M.metropolis_accept(lb - la, s) for s in u])
    p_ba = np.mean([M.metropolis_accept(la - lb, s) for s in u])
    assert math.exp(la) * p_ab == pytest.approx(math.exp(lb) * p_ba, rel=0.01)
    assert max(p_ab, p_ba) == 1.0


def test_config_validation():
    with pytest.raises(ValueError):
        M.McmcConfig(10, 100, 100, 0.1, 0)
    with pytest.raises(ValueError):
        M.McmcConfig(10, 100, 10, 0.0, 0)
    with pytest.raises(ValueError):
        M.McmcConfig(10, 100, 10, 0.1, -1)
    with pytest.raises(ValueError):
        M.run_chain(GAUSSIAN, EnsembleParams(0.0, 5), M.McmcConfig(6, 20, 5, 0.3, 0))
    with pytest.raises(ValueError):
        M.run_chain(GAUSSIAN, EnsembleParams(0.0, 5), M.McmcConfig(5, 20, 5, 0.3, 0), bins=60)


def test_determinism(semicircle):
    cfg = M.McmcConfig(12, 300, 50, M.default_proposal_scale(semicircle, 12), 42)
    e = EnsembleParams(0.0, 12)
    r1 = M.run_chain(GAUSSIAN, e, cfg, semicircle)
    r2 = M.run_chain(GAUSSIAN, e, cfg, semicircle)
    assert np.array_equal(r1.counts, r2.counts)
    assert r1.ks_distance == r2.ks_distance
    r3 = M.run_chain(GAUSSIAN, e, M.McmcConfig(12, 300, 50, cfg.proposal_scale, 43), semicircle)
    assert not np.array_equal(r1.counts, r3.counts)


def test_parallel_matches_serial(semicircle):
    e = EnsembleParams(0.0, 10)
    cfgs = [M.McmcConfig(10, 200, 20, 0.4, s) for s in (1, 2)]
    serial = M.run_chains(GAUSSIAN, e, cfgs, semicircle)
    par = M.run_chains(GAUSSIAN, e, cfgs, semicircle, workers=2)
    for a, b in zip(serial, par):
        assert np.array_equal(a.counts, b.counts)


def test_ks_improves_with_sweeps(semicircle):
    n = 50
    scale = M.default_proposal_scale(semicircle, n)
    cfgs = [M.McmcConfig(n, 4000, 500, scale, s) for s in range(5)]
    runs = M.run_chains(GAUSSIAN, EnsembleParams(0.0, n), cfgs, semicircle, checkpoints=(1000, 4000), workers=5)
    early = np.median([c.ks_checkpoints[1000] for c in runs])
    late = np.median([c.ks_checkpoints[4000] for c in runs])
    assert late < early
    r = runs[0]
    assert r.ks_distance == r.ks_checkpoints[4000] < 0.05
    assert r.counts.sum() + r.underflow + r.overflow == r.recorded == 3500 * n
    assert not r.acceptance_flagged
    z = r.bin_containing(0.0)
    assert r.bin_edges[z] < 0 < r.bin_edges[z + 1]


def test_mis_tuned_proposal_warns(semicircle):
    with pytest.warns(M.AcceptanceWarning):
        M.run_chain(GAUSSIAN, EnsembleParams(0.0, 8), M.McmcConfig(8, 60, 10, 50.0, 3), semicircle)
