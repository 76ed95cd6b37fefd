import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import logsumexp

from origin_universality import orthopoly as O
from origin_universality.potential import EnsembleParams, Potential

from conftest import GAUSSIAN, SKEWED

mp = pytest.importorskip("mpmath")


def test_hermite_recurrence():
    t = O.build_table(GAUSSIAN, EnsembleParams(0.0, 1), K=20)
    assert np.max(np.abs(t.offdiag - np.sqrt(np.arange(1, 21) / 2))) < 1e-10
    assert np.max(np.abs(t.diag)) < 1e-12
    t4 = O.build_table(GAUSSIAN, EnsembleParams(0.0, 4), K=20)
    assert np.max(np.abs(t4.offdiag - np.sqrt(np.arange(1, 21) / 8))) < 1e-10


def test_generalized_hermite_against_gram_schmidt():
    # brute-force moments in extended precision; alpha = 1, n = 1, weight x^2 e^{-x^2}
    mp.mp.dps = 60
    K = 12
    mom = [mp.mpf(0) if k % 2 else mp.gamma(mp.mpf(k + 3) / 2) for k in range(2 * K + 2)]
    # Lanczos in exact moment arithmetic via Cholesky of the Hankel matrix
    H = mp.matrix(K + 1, K + 1)
    for i in range(K + 1):
        for j in range(K + 1):
            H[i, j] = mom[i + j]
    L = mp.cholesky(H)
    c_ref = [float(L[k, k] / L[k - 1, k - 1]) for k in range(1, K + 1)]
    t = O.build_table(GAUSSIAN, EnsembleParams(1.0, 1), K=K)
    assert np.max(np.abs(t.offdiag[:K] - np.array(c_ref))) < 1e-10


def test_masses_against_closed_forms():
    for a in (-0.25, 1.0):
        q = O.build_quadrature(GAUSSIAN, EnsembleParams(a, 1), 10)
        assert math.exp(logsumexp(q.log_weights)) == pytest.approx(math.gamma(a + 0.5), rel=1e-10)
        assert np.all(np.diff(q.nodes) > 0)
    q = O.build_quadrature(GAUSSIAN, EnsembleParams(1.0, 1), 10)
    second = float(np.sum(q.nodes**2 * np.exp(q.log_weights)))
    assert second == pytest.approx(math.gamma(2.5), rel=1e-12)


def test_symmetric_nodes():
    q = O.build_quadrature(GAUSSIAN, EnsembleParams(0.0, 1), 10)
    assert np.allclose(q.nodes, -q.nodes[::-1], atol=1e-13)


def test_orthonormality_and_parity():
    t = O.build_table(SKEWED, EnsembleParams(0.5, 6), K=14)
    q = O.build_quadrature(SKEWED, EnsembleParams(0.5, 6), 14)
    w = np.exp(q.log_weights)
    P = np.array([O.eval_orthopoly(t, k, q.nodes) for k in range(13)])
    gram = (P * w) @ P.T
    assert np.max(np.abs(gram - np.eye(13))) < 1e-10
    g = O.build_table(GAUSSIAN, EnsembleParams(0.5, 6), K=10)
    x = np.linspace(0.1, 1.5, 7)
    for k in range(10):
        assert np.allclose(O.eval_orthopoly(g, k, -x), (-1) ** k * O.eval_orthopoly(g, k, x), rtol=1e-12, atol=1e-14)
    assert np.allclose(O.eval_orthopoly(g, 0, x), g.mu0**-0.5)


def test_leading_coefficient():
    t = O.build_table(GAUSSIAN, EnsembleParams(0.0, 1), K=8)
    # orthonormal Hermite: gamma_k = (2^k / (sqrt(pi) k!))^(1/2)
    for k in range(8):
        assert O.leading_coeff(t, k) == pytest.approx(math.sqrt(2**k / (math.sqrt(math.pi) * math.factorial(k))), rel=1e-12)


def test_kernel_forms_agree():
    rng = np.random.default_rng(5)
    for a in (0.0, 1.0, -0.25):
        t = O.build_table(GAUSSIAN, EnsembleParams(a, 16))
        x, y = rng.uniform(-1.3, 1.3, 60), rng.uniform(-1.3, 1.3, 60)
        scale = np.sqrt(O.kernel_sum(t, x, x) * O.kernel_sum(t, y, y))
        k1, k2, k3 = O.cd_kernel(t, x, y), O.kernel_sum(t, x, y), O.kernel_via_Y(t, x, y)
        assert np.max(np.abs(k1 - k2) / scale) < 1e-9
        assert np.max(np.abs(k3 - k1) / scale) < 1e-12
        assert np.allclose(O.cd_kernel(t, x, y), O.cd_kernel(t, y, x), rtol=1e-13, atol=0)
        # confluent forms
        assert np.max(np.abs(O.kernel_via_Y(t, x, x) - O.cd_kernel(t, x, x)) / O.cd_kernel(t, x, x)) < 1e-12
        assert np.all(O.cd_kernel(t, x, x) > 0)


def test_hermite_k1_closed_form():
    t = O.build_table(GAUSSIAN, EnsembleParams(0.0, 1))
    for x, y in ((0.3, -0.7), (1.1, 0.2)):
        assert O.kernel_via_Y(t, x, y) == pytest.approx(math.exp(-(x * x + y * y) / 2) / math.sqrt(math.pi), rel=1e-12)


def test_trace_equals_n():
    for n in (4, 9, 16):
        t = O.build_table(SKEWED, EnsembleParams(0.3, n))
        total, _ = quad(lambda s: O.cd_kernel(t, s, s), -4, 4, points=[0.0], limit=400, epsabs=1e-12)
        assert total == pytest.approx(n, abs=1e-8)


def test_reproducing_property():
    n = 10
    e = EnsembleParams(0.5, n)
    t = O.build_table(GAUSSIAN, e)
    q = O.build_quadrature(GAUSSIAN, e, n + 1)
    s = q.nodes[np.abs(q.nodes) > 0]
    lw = q.log_weights[np.abs(q.nodes) > 0]
    from origin_universality.potential import eval_log_weight

    # K_n(x,s) K_n(s,y) / w(s) integrated against the quadrature measure
    bookkeeping = np.exp(lw - eval_log_weight(GAUSSIAN, e, s))
    for x, y in ((0.2, -0.5), (0.9, 0.9)):
        val = np.sum(O.kernel_sum(t, x, s) * O.kernel_sum(t, s, y) * bookkeeping)
        assert val == pytest.approx(O.kernel_sum(t, x, y), abs=1e-8)


def test_degree_limits():
    t = O.build_table(GAUSSIAN, EnsembleParams(0.0, 4))
    with pytest.raises(ValueError):
        O.cd_kernel(t, 0.1, 0.2, n=t.degree + 1)
    with pytest.raises(ValueError):
        O.eval_orthopoly(t, t.degree + 1, 0.3)


def test_negative_alpha_pole_at_zero():
    t = O.build_table(GAUSSIAN, EnsembleParams(-0.25, 4))
    with pytest.raises(ZeroDivisionError):
        O.cd_kernel(t, 0.0, 0.3)


def test_record_roundtrip():
    t = O.build_table(GAUSSIAN, EnsembleParams(0.0, 3))
    rec = t.to_record()
    assert rec["n"] == 3 and len(rec["offdiag"]) == 4
