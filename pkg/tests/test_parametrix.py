import cmath
import math

import numpy as np
import pytest

from origin_universality import parametrix as X
from origin_universality.equilibrium import SupportBands, conformal_map_f, solve_equilibrium_one_band
from origin_universality.potential import EnsembleParams, Potential
from origin_universality.szego import solve_xi

ALPHAS = (0.0, 0.5, 1.0, -0.25)


@pytest.fixture(scope="module")
def setup(semicircle):
    return semicircle, {a: solve_xi(semicircle.support, a) for a in ALPHAS}


def test_omega_and_w():
    assert X.eval_omega(0.7, 1.0) == pytest.approx(1.0)
    assert X.eval_omega(0.7, -1.0) == pytest.approx(1.0)
    # principal branch just right of the imaginary axis
    assert X.eval_omega(0.5, complex(1e-12, 1.0)) == pytest.approx(1j, abs=1e-11)
    with pytest.raises(ValueError):
        X.eval_omega(0.5, 2j)


def test_w_modulus_and_ratio(semicircle):
    a = 0.7
    for z in (0.05 + 0.02j, -0.08 + 0.01j, 0.03 - 0.06j, -0.02 - 0.03j):
        f = conformal_map_f(semicircle, z)
        w = X.eval_W(a, f, z)
        # W^2 / omega has modulus one
        assert abs(w * w / X.eval_omega(a, z)) == pytest.approx(1.0, rel=1e-12)
    # modulus |x|^alpha on the real trace, approached just off the axis
    x = 0.07
    w = X.eval_W(a, conformal_map_f(semicircle, complex(x, 1e-12)), complex(x, 1e-12))
    assert abs(w) == pytest.approx(x**a, rel=1e-9)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_psi_jumps_cyclic_det(alpha):
    worst = max(X.psi_jump_residual(alpha, j, r) for j in range(1, 9) for r in (0.5, 5.0))
    assert worst <= 1e-10
    cyc = max(X.psi_cyclic_residual(alpha, r * cmath.exp(1j * (math.pi + 0.1 + 0.5 * k))) for r in (0.5, 5.0) for k in range(2))
    assert cyc <= 1e-10
    for r in (0.5, 2.0, 10.0):
        assert abs(np.linalg.det(X.psi_model(alpha, r * cmath.exp(1j * math.pi / 8))) - 1) <= 1e-10


def test_alpha_zero_degenerate_jumps():
    assert np.allclose(X.jump_matrix(0.0, 3), np.eye(2))
    assert np.allclose(X.jump_matrix(0.0, 7), np.eye(2))


@pytest.mark.parametrize("alpha", [0.3, -0.3])
def test_small_zeta_growth(alpha):
    ms = np.arange(4, 15)
    logs = np.log(2.0**-ms)
    for s in range(1, 9):
        th = (s - 0.5) * math.pi / 4
        vals = np.array([np.abs(X.psi_model(alpha, 2.0**-m * cmath.exp(1j * th))) for m in ms])
        slopes = np.array([[np.polyfit(logs, np.log(vals[:, i, j]), 1)[0] for j in range(2)] for i in range(2)])
        if alpha < 0:
            bound = np.full((2, 2), alpha)
        elif s in (2, 3, 6, 7):
            bound = np.array([[alpha, -alpha], [alpha, -alpha]])
        else:
            bound = np.full((2, 2), -alpha)
        assert np.all(slopes >= bound - 0.01), (s, slopes)


def test_sector_rules():
    assert X.sector_of(1.0 + 0.1j) == 1
    assert X.sector_of(cmath.rect(1, math.pi / 4)) == 2  # ties go counterclockwise
    assert X.sector_of(-1.0 - 0.1j) == 5
    with pytest.raises(ValueError):
        X.psi_model(0.5, 0.0)


def test_outer_parametrix(setup):
    eq, sds = setup
    for a in ALPHAS:
        sd = sds[a]
        devs = [np.max(np.abs(X.outer_parametrix(eq, sd, r * 1j) - np.eye(2))) for r in (1e3, 1e4)]
        assert devs[0] < 1e-2 and devs[1] < devs[0] / 5
        for z in (0.3 + 0.8j, -2.0 - 0.5j, 3.0 + 0j):
            assert abs(np.linalg.det(X.outer_parametrix(eq, sd, z)) - 1) <= 1e-10
        for x in (-1.0, 0.3, 1.2):
            jump = np.array([[0, abs(x) ** (2 * a)], [-abs(x) ** (-2 * a), 0]])
            res = X.outer_parametrix(eq, sd, x, 1) - X.outer_parametrix(eq, sd, x, -1) @ jump
            assert np.max(np.abs(res)) <= 1e-8
        with pytest.raises(ValueError):
            X.outer_parametrix(eq, sd, 0.5)


def test_outer_parametrix_rejects_two_bands(setup):
    eq, _ = setup
    sd2 = solve_xi(SupportBands(((-1.5, -0.7), (-0.3, 1.0))), 0.5)
    with pytest.raises(X.UnsupportedConfiguration):
        X.outer_parametrix(eq, sd2, 1j)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_local_parametrix(setup, alpha):
    eq, sds = setup
    sd = sds[alpha]
    e = EnsembleParams(alpha, 8)
    for z in (0.1 + 0.05j, -0.2 + 0.1j, -0.05 - 0.2j, 0.15 - 0.02j):
        assert abs(np.linalg.det(X.local_parametrix(eq, sd, e, z)) - 1) <= 1e-8
    for x in (0.05, 0.2, -0.05, -0.2):
        ep = X.local_parametrix_parts(eq, sd, e, x, side=1).E
        em = X.local_parametrix_parts(eq, sd, e, x, side=-1).E
        assert np.max(np.abs(ep - em)) <= 1e-8
    for x in (0.05, 0.2):  # the interval (0, delta)
        jump = np.array([[0, x ** (2 * alpha)], [-(x ** (-2 * alpha)), 0]])
        res = X.local_parametrix(eq, sd, e, x, side=1) - X.local_parametrix(eq, sd, e, x, side=-1) @ jump
        assert np.max(np.abs(res)) <= 1e-7
    with pytest.raises(ValueError):
        X.local_parametrix(eq, sd, e, 0.0)
    with pytest.raises(ValueError):
        X.local_parametrix(eq, sd, e, 0.1)


def test_boundary_samples_avoid_rays(semicircle):
    pts = X.boundary_samples(semicircle, semicircle.delta * (1 - 1e-9), 96)
    assert 0 < len(pts) <= 96
    for z in pts:
        f = conformal_map_f(semicircle, z, semicircle.delta)
        th = math.atan2(f.imag, f.real) % (2 * math.pi)
        assert abs(th - math.pi / 4 * round(th / (math.pi / 4))) >= 0.05


def test_matching_alpha_one(setup):
    eq, sds = setup
    rep = X.check_matching(eq, sds[1.0], 1.0, [8, 16, 32, 64])
    assert rep.norm == "max-entry"
    assert np.all(np.diff(rep.max_residual) < 0)
    assert -1.3 <= rep.slope <= -0.7
    assert 1.5 <= rep.ratios[-1] <= 2.6


def test_multiband_potential_unsupported():
    eq = solve_equilibrium_one_band(Potential((0, 0, 1)))
    object.__setattr__(eq, "support", SupportBands(((-1.5, -0.7), (-0.3, 1.0))))
    with pytest.raises(X.UnsupportedConfiguration):
        X.check_matching(eq, solve_xi(eq.support, 0.5), 0.5, [8])
