import cmath
import math

import numpy as np
import pytest

from origin_universality import szego as S
from origin_universality.equilibrium import SupportBands

TWO_BANDS = SupportBands(((-1.5, -0.7), (-0.3, 1.0)))
ONE_BAND = SupportBands(((-math.sqrt(2), math.sqrt(2)),))


def test_alpha_zero_is_trivial():
    band, gaps = S.band_gap_moments(TWO_BANDS, 0.0, 0)
    assert band == 0
    sd = S.solve_xi(TWO_BANDS, 0.0)
    assert np.all(sd.xi == 0)
    assert sd.d_infinity == 1
    assert S.eval_phi_szego(sd, 0.3 + 0.4j) == 0
    rep = S.check_szego(sd)
    assert max(rep.band_jump_residual, rep.gap_jump_residual, rep.linear_residual) <= 1e-12


def test_single_band_moment_is_real():
    band, gaps = S.band_gap_moments(SupportBands(((-1.0, 1.0),)), 0.7, 0)
    assert gaps == []
    assert abs(band.imag) < 1e-14


def test_gap_integral_sign():
    sd = S.solve_xi(TWO_BANDS, 1.0)
    seg = [s for s in sd.segments if not s.is_band][0]
    x = np.linspace(seg.lo, seg.hi, 9)[1:-1]
    vals = np.real(seg.inv_root(x))
    assert np.all(vals > 0) or np.all(vals < 0)


def test_empty_xi_for_one_band():
    sd = S.solve_xi(ONE_BAND, 0.5)
    assert sd.xi.size == 0


def test_closed_form_one_band():
    r = math.sqrt(2)
    sd = S.solve_xi(ONE_BAND, 0.5)
    assert sd.d_infinity == pytest.approx((r / 2) ** 0.5, rel=1e-12)
    z = 0.3 + 0.2j
    t = z / r
    ref = cmath.exp(0.5 * cmath.log(z / (t + cmath.sqrt(t - 1) * cmath.sqrt(t + 1))))
    assert S.eval_D(sd, z) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, -0.25])
def test_two_band_jumps(alpha):
    sd = S.solve_xi(TWO_BANDS, alpha)
    rep = S.check_szego(sd)
    assert rep.band_jump_residual <= 1e-8
    assert rep.gap_jump_residual <= 1e-8
    assert rep.linear_residual <= 1e-10
    assert rep.bounded_variation <= 2.0
    assert rep.inverse_bounded_variation <= 2.0
    assert rep.d_infinity_crosscheck < 1e-5


def test_phi_converges_at_infinity():
    sd = S.solve_xi(TWO_BANDS, 1.0)
    vals = [S.eval_phi_szego(sd, 1j * R) for R in (1e2, 1e3, 1e4)]
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    assert d2 < d1 / 5
    for th in (math.pi / 4, math.pi / 2, 3 * math.pi / 4):
        assert abs(S.eval_phi_szego(sd, 1e3 * cmath.exp(1j * th))) <= 10 * abs(S.eval_phi_szego(sd, 1e2 * cmath.exp(1j * th)))


def test_schwarz_symmetry_and_positivity():
    sd = S.solve_xi(TWO_BANDS, 0.5)
    z = -0.4 + 0.35j
    assert S.eval_phi_szego(sd, z.conjugate()) == pytest.approx(np.conj(S.eval_phi_szego(sd, z)), abs=1e-13)
    d = S.eval_D(sd, 1.7)
    assert abs(d.imag) < 1e-14 and d.real > 0


def test_reflection_symmetry():
    sd1 = S.solve_xi(TWO_BANDS, 1.0)
    sd2 = S.solve_xi(SupportBands(((-1.0, 0.3), (0.7, 1.5))), 1.0)
    assert np.allclose(sd2.xi, -sd1.xi[::-1], atol=1e-10)


def test_cut_requires_side():
    sd = S.solve_xi(TWO_BANDS, 0.5)
    with pytest.raises(ValueError):
        S.eval_D(sd, 0.5)


def test_origin_outside_band_rejected():
    with pytest.raises(S.SzegoError):
        S.solve_xi(SupportBands(((-1.0, -0.2), (0.3, 1.0))), 0.5)
    with pytest.raises(S.SzegoError):
        S.solve_xi(SupportBands(((-1.0, 1e-13), (0.3, 1.0))), 0.5)
