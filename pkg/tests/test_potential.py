import math

import numpy as np
import pytest

from origin_universality.potential import (
    AdmissibilityError,
    EnsembleParams,
    Potential,
    eval_log_weight,
    eval_potential,
    eval_potential_derivative,
    require_admissible,
    validate,
)

V2 = Potential((0, 0, 1))


def test_values_and_derivative():
    assert eval_potential(V2, 0.0) == 0.0
    assert eval_potential(V2, 2.0) == 4.0
    assert eval_potential_derivative(V2, 2.0) == 4.0
    assert eval_potential(Potential((0, 0, -1, 0, 0.25)), 1.0) == pytest.approx(-0.75, abs=1e-15)


def test_non_finite_input_rejected():
    with pytest.raises(ValueError):
        eval_potential(V2, math.inf)
    with pytest.raises(ValueError):
        eval_potential(V2, math.nan)


def test_log_weight_cases():
    assert eval_log_weight(V2, EnsembleParams(0.0, 1), 1.0) == pytest.approx(-1.0)
    assert eval_log_weight(V2, EnsembleParams(1.0, 5), 0.0) == -math.inf
    with pytest.raises(ZeroDivisionError):
        eval_log_weight(V2, EnsembleParams(-0.25, 3), 0.0)


def test_log_weight_even_symmetry():
    p = Potential((0.5, 0, -1, 0, 0.3))
    e = EnsembleParams(0.7, 9)
    x = np.random.default_rng(3).uniform(-4, 4, 200)
    assert np.allclose(eval_log_weight(p, e, x), eval_log_weight(p, e, -x), rtol=0, atol=1e-12)


def test_derivative_matches_central_differences():
    p = Potential((0.2, -1.0, 0.5, 0.3, 0.25))
    h = 1e-5
    for x in np.linspace(-5, 5, 41):
        fd = (eval_potential(p, x + h) - eval_potential(p, x - h)) / (2 * h)
        exact = eval_potential_derivative(p, x)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


def test_validate_reports():
    assert validate(V2, EnsembleParams(0.5, 8)) == []
    assert "alpha must exceed -1/2" in validate(V2, EnsembleParams(-0.5, 8))
    assert "even degree required" in validate(Potential((0, 0, 0, 1)))
    msgs = validate(Potential((0, 0, -1)), EnsembleParams(-1.0, 0))
    assert len(msgs) == 3
    with pytest.raises(AdmissibilityError):
        require_admissible(Potential((0, 0, 0, 1)))
