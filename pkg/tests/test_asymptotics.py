import math

import pytest

from proca_lifshitz.asymptotics import (Regime, asym_energy, asym_force, classify, te_alpha_expansion_exact,
                                        tm_alpha_expansion_terms)
from proca_lifshitz.constants import GeometryField, ReducedPoint, from_reduced
from proca_lifshitz.engine import System, casimir_force, reduced_energy_parts
from proca_lifshitz.materials import PEC

ZETA3 = 1.2020569031595942
D = 1e-6
GEOM = GeometryField(D)


def _engine(point):
    geom, _ = from_reduced(point, D)
    return casimir_force(System(PEC), geom)


@pytest.mark.parametrize("point, regime", [
    (ReducedPoint(6.0, 0.0, 6.0), Regime.LargeMassHighT),
    (ReducedPoint(6.0, 0.05, 0.05), Regime.LargeMassLowT),
    (ReducedPoint(0.05, 0.0, 20.0), Regime.SmallMassHighT),
    (ReducedPoint(0.05, 0.0, 0.001), Regime.SmallMassLowT_ThetaBelowLambda),
    (ReducedPoint(0.001, 0.0, 0.05), Regime.SmallMassLowT_LambdaBelowTheta),
    (ReducedPoint(1.0, 0.0, 1.0), None),
    (ReducedPoint(6.0, 0.5, 6.0), None),
])
def test_classify(point, regime):
    assert classify(point) is regime


def test_warning_outside_regime():
    v = asym_energy(ReducedPoint(1.0, 0.0, 1.0), GEOM, Regime.LargeMassHighT)
    assert "lambda >= 5" in v.validity_warning and "theta >= 5" in v.validity_warning
    assert asym_energy(ReducedPoint(0.0, 0.0, 50.0), GEOM, Regime.MasslessHighT).validity_warning is None


def test_classical_limit_matches_engine():
    p = ReducedPoint(0.0, 0.0, 50.0)
    fr = _engine(p)
    assert asym_energy(p, GEOM, Regime.MasslessHighT).value == pytest.approx(fr.energy.value_joule, rel=1e-12)
    assert asym_force(p, GEOM, Regime.MasslessHighT).value == pytest.approx(fr.force, rel=1e-9)


def test_low_temperature_series_matches_engine():
    p = ReducedPoint(0.0, 0.0, 0.05)
    fr = _engine(p)
    assert asym_energy(p, GEOM, Regime.MasslessLowT).value == pytest.approx(fr.energy.value_joule, rel=1e-8)
    assert asym_force(p, GEOM, Regime.MasslessLowT).value == pytest.approx(fr.force, rel=1e-8)


def test_small_mass_zero_temperature_matches_engine():
    p = ReducedPoint(0.05, 0.0, 0.0)
    fr = _engine(p)
    got = asym_energy(p, GEOM, Regime.SmallMassLowT_ThetaBelowLambda).value
    assert got == pytest.approx(fr.energy.value_joule, rel=1e-4)


@pytest.mark.parametrize("regime, theta", [(Regime.LargeMassHighT, 20.0), (Regime.LargeMassLowT, 0.0)])
def test_large_mass_force_is_derivative_of_energy(regime, theta):
    # at fixed mass and temperature; agreement improves like 1/lambda
    m_over_d, T_over_d = 40.0, theta

    def energy(d):
        return asym_energy(ReducedPoint(m_over_d * d / D, 0.0, T_over_d * d / D), GeometryField(d), regime).value

    h = 1e-6 * D
    numeric = -(energy(D + h) - energy(D - h)) / (2 * h)
    f = asym_force(ReducedPoint(m_over_d, 0.0, theta), GEOM, regime).value
    assert f / numeric == pytest.approx(1.0, abs=0.05)


def test_te_coefficients():
    a0, _ = te_alpha_expansion_exact(0.0, 50.0)
    assert a0 == pytest.approx(-ZETA3 / 8, rel=1e-14)
    te, _, _, _ = reduced_energy_parts(ReducedPoint(1.0, 0.0, 2.0))
    assert te_alpha_expansion_exact(1.0, 2.0)[0] == pytest.approx(te, rel=1e-12)


def test_tm_coefficients_match_engine_to_first_order():
    lam, theta = 1.0, 2.0
    a0, _ = te_alpha_expansion_exact(lam, theta)
    c0, b1, c1 = tm_alpha_expansion_terms(lam, theta)
    _, tm0, _, _ = reduced_energy_parts(ReducedPoint(lam, 0.0, theta))
    assert tm0 == pytest.approx(a0 + c0, rel=1e-12)
    errs = []
    for alpha in (1e-3, 1e-4):
        _, tm, _, _ = reduced_energy_parts(ReducedPoint(lam, alpha, theta))
        errs.append(abs((tm - tm0) / alpha / (b1 + c1) - 1))
    assert errs[1] < 1e-3
    assert errs[0] / errs[1] == pytest.approx(10.0, rel=0.05)


def test_rejects_zero_temperature():
    with pytest.raises(ValueError):
        te_alpha_expansion_exact(1.0, 0.0)
    with pytest.raises(ValueError):
        tm_alpha_expansion_terms(1.0, 0.0)
