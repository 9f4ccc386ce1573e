import math

import pytest
from hypothesis import given, strategies as st

from proca_lifshitz.constants import (C, HBAR, K_B, GeometryField, ReducedPoint, energy_scale_thermal,
                                      energy_scale_zeroT, from_reduced, to_reduced)

pos = st.floats(1e-9, 1e-4)
# zero or normal-range values; subnormal T or m underflow in the SI conversion
red = st.one_of(st.just(0.0), st.floats(1e-6, 50.0))


@given(pos, red, st.floats(1e-3, 5.0), red)
def test_reduced_round_trip(d, lam, alpha, theta):
    p = ReducedPoint(lam, alpha, theta)
    geom, omega_p = from_reduced(p, d)
    back = to_reduced(geom, omega_p)
    for a, b in ((back.lam, lam), (back.alpha, alpha), (back.theta, theta)):
        assert a == pytest.approx(b, rel=1e-13, abs=1e-300)


def test_perfect_conductor_has_zero_alpha():
    geom, omega_p = from_reduced(ReducedPoint(1.0, 0.0, 2.0), 1e-6)
    assert math.isinf(omega_p)
    assert to_reduced(geom, omega_p).alpha == 0.0


def test_scales_agree_through_theta():
    # k_B T / (2 pi d^2) equals hbar c theta / (4 pi^2 d^3)
    d, T = 3e-7, 250.0
    geom = GeometryField(d, T_temp=T)
    theta = to_reduced(geom, math.inf).theta
    assert energy_scale_thermal(geom) == pytest.approx(theta * energy_scale_zeroT(geom) / (4 * math.pi**2),
                                                       rel=1e-14)
    assert energy_scale_zeroT(geom) == pytest.approx(HBAR * C / d**3)
    assert K_B > 0


@pytest.mark.parametrize("kwargs", [dict(d=0.0), dict(d=-1.0), dict(d=math.inf), dict(d=1e-6, A=0.0),
                                    dict(d=1e-6, m_mass=-1.0), dict(d=1e-6, T_temp=-3.0)])
def test_geometry_rejects_bad_input(kwargs):
    with pytest.raises(ValueError):
        GeometryField(**kwargs)


def test_reduced_point_rejects_negative():
    with pytest.raises(ValueError):
        ReducedPoint(-1.0, 0.0, 0.0)
    assert ReducedPoint(0.0, 0.0, 0.7).z_n(3) == pytest.approx(2.1)
