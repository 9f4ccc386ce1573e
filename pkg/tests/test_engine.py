import math

import pytest
from hypothesis import given, settings, strategies as st

from proca_lifshitz.constants import C, HBAR, GeometryField, ReducedPoint, from_reduced
from proca_lifshitz.engine import (SolverConfig, System, casimir_force, free_energy, free_energy_reduced,
                                   free_energy_te, free_energy_tm, reduced_energy_parts, zero_temperature_energy)
from proca_lifshitz.limits import massless_lifshitz_energy
from proca_lifshitz.materials import PEC, VACUUM, ConstantDispersion, Plasma
from proca_lifshitz.quadrature import ConvergenceError

ZETA3 = 1.2020569031595942

# reference values from 30-40 digit mpmath quadrature of independent transcriptions
EPS0_PC_LAM8 = -7.1709839866624428051e-8
EPS0_PC_LAM1 = -0.0066299393694230554757
TE_PLASMA_1_02_2 = -0.017207769371614167888


def _plates(lam, alpha, theta, d=1e-6):
    geom, omega_p = from_reduced(ReducedPoint(lam, alpha, theta), d)
    return (System(PEC) if math.isinf(omega_p) else System(Plasma(omega_p))), geom


def test_perfect_conductor_zero_temperature_massless():
    assert zero_temperature_energy(ReducedPoint(0.0, 0.0, 0.0)) == pytest.approx(-math.pi**2 / 720, rel=1e-12)


@pytest.mark.parametrize("lam, ref", [(8.0, EPS0_PC_LAM8), (1.0, EPS0_PC_LAM1)])
def test_perfect_conductor_zero_temperature_massive(lam, ref):
    assert zero_temperature_energy(ReducedPoint(lam, 0.0, 0.0)) == pytest.approx(ref, rel=1e-11)


def test_classical_limit_reduced():
    assert free_energy_reduced(ReducedPoint(0.0, 0.0, 50.0)) == pytest.approx(-ZETA3 / 4, rel=1e-13)


def test_te_part_against_reference():
    te, tm, err, _ = reduced_energy_parts(ReducedPoint(1.0, 0.2, 2.0))
    assert te == pytest.approx(TE_PLASMA_1_02_2, rel=1e-12)
    assert err < 1e-10 * abs(te + tm)


@settings(max_examples=12, deadline=None)
@given(st.floats(0.0, 4.0), st.one_of(st.just(0.0), st.floats(1e-6, 0.5)), st.floats(0.2, 8.0))
def test_si_path_matches_reduced_path(lam, alpha, theta):
    system, geom = _plates(lam, alpha, theta)
    si = free_energy(system, geom).reduced_thermal
    assert si == pytest.approx(free_energy_reduced(ReducedPoint(lam, alpha, theta)), rel=1e-10)


def test_te_plus_tm_is_total():
    system, geom = _plates(0.7, 0.1, 1.5)
    total = free_energy(system, geom)
    te, tm = free_energy_te(system, geom), free_energy_tm(system, geom)
    assert te.value_joule + tm.value_joule == pytest.approx(total.value_joule, rel=1e-10)
    assert total.te_part == pytest.approx(te.value_joule, rel=1e-10)


def test_dielectric_gap_against_lifshitz():
    system = System(Plasma(3e14), ConstantDispersion(2.0, 1.0), Plasma(5e14))
    geom = GeometryField(1e-6, T_temp=300.0)
    got = free_energy(system, geom).value_joule
    assert got == pytest.approx(massless_lifshitz_energy(system, geom).value_joule, rel=1e-10)


@settings(max_examples=8, deadline=None)
@given(st.floats(1e14, 1e16), st.floats(1e14, 1e16), st.floats(0.0, 2.0), st.floats(0.5, 5.0))
def test_swapping_slabs_leaves_energy(wl, wr, lam, theta):
    d = 1e-6
    geom, _ = from_reduced(ReducedPoint(lam, 0.0, theta), d)
    a = free_energy(System(Plasma(wl), VACUUM, Plasma(wr)), geom).value_joule
    b = free_energy(System(Plasma(wr), VACUUM, Plasma(wl)), geom).value_joule
    assert a == pytest.approx(b, rel=1e-11)
    assert a < 0


def test_energy_scales_with_area():
    system, geom = _plates(0.3, 0.05, 1.0)
    e1 = free_energy(system, geom).value_joule
    e3 = free_energy(system, GeometryField(geom.d, 3.0, geom.m_mass, geom.T_temp)).value_joule
    assert e3 == pytest.approx(3 * e1, rel=1e-14)


def test_zero_temperature_force():
    d = 1e-6
    fr = casimir_force(System(PEC), GeometryField(d))
    assert fr.force == pytest.approx(-math.pi**2 * HBAR * C / (240 * d**4), rel=1e-10)
    exact = -math.pi**2 * HBAR * C / (240 * d**4)
    assert abs(fr.force - exact) <= fr.est_abs_error < 1e-7 * abs(exact)


def test_force_is_smooth_in_step():
    system, geom = _plates(1.2, 0.1, 2.0)
    a = casimir_force(system, geom, SolverConfig(fd_rel_step=1e-3)).force
    b = casimir_force(system, geom, SolverConfig(fd_rel_step=1e-5)).force
    assert a == pytest.approx(b, rel=1e-8)


def test_budget_exhaustion_is_reported():
    system, geom = _plates(0.0, 0.0, 0.01)
    with pytest.raises(ConvergenceError):
        free_energy(system, geom, SolverConfig(max_matsubara=5))


@pytest.mark.parametrize("kwargs", [dict(rel_tol=0.0), dict(rel_tol=2.0), dict(max_matsubara=0),
                                    dict(fd_rel_step=0.0)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_system_validation():
    with pytest.raises(ValueError):
        System(PEC, ConstantDispersion(2.0, 1.0))
    with pytest.raises(ValueError):
        System(Plasma(1e15), PEC)


@pytest.mark.parametrize("alpha", [0.0, 0.1])
@pytest.mark.parametrize("lam", [1e-20, 1e-45, 1e-93])
def test_vanishing_mass_reaches_massless_value(lam, alpha):
    ref = free_energy_reduced(ReducedPoint(0.0, alpha, 1.0))
    assert free_energy_reduced(ReducedPoint(lam, alpha, 1.0)) == pytest.approx(ref, rel=1e-13)
    system, geom = _plates(lam, alpha, 1.0)
    assert free_energy(system, geom).reduced_thermal == pytest.approx(ref, rel=1e-13)
