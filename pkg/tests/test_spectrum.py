import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from proca_lifshitz.constants import C, HBAR
from proca_lifshitz.materials import PEC, VACUUM, ConstantDispersion, Plasma
from proca_lifshitz.spectrum import (reflection_te, reflection_te_reduced, reflection_tm, round_trip_factors,
                                     tm_matrices_from_uv, wave_numbers)

D = 1e-6


def _si(z, zn, lam):
    """SI frequency, mass and transverse wave number of a reduced point."""
    k = math.sqrt(max(z * z - zn * zn - lam * lam, 0.0)) / D
    return zn * C / D, lam * HBAR / (C * D), k


point = st.tuples(st.floats(0.0, 4.0), st.floats(0.0, 8.0), st.floats(0.0, 15.0))


@given(point, st.floats(1e-3, 2.0))
def test_te_reflection_matches_reduced_form(p, alpha):
    lam, zn, extra = p
    z = math.hypot(zn, lam) + extra
    xi, m, k = _si(z, zn, lam)
    r = reflection_te(Plasma(C / (alpha * D)), VACUUM, xi, m, k).value
    assert r == pytest.approx(reflection_te_reduced(z, alpha), rel=1e-9, abs=1e-15)
    assert 0.0 <= r <= 1.0


def test_perfect_conductor_entries():
    xi, m, k = _si(2.0, 1.0, 0.5)
    assert reflection_te(PEC, VACUUM, xi, m, k).value == 1.0
    r = reflection_tm(PEC, VACUUM, xi, 0.0, k)
    assert (r.r11, r.r12, r.r22) == (-1.0, 0.0, 0.0)


def test_massless_tm_is_fresnel():
    # r11 = -(eps q - q_s) / (eps q + q_s) for a plasma slab across vacuum
    omega_p, xi, k = 2e15, 3e14, 4e6
    m = Plasma(omega_p)
    eps = m.permittivity_rel(xi)
    q = math.sqrt(k * k + (xi / C) ** 2)
    qs = math.sqrt(k * k + eps * (xi / C) ** 2)
    r = reflection_tm(m, VACUUM, xi, 0.0, k)
    assert r.r11 == pytest.approx(-(eps * q - qs) / (eps * q + qs), rel=1e-13)
    assert r.r12 == 0.0 and r.r22 == 0.0


@settings(max_examples=300)
@given(point, st.floats(0.0, 3.0))
def test_round_trip_factors_are_passive(p, alpha):
    lam, zn, extra = p
    z = math.hypot(zn, lam) + extra + 1e-6
    t = round_trip_factors(z, zn, lam, alpha)
    assert -1e-15 <= t.t_minus <= 1.0 + 1e-12
    assert -1e-15 <= t.t_plus <= 1.0 + 1e-12


@settings(max_examples=300)
@given(point, st.floats(0.0, 1.0))
def test_factorization_against_matrix_product(p, alpha):
    lam, zn, extra = p
    assume(math.hypot(zn, lam) > 1e-6)  # the matrix form degenerates at z_n = lam = 0
    z = math.hypot(zn, lam) + extra + 1e-3
    left, right = tm_matrices_from_uv(z, zn, lam, alpha)
    x = math.exp(-2.0 * z)
    direct = np.linalg.det(np.eye(2) - left @ right * x)
    t = round_trip_factors(z, zn, lam, alpha)
    assert direct == pytest.approx((1 - t.t_plus * x) * (1 - t.t_minus * x), rel=1e-12, abs=1e-15)


def test_perfect_conductor_limit_of_factors():
    # alpha = 0 gives T+ = 1 and T- = Lambda^2
    z, zn, lam = 2.0, 0.5, 1.0
    t = round_trip_factors(z, zn, lam, 0.0)
    Lam = lam**2 / (z + math.sqrt(z * z - lam * lam)) ** 2
    assert t.t_plus == pytest.approx(1.0, abs=1e-15)
    assert t.t_minus == pytest.approx(Lam**2, rel=1e-14)
    near = round_trip_factors(z, zn, lam, 1e-9)
    assert near.t_minus == pytest.approx(t.t_minus, rel=1e-7)


def test_wave_numbers_in_vacuum():
    xi, m, k = _si(3.0, 1.0, 2.0)
    w = wave_numbers(VACUUM, xi, m, k)
    assert w.q_T == pytest.approx(3.0 / D, rel=1e-13)
    assert w.q_L == pytest.approx(3.0 / D, rel=1e-13)


def test_tiny_mass_matches_massless_factors():
    t0 = round_trip_factors(1e-3, 0.0, 0.0, 0.0)
    t1 = round_trip_factors(1e-3, 0.0, 1e-40, 0.0)
    assert t1.t_plus == t0.t_plus and t1.t_minus == 0.0
    with pytest.raises(ValueError):
        tm_matrices_from_uv(1e-3, 0.0, 0.0, 0.1)


def test_dielectric_gap_rejected_for_pec():
    with pytest.raises(ValueError):
        reflection_tm(PEC, ConstantDispersion(2.0, 1.0), 1e14, 0.0, 1e6)
    with pytest.raises(ValueError):
        reflection_tm(Plasma(1e15), VACUUM, 1e14, 0.0, 1e6, side="middle")
