import math

import numpy as np
import pytest

from proca_lifshitz.rs_tower import (RootBracketingError, cross_product, first_pair, kappa_to_inverse_m,
                                     kk_mass_approx, kk_masses, rs_casimir_force, rs_force_terms)
from scipy.special import j0, y0

KAPPA_GEV = 1e8
KR = 12.0
# roots in X = z e^{pi k R} / k from 40-digit mpmath root finding on the full Bessel cross product
MP_ROOTS = [2.4466011033972974567, 5.5633959031530405729, 8.6976870055232494643]


def _R(kR=KR):
    return kR / kappa_to_inverse_m(KAPPA_GEV)


def test_roots_against_high_precision():
    spec = kk_masses(KAPPA_GEV, _R(), 3)
    warp = math.pi * KR
    X = spec.masses / (spec.kappa * math.exp(-warp))
    assert X == pytest.approx(MP_ROOTS, rel=1e-13)
    assert np.all(spec.residuals < 1e-12)


def test_masses_increase_with_spacing_near_pi():
    spec = kk_masses(KAPPA_GEV, _R(), 30)
    gaps = np.diff(spec.masses) / (spec.kappa * math.exp(-math.pi * KR))
    assert np.all(gaps > 0)
    assert gaps[-1] == pytest.approx(math.pi, rel=1e-3)


def test_series_branch_matches_bessel():
    # the series branch is exact to double precision for x < 1e-8
    for X in (1e-2, 2.4466, 30.0):
        warp = math.log(X) - math.log(5e-9)
        series = first_pair(X, warp, series=True)
        x = X * math.exp(-warp)
        assert series == pytest.approx((j0(x), y0(x)), rel=1e-14)
        assert cross_product(X, warp, series=True)[0] == pytest.approx(cross_product(X, warp, series=False)[0],
                                                                    rel=1e-13)


def test_approximation_warns_for_small_warp():
    with pytest.warns(UserWarning):
        kk_mass_approx(KAPPA_GEV, _R(2.0), 1)


def test_input_validation():
    with pytest.raises(ValueError):
        kk_masses(KAPPA_GEV, _R(), 0)
    with pytest.raises(ValueError):
        kk_masses(-1.0, _R(), 3)
    assert issubclass(RootBracketingError, RuntimeError)


def test_tower_adds_attraction_and_truncates():
    massless, terms = rs_force_terms(KAPPA_GEV, _R(), 100e-9, 300.0, 0.0, 8)
    assert massless < 0 and np.all(terms <= 0)
    assert np.all(terms[4:] == 0.0)  # reduced masses above the skip threshold
    total = rs_casimir_force(KAPPA_GEV, _R(), 100e-9, 300.0, 0.0, 8)
    assert total == pytest.approx(math.fsum([massless, *terms]), rel=1e-15)
    assert rs_casimir_force(KAPPA_GEV, _R(), 100e-9, 300.0, 0.0, 0) == massless
