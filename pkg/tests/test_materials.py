import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from proca_lifshitz.materials import (PEC, VACUUM, ConstantDispersion, Plasma, parse_material,
                                      permeability_rel, permittivity_rel)


@given(st.floats(1e12, 1e17), st.floats(1e10, 1e18), st.floats(1.0, 1e3))
def test_plasma_permittivity_decreases_towards_one(omega_p, xi, factor):
    m = Plasma(omega_p)
    e1, e2 = permittivity_rel(m, xi), permittivity_rel(m, xi * factor)
    assert e1 >= e2 >= 1.0
    assert m.eps_xi2(xi) == pytest.approx(e1 * xi * xi, rel=1e-12)
    assert m.inv_eps(xi) == pytest.approx(1.0 / e1, rel=1e-12)


def test_plasma_static_limit():
    m = Plasma(1e16)
    assert math.isinf(permittivity_rel(m, 0.0))
    assert m.inv_eps(0.0) == 0.0
    assert m.eps_xi2(0.0) == pytest.approx(1e32)


def test_vectorized_and_scalar_shapes():
    xi = np.array([0.0, 1e14, 1e16])
    assert permittivity_rel(ConstantDispersion(4.0, 2.0), xi).shape == (3,)
    assert permeability_rel(ConstantDispersion(4.0, 2.0), 1e15) == 2.0
    assert np.all(np.isinf(permittivity_rel(PEC, xi)))
    assert permittivity_rel(VACUUM, 3.0) == 1.0


def test_negative_frequency_rejected():
    with pytest.raises(ValueError):
        permittivity_rel(VACUUM, -1.0)


@pytest.mark.parametrize("spec, expected", [
    ("vacuum", VACUUM), ("pec", PEC), ("plasma:1e16", Plasma(1e16)),
    ("plasma:2e15:1.5", Plasma(2e15, 1.5)), ("const:2.25:1", ConstantDispersion(2.25, 1.0)),
])
def test_parse_material(spec, expected):
    assert parse_material(spec) == expected
    assert parse_material(str(expected)) == expected


@pytest.mark.parametrize("spec", ["plasma", "plasma:-1", "const:0:1", "gold", "pec:1", "plasma:abc", "plasma:1e200"])
def test_parse_material_rejects(spec):
    with pytest.raises(ValueError):
        parse_material(spec)
