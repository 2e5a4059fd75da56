import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minlen.deformations import (DEFORMATIONS, UnitConventions, builtin_deformation,
                                 coupling_coefficient, kinetic_profile, minimal_length)
from minlen.errors import DomainError, UnknownDeformation


@pytest.mark.parametrize("name, expected", [
    ("cutoff", 0.25),
    ("kmm", 1 / 3),
    ("sine", 2 / math.pi**2),
    ("tan", 4 / math.pi**2),
])
def test_profile_at_half(name, expected):
    assert kinetic_profile(builtin_deformation(name), 0.5) == pytest.approx(expected, rel=1e-15)


def test_profile_endpoints():
    assert kinetic_profile(builtin_deformation("cutoff"), 0.0) == 0.0
    assert kinetic_profile(builtin_deformation("tan"), 1.0) == math.inf
    assert kinetic_profile(builtin_deformation("kmm"), -1.0) == math.inf
    assert kinetic_profile(builtin_deformation("sine"), 1.0) == pytest.approx(4 / math.pi**2, rel=1e-15)


def test_unknown_name_lists_valid_names():
    with pytest.raises(UnknownDeformation) as info:
        builtin_deformation("kempf")
    for name in DEFORMATIONS:
        assert name in str(info.value)


def test_out_of_domain(spec):
    with pytest.raises(DomainError):
        kinetic_profile(spec, 1.0000001)


def test_divergence_flags():
    flags = {n: builtin_deformation(n).diverges_at_boundary for n in DEFORMATIONS}
    assert flags == {"cutoff": False, "kmm": True, "sine": False, "tan": True}


def test_evenness_and_shape(spec):
    y = np.linspace(0.0, 1.0, 100)
    g = kinetic_profile(spec, y)
    assert np.array_equal(g, kinetic_profile(spec, -y))
    assert g[0] == 0.0
    assert np.all(np.diff(g) >= 0)
    assert np.all(g >= 0)


def test_pointwise_ordering():
    y = np.linspace(0, 1, 2001)[1:-1]
    g = {n: kinetic_profile(builtin_deformation(n), y) for n in DEFORMATIONS}
    assert np.all(g["sine"] <= g["cutoff"])
    assert np.all(g["cutoff"] <= g["kmm"])
    assert np.all(g["kmm"] <= g["tan"])


def test_guarded_coefficient_vanishes_at_divergence():
    for name in ("kmm", "tan"):
        spec = builtin_deformation(name)
        assert coupling_coefficient(spec, 3.0, 0.1, 1.0) == 0.0
        assert coupling_coefficient(spec, 3.0, 0.1, -1.0) == 0.0
        near = coupling_coefficient(spec, 3.0, 0.1, 1 - 1e-9)
        assert 0 < near < 1e-6
    assert coupling_coefficient(builtin_deformation("cutoff"), 2.0, 1.0, 1.0) == 1.0


@pytest.mark.parametrize("b, expected", [(1.0, math.pi / 2), (math.inf, 0.0), (math.pi / 2, 1.0)])
def test_minimal_length(b, expected):
    assert minimal_length(b) == pytest.approx(expected, rel=1e-15)


@given(st.floats(1e-3, 1e3), st.floats(1.001, 10))
def test_minimal_length_decreasing(b, factor):
    assert minimal_length(b * factor) < minimal_length(b)


def test_registry_metadata():
    # b for the beta-deformed registry forms
    beta = 4.0
    assert builtin_deformation("sine", beta).b == pytest.approx(math.pi / 4)
    assert builtin_deformation("kmm", beta).b == pytest.approx(0.5)
    assert math.isinf(builtin_deformation("tan", beta).a)
    # beta is metadata: the profile does not change
    y = np.linspace(-1, 1, 11)
    assert np.array_equal(builtin_deformation("tan", beta).G(y), builtin_deformation("tan").G(y))


def test_unit_conventions():
    units = UnitConventions()
    assert units.energy(2.0, 3.0) == -9.0
    with pytest.raises(DomainError):
        UnitConventions(hbar=2.0)
