import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from friedrichs import Box, LevelPair, Potential, SolverConfig, SystemSpec, preset
from friedrichs.core import DomainError, HBARC_MEV_FM, energy_to_zeta, level_energy, zeta_to_energy


def test_coulomb_ground_level(coulomb_spec):
    assert level_energy(coulomb_spec, 1) == pytest.approx(-110.0)


def test_oscillator_ground_level():
    spec = SystemSpec(Potential.OSCILLATOR, 98.6, 1.0, delta=1.0, hbar_omega=395.0, mu=0.5)
    assert level_energy(spec, 0) == pytest.approx(197.5)


def test_coulomb_levels_increase_to_zero(coulomb_spec):
    e = [level_energy(coulomb_spec, n) for n in range(1, 200)]
    assert all(a < b < 0 for a, b in zip(e, e[1:]))
    assert -e[-1] < 1e-2


def test_level_out_of_range(coulomb_spec, osc_spec):
    with pytest.raises(DomainError):
        level_energy(coulomb_spec, 0)
    with pytest.raises(DomainError):
        level_energy(osc_spec, -1)


def test_zeta_to_energy_reference_point(coulomb_spec):
    e = zeta_to_energy(coulomb_spec, LevelPair(2, 1), complex(0.48, -2.747))
    assert e.real == pytest.approx(-70.4, abs=0.1)
    assert e.imag == pytest.approx(-226.6, abs=0.1)


def test_zeta_endpoints(coulomb_spec):
    p = LevelPair(3, 1)
    assert zeta_to_energy(coulomb_spec, p, 0) == level_energy(coulomb_spec, 1)
    assert zeta_to_energy(coulomb_spec, p, 1) == pytest.approx(level_energy(coulomb_spec, 3), abs=1e-12)


@given(st.floats(-50, 50), st.floats(-50, 0))
def test_energy_zeta_roundtrip(re, im):
    spec = preset("paper-coulomb")
    z = complex(re, im)
    back = energy_to_zeta(spec, LevelPair(4, 2), zeta_to_energy(spec, LevelPair(4, 2), z))
    assert abs(back - z) <= 1e-12 * max(1.0, abs(z))


def test_oscillator_preset_consistency(osc_spec):
    assert osc_spec.mu == pytest.approx(0.5, rel=2e-3)
    assert osc_spec.hbar_omega == pytest.approx(395.0, rel=2e-3)
    assert osc_spec.hbar_omega == pytest.approx(HBARC_MEV_FM**2 / (osc_spec.mass_energy * osc_spec.delta**2))
    assert osc_spec.mu == pytest.approx(HBARC_MEV_FM / (osc_spec.hbar_omega * osc_spec.delta))


def test_spec_validation():
    with pytest.raises(DomainError):
        SystemSpec(Potential.COULOMB, -1.0, 1.0)
    with pytest.raises(DomainError):
        SystemSpec(Potential.COULOMB, 1.0, -1.0)
    with pytest.raises(DomainError):
        SystemSpec(Potential.OSCILLATOR, 1.0, 1.0)


def test_level_pair_rules():
    assert LevelPair.parse("3,1") == LevelPair(3, 1)
    with pytest.raises((DomainError, ValueError)):
        LevelPair(1, 2)
    with pytest.raises((DomainError, ValueError)):
        LevelPair(1, 0).check(Potential.COULOMB)
    LevelPair(1, 0).check(Potential.OSCILLATOR)


def test_box_parse_and_split():
    b = Box.parse("0,2,-1,0")
    assert (b.re0, b.re1, b.im0, b.im1) == (0, 2, -1, 0)
    left, right = b.split()
    assert left.re1 == right.re0 == 1.0
    assert b.contains(1 - 0.5j) and not b.contains(3 - 0.5j)


def test_solver_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(newton_tol=0)
    with pytest.raises(DomainError):
        SolverConfig(search_box=Box(0, 1, 0.5, 1))


def test_presets_fixed():
    assert preset("paper-coulomb").mass_energy == 220.0
    assert preset("paper-osc").delta == 1.0 and preset("paper-osc").mass_energy == 98.6
    assert math.isclose(preset("electron-coulomb").alpha, 1 / 137)
    with pytest.raises(DomainError):
        preset("nope")
