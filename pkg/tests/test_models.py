import numpy as np
import pytest

from friedrichs import LevelPair, preset, track
from friedrichs.core import STANDARD, BranchKind, energy_to_zeta, zeta_to_energy
from friedrichs.models import Problem, classify_branches, solve, sweep_alpha
from friedrichs.solver.continuation import TerminalState


@pytest.fixture(scope="module")
def coulomb21():
    return Problem(preset("paper-coulomb"), LevelPair(2, 1))


def test_solve_coulomb_contains_table_zero(coulomb21):
    sol = solve(coulomb21, 1.0)
    m = coulomb21.spec.mass_energy
    hits = [r for r in sol.nonstandard() if abs(r.energy.real / m + 0.32) <= 0.01 and abs(r.width / m - 1.03) <= 0.02]
    assert len(hits) == 1
    assert hits[0].residual < 1e-10


def test_solve_decoupled_limit(coulomb21):
    sol = solve(coulomb21, 0.0)
    assert [r.zeta for r in sol.resonances] == [1.0]
    assert sol.standard() is not None and not sol.nonstandard()


def test_solve_reports_bound_state():
    sol = solve(Problem(preset("paper-osc"), LevelPair(1, 0)), 1.0)
    bound = [r for r in sol.resonances if r.bound_state]
    assert len(bound) == 1 and bound[0].width == 0
    assert abs(bound[0].energy.real - 85) <= 1


def test_solve_oscillator_z1():
    sol = solve(Problem(preset("paper-osc"), LevelPair(3, 2)), 1.0)
    z1 = sol.by_label("z1")
    assert abs(z1.energy.real - 1588) <= 2
    assert abs(z1.width - 0.4) <= 0.2


def test_solve_labels_are_ordered_by_real_part():
    sol = solve(Problem(preset("paper-osc"), LevelPair(2, 1)), 0.5)
    ks = [r for r in sol.nonstandard() if r.branch.index and r.branch.index > 0]
    assert [r.branch.index for r in ks] == list(range(1, len(ks) + 1))
    assert all(a.zeta.real < b.zeta.real for a, b in zip(ks, ks[1:]))


def test_sweep_coulomb_turns_real(coulomb21):
    trs = sweep_alpha(coulomb21, np.linspace(0.5, 6.0, 12))
    real = [t for t in trs if t.terminal_state is TerminalState.BECAME_REAL]
    assert len(real) == 1
    assert abs(real[0].alphas[-1] - 5.54) <= 0.01
    for t in trs:
        assert all(b > a for a, b in zip(t.alphas, t.alphas[1:]))


def test_sweep_oscillator_z0_turns_real():
    prob = Problem(preset("paper-osc"), LevelPair(2, 1))
    trs = sweep_alpha(prob, np.linspace(0.5, 0.8, 7))
    z0 = [t for t in trs if str(t.label) == "z0"]
    assert len(z0) == 1 and z0[0].terminal_state is TerminalState.BECAME_REAL
    assert abs(z0[0].alphas[-1] - 0.7071) <= 0.005


def test_sweep_rejects_bad_grid(coulomb21):
    with pytest.raises(ValueError):
        sweep_alpha(coulomb21, [])
    with pytest.raises(ValueError):
        sweep_alpha(coulomb21, [0.0, 1.0])


def test_standard_width_oscillator_40_monotone():
    prob = Problem(preset("paper-osc"), LevelPair(4, 0))
    tr = prob.standard_branch(1.0)
    widths = [abs(z.imag) for a, z in zip(tr.alphas, tr.zetas) if a >= 0.2]
    assert len(widths) >= 5
    assert all(b < a for a, b in zip(widths, widths[1:]))
    assert 1e-9 <= widths[-1] <= 1e-7


def test_classify_branches_weak_coupling(coulomb21):
    # follow the alpha = 1 zeros down to weak coupling
    sol = solve(coulomb21, 1.0)
    grid = np.geomspace(1.0, 0.02, 40)
    picks = [sol.standard(), sol.narrowest_nonstandard()]
    trs = [track(coulomb21.resolvent, r.zeta, grid) for r in picks]
    classify_branches(trs, coulomb21)
    assert trs[0].label == STANDARD
    assert trs[1].label.kind is BranchKind.NONSTANDARD


def test_energy_scale_endpoints(coulomb21):
    spec, pair = coulomb21.spec, coulomb21.pair
    m, a = spec.mass_energy, spec.alpha
    # zeta = 0 and 1 are the lower and upper levels -a^2 m / (2 n^2)
    assert zeta_to_energy(spec, pair, 0.0) == pytest.approx(-a * a * m / 2)
    assert zeta_to_energy(spec, pair, 1.0) == pytest.approx(-a * a * m / 8)
    z = 0.3 - 0.7j
    assert energy_to_zeta(spec, pair, zeta_to_energy(spec, pair, z)) == pytest.approx(z, abs=1e-15)
