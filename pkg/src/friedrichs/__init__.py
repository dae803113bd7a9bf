"""Resonances of a two-level system coupled to a massless boson field.

Two bound-state systems are supported: a hydrogen-like ``1/r`` potential and
a one-dimensional harmonic oscillator.  Resonances are the zeros of the
analytically continued resolvent function ``f_plus`` in the dimensionless
energy variable ``zeta``.

Typical use::

    from friedrichs import Problem, LevelPair, preset, solve
    sol = solve(Problem(preset("paper-coulomb"), LevelPair(2, 1)), alpha=1.0)
"""
__version__ = "0.1.0"

from .core import (  # noqa: E402
    PRESETS,
    Box,
    BranchKind,
    BranchLabel,
    LevelPair,
    Potential,
    Resonance,
    SolverConfig,
    SystemSpec,
    energy_to_zeta,
    level_energy,
    level_spacing,
    preset,
    zeta_to_energy,
)
from .errors import NumericError  # noqa: E402
from .models import Problem, Solution, classify_branches, solve  # noqa: E402
from .solver.continuation import SweepTrajectory, TerminalState, critical_alpha, track  # noqa: E402
from .solver.roots import ZeroSet, count_zeros, find_zeros, newton_refine  # noqa: E402

__all__ = [
    "PRESETS", "Box", "BranchKind", "BranchLabel", "LevelPair", "NumericError", "Potential", "Problem",
    "Resonance", "Solution", "SolverConfig", "SweepTrajectory", "SystemSpec", "TerminalState", "ZeroSet",
    "classify_branches", "count_zeros", "critical_alpha", "energy_to_zeta", "find_zeros", "level_energy",
    "level_spacing", "newton_refine", "preset", "solve", "track", "zeta_to_energy",
]
