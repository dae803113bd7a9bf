"""Resonance problems for a system and level pair, and branch labelling."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import coulomb, oscillator
from .core import (
    NONSTANDARD,
    STANDARD,
    UNKNOWN,
    Box,
    BranchKind,
    BranchLabel,
    LevelPair,
    Potential,
    Resonance,
    SolverConfig,
    SystemSpec,
    make_resonance,
)
from .errors import NotFoundError, NumericError
from .solver.continuation import SweepTrajectory, TerminalState, track
from .solver.roots import ZeroSet, find_zeros

# Height of the strip above the positive real axis added to search boxes.
# f_plus continues analytically onto the first sheet there, so nearly real
# zeros no longer sit on the boundary.
LIFT = 0.02


@dataclass(frozen=True)
class Problem:
    """One system and level pair; the coupling is supplied per call."""

    spec: SystemSpec
    pair: LevelPair
    quad_rel_tol: float = 1e-13

    def __post_init__(self):
        self.pair.check(self.spec.kind)

    @property
    def kind(self) -> Potential:
        return self.spec.kind

    def resolvent(self, alpha: float):
        if self.kind is Potential.COULOMB:
            return coulomb.coulomb_resolvent(self.pair, float(alpha), self.quad_rel_tol)
        return oscillator.oscillator_resolvent(
            self.pair, float(alpha), float(self.spec.mu), rel_tol=self.quad_rel_tol
        )

    def default_box(self, alpha: float) -> Box:
        if self.kind is Potential.COULOMB:
            return coulomb.default_box(self.pair, alpha)
        return oscillator.default_box(self.pair, self.spec.mu)

    @staticmethod
    def lifted(box: Box) -> Box:
        """Raise a top edge lying on the real axis when the box is in ``Re >= 0``."""
        if box.re0 >= 0 and box.im1 == 0:
            return Box(box.re0, box.re1, box.im0, LIFT)
        return box

    def critical_alpha(self) -> float:
        if self.kind is Potential.COULOMB:
            return coulomb.critical_alpha_exact(self.pair)
        return oscillator.critical_alpha_exact(self.pair, self.spec.mu)

    def pole(self, alpha: float) -> Optional[complex]:
        """Where the coupling's pole sits in ``zeta`` (Coulomb only)."""
        if self.kind is Potential.COULOMB:
            return coulomb.mu_coulomb(self.pair, alpha) * coulomb.build_phi_red(self.pair).pole
        return None

    def resonance(self, zeta, alpha, label=UNKNOWN, residual=0.0, bound=False) -> Resonance:
        return make_resonance(self.spec.with_alpha(alpha), self.pair, zeta, label, residual, bound)

    # ------------------------------------------------------------------
    def zeros(self, alpha: float, box: Optional[Box] = None, cfg: Optional[SolverConfig] = None,
              max_zeros: Optional[int] = 2000) -> ZeroSet:
        if alpha == 0:
            b = box or Box(0.0, 2.0, -1.0, 0.0)
            return ZeroSet([1.0 + 0j], [0.0], b, 1, [1])
        r = self.resolvent(alpha)
        cfg = cfg or SolverConfig()
        b = self.lifted(box or cfg.search_box or self.default_box(alpha))
        return find_zeros(r, b, cfg, df=r.derivative, poles=r.poles, max_zeros=max_zeros)

    def bound_state(self, alpha: float) -> Optional[float]:
        if alpha == 0:
            return None
        return self.resolvent(alpha).bound_state()

    def standard_branch(self, alpha: float, cfg: Optional[SolverConfig] = None) -> SweepTrajectory:
        """Follow the zero that starts at ``zeta = 1`` from weak coupling up to ``alpha``."""
        cfg = cfg or SolverConfig()
        a0 = min(alpha, 0.02)
        n = max(2, int(math.ceil(math.log(alpha / a0) / math.log(1.25))) + 1) if alpha > a0 else 1
        grid = np.geomspace(a0, alpha, n) if n > 1 else [alpha]
        return track(self.resolvent, 1.0 + 0j, grid, cfg, label=STANDARD)

    def z0_branch(self, alpha: float, cfg: Optional[SolverConfig] = None,
                  eps: float = 0.01) -> Optional[SweepTrajectory]:
        """Follow the branch born at threshold back from the critical coupling to ``alpha``.

        Returns None when ``alpha`` is above the critical coupling (the branch
        is then a bound state).
        """
        cfg = cfg or SolverConfig()
        a_star = self.critical_alpha()
        if alpha >= a_star:
            return None
        a1 = a_star * (1.0 - eps)
        r = self.resolvent(a1)
        size = 0.1
        seed = None
        for _ in range(4):
            zs = find_zeros(r, Box(0.0, size, -size, LIFT * size), cfg, df=r.derivative, poles=r.poles)
            if len(zs):
                seed = min(zs.zeros, key=abs)
                break
            size *= 2
        if seed is None:
            raise NotFoundError(f"no zero near threshold at alpha={a1:.6g}")
        if a1 <= alpha:
            return track(self.resolvent, seed, [a1], cfg, label=BranchLabel(BranchKind.NONSTANDARD, 0))
        n = max(3, int(math.ceil(abs(math.log(a1 / alpha)) / math.log(1.05))) + 1)
        grid = np.geomspace(a1, alpha, n)
        return track(self.resolvent, seed, grid, cfg, label=BranchLabel(BranchKind.NONSTANDARD, 0))


def _match(zeros, target: complex, tol: float = 1e-6) -> Optional[int]:
    if not zeros:
        return None
    i = int(np.argmin([abs(z - target) for z in zeros]))
    return i if abs(zeros[i] - target) <= tol * max(1.0, abs(target)) else None


@dataclass
class Solution:
    problem: Problem
    alpha: float
    resonances: list
    zero_set: Optional[ZeroSet]
    notes: list

    def by_label(self, text: str) -> Optional[Resonance]:
        for r in self.resonances:
            if str(r.branch) == text:
                return r
        return None

    def nonstandard(self) -> list:
        return [r for r in self.resonances if r.branch.kind is BranchKind.NONSTANDARD and not r.bound_state]

    def narrowest_nonstandard(self) -> Optional[Resonance]:
        ns = self.nonstandard()
        return min(ns, key=lambda r: r.width) if ns else None

    def standard(self) -> Optional[Resonance]:
        for r in self.resonances:
            if r.branch.kind is BranchKind.STANDARD:
                return r
        return None


def solve(
    problem: Problem,
    alpha: float,
    box: Optional[Box] = None,
    cfg: Optional[SolverConfig] = None,
    *,
    classify: bool = True,
    track_z0: bool = True,
    max_zeros: Optional[int] = 2000,
) -> Solution:
    """Every zero of ``f_plus`` in the box plus any bound state, labelled.

    Labels: the zero continued from ``zeta = 1`` is *standard*; the branch
    continued back from threshold is ``z0`` (or the bound state when
    ``alpha`` exceeds the critical coupling); remaining zeros with
    ``Re(zeta) > 0`` are ``z1, z2, ...`` by increasing real part and those with
    ``Re(zeta) <= 0`` are plain *nonstandard*.  With ``track_z0=False`` the
    threshold branch is not followed (cheaper) and indices start at ``z1``.
    """
    cfg = cfg or SolverConfig()
    if cfg.quad_rel_tol != problem.quad_rel_tol:
        problem = replace(problem, quad_rel_tol=cfg.quad_rel_tol)
    notes: list = []
    if alpha == 0:
        res = [problem.resonance(1.0, 0.0, STANDARD)]
        return Solution(problem, 0.0, res, None, notes)
    zs = problem.zeros(alpha, box, cfg, max_zeros=max_zeros)
    if zs.flagged:
        notes.append("a sub-box reached the depth limit with several zeros (reported once with multiplicity)")
    zeros = list(zs.zeros)
    labels: list = [None] * len(zeros)
    bound = problem.bound_state(alpha)
    if classify:
        try:
            st = problem.standard_branch(alpha, cfg)
            i = _match(zeros, st.final) if st.terminal_state is TerminalState.REACHED_ALPHA_MAX else None
            if i is not None:
                labels[i] = STANDARD
            elif st.terminal_state is TerminalState.REACHED_ALPHA_MAX:
                notes.append(f"standard resonance at {st.final:.6g} is outside the search box")
            else:
                notes.append(f"standard branch not followed: {st.diagnostic}")
        except (NotFoundError, NumericError) as exc:
            notes.append(f"standard branch not followed: {exc}")
        if bound is None and track_z0:
            try:
                z0 = problem.z0_branch(alpha, cfg)
                if z0 is not None and z0.terminal_state is TerminalState.REACHED_ALPHA_MAX:
                    i = _match(zeros, z0.final)
                    if i is not None and labels[i] is None:
                        labels[i] = BranchLabel(BranchKind.NONSTANDARD, 0)
                    else:
                        notes.append(f"z0 at {z0.final:.6g} is outside the search box")
                elif z0 is not None:
                    notes.append(f"z0 branch not followed: {z0.diagnostic}")
            except (NotFoundError, NumericError) as exc:
                notes.append(f"z0 branch not followed: {exc}")
    rest = sorted((i for i in range(len(zeros)) if labels[i] is None and zeros[i].real > 0),
                  key=lambda i: zeros[i].real)
    for k, i in enumerate(rest, start=1):
        labels[i] = BranchLabel(BranchKind.NONSTANDARD, k) if classify else UNKNOWN
    for i in range(len(zeros)):
        if labels[i] is None:
            labels[i] = NONSTANDARD if classify else UNKNOWN
    out = [problem.resonance(z, alpha, lab, r) for z, lab, r in zip(zeros, labels, zs.residuals)]
    if bound is not None:
        f = problem.resolvent(alpha)
        lab = BranchLabel(BranchKind.NONSTANDARD, 0) if classify else UNKNOWN
        out.append(problem.resonance(bound, alpha, lab, abs(f.first_sheet(bound)), bound=True))
    out.sort(key=lambda r: (r.zeta.real, r.zeta.imag))
    return Solution(problem, alpha, out, zs, notes)


def classify_trajectory(traj: SweepTrajectory, problem: Problem, small_alpha: float = 0.05) -> BranchLabel:
    """Label a branch that was swept towards weak coupling.

    The point of weakest coupling decides: standard if it is near
    ``zeta = 1``; nonstandard if it is near the coupling pole (Coulomb) or far
    out (oscillator).  A branch that became real is ``z0``.
    """
    if not traj.alphas:
        return UNKNOWN
    if traj.terminal_state is TerminalState.BECAME_REAL:
        return BranchLabel(BranchKind.NONSTANDARD, 0)
    i = int(np.argmin(traj.alphas))
    a, z = traj.alphas[i], traj.zetas[i]
    if traj.terminal_state is TerminalState.TRUNCATED and a > small_alpha:
        return UNKNOWN
    if abs(z - 1.0) < 0.1 and a <= small_alpha:
        return STANDARD
    if problem.kind is Potential.COULOMB:
        p = problem.pole(a)
        if a <= small_alpha and abs(z - p) < 0.5 * abs(p):
            return NONSTANDARD
    else:
        if traj.terminal_state is TerminalState.LEFT_BOX or (a <= small_alpha and abs(z) > 5.0):
            return NONSTANDARD
    return UNKNOWN


def classify_branches(trajectories, problem: Problem, small_alpha: float = 0.05) -> list:
    """Label swept branches; nonstandard ones get ``z1, z2, ...`` by the real
    part of their starting point."""
    labels = [classify_trajectory(t, problem, small_alpha) for t in trajectories]
    ns = sorted((i for i, l in enumerate(labels) if l == NONSTANDARD
                 and trajectories[i].zetas[0].real > 0), key=lambda i: trajectories[i].zetas[0].real)
    for k, i in enumerate(ns, start=1):
        labels[i] = BranchLabel(BranchKind.NONSTANDARD, k)
    for t, l in zip(trajectories, labels):
        t.label = l
    return trajectories


def sweep_alpha(
    problem: Problem,
    alphas,
    box: Optional[Box] = None,
    cfg: Optional[SolverConfig] = None,
) -> list:
    """Find every zero at ``alphas[0]`` and follow each one along the grid.

    Branches keep the labels they receive from :func:`solve` at the first
    coupling; a branch stops early when it turns real, leaves the search box
    or the step control gives up (see :class:`TerminalState`).
    """
    cfg = cfg or SolverConfig()
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("empty coupling grid")
    if alphas[0] <= 0:
        raise ValueError("a sweep must start at a positive coupling")
    if cfg.quad_rel_tol != problem.quad_rel_tol:
        problem = replace(problem, quad_rel_tol=cfg.quad_rel_tol)
    start = solve(problem, alphas[0], box, cfg)
    search = Problem.lifted(start.zero_set.box)
    out = []
    for r in start.resonances:
        if r.bound_state:
            continue
        out.append(track(problem.resolvent, r.zeta, alphas, cfg, box=search, label=r.branch))
    return out
