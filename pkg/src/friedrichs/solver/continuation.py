"""Following zeros of ``f_plus`` as the coupling changes.

A *family* is any callable ``alpha -> Resolvent`` (it needs ``__call__``,
``derivative`` and ``threshold_value``).  Zeros are continued by a tangent
predictor ``dzeta/dalpha = -(df/dalpha) / (df/dzeta)`` and a Newton corrector; the step is halved whenever the corrector
moves further than ``jump_factor`` times the predicted motion, which keeps a
branch from hopping onto a neighbour.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..core import UNKNOWN, Box, BranchLabel, SolverConfig
from ..errors import NotFoundError, NumericError
from .roots import newton_refine

Family = Callable[[float], object]


class TerminalState(str, enum.Enum):
    BECAME_REAL = "became_real"
    LEFT_BOX = "left_box"
    REACHED_ALPHA_MAX = "reached_alpha_max"
    TRUNCATED = "truncated"


@dataclass
class SweepTrajectory:
    label: BranchLabel
    alphas: list = field(default_factory=list)
    zetas: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    terminal_state: TerminalState = TerminalState.REACHED_ALPHA_MAX
    diagnostic: str = ""

    @property
    def points(self) -> list:
        return list(zip(self.alphas, self.zetas))

    @property
    def final(self) -> complex:
        return self.zetas[-1]

    def append(self, alpha, zeta, residual=0.0):
        self.alphas.append(float(alpha))
        self.zetas.append(complex(zeta))
        self.residuals.append(float(residual))


def threshold_crossing(family: Family, a0: float, a1: float, tol: float = 1e-12) -> float:
    """Coupling between ``a0`` and ``a1`` where ``f(0) = 0``."""
    g = lambda a: family(a).threshold_value()  # noqa: E731
    g0, g1 = g(a0), g(a1)
    if g0 == 0:
        return a0
    if g1 == 0:
        return a1
    if np.sign(g0) == np.sign(g1):
        raise NotFoundError(f"f(0) keeps its sign on [{a0}, {a1}]")
    return brentq(g, min(a0, a1), max(a0, a1), xtol=tol, rtol=1e-15)


def track(
    family: Family,
    zeta0: complex,
    alphas: Sequence[float],
    cfg: Optional[SolverConfig] = None,
    *,
    box: Optional[Box] = None,
    label: BranchLabel = UNKNOWN,
    near_threshold: float = 1e-3,
    max_motion: float = 0.15,
) -> SweepTrajectory:
    """Continue the zero ``zeta0`` of ``family(alphas[0])`` along ``alphas``.

    ``zeta0`` is polished first.  Every grid value is recorded; intermediate
    steps are taken as needed, each moving the zero by at most ``max_motion``
    times its distance from the origin.  Stops when the zero reaches the threshold
    ``zeta = 0`` (recording the exact crossing coupling), leaves ``box``, or
    the step control gives up.
    """
    cfg = cfg or SolverConfig()
    alphas = [float(a) for a in alphas]
    if len(alphas) < 1:
        raise ValueError("empty coupling grid")
    d = np.diff(alphas)
    if len(d) and not (np.all(d > 0) or np.all(d < 0)):
        raise ValueError("coupling grid must be strictly monotone")
    traj = SweepTrajectory(label)
    f0 = family(alphas[0])
    z, res = newton_refine(f0, f0.derivative, zeta0, tol=cfg.newton_tol)
    traj.append(alphas[0], z, res)
    prev: Optional[tuple] = None  # (alpha, zeta) before the last accepted point
    cur = (alphas[0], z)

    slope_at: dict = {}

    def predict(a):
        ac, zc = cur
        if ac not in slope_at:
            slope_at[ac] = _tangent(family, ac, zc)
        t = slope_at[ac]
        if t is None:
            if prev is None:
                return zc
            ap, zp = prev
            t = (zc - zp) / (ac - ap)
        return zc + t * (a - ac)

    for target in alphas[1:]:
        while cur[0] != target:
            span = target - cur[0]
            h = span
            if prev is not None:
                h = math.copysign(min(abs(span), 4.0 * abs(cur[0] - prev[0])), span)
            accepted = False
            for _ in range(cfg.max_halvings + 1):
                a = cur[0] + h if abs(h) < abs(span) else target
                pred = predict(a)
                motion = abs(pred - cur[1])
                if motion > max_motion * max(abs(cur[1]), 0.05) and abs(h) > 1e-9 * max(1.0, abs(cur[0])):
                    # a long predicted move leaves the neighbour test toothless
                    h *= 0.5
                    continue
                fa = family(a)
                try:
                    zn, res = newton_refine(
                        fa, fa.derivative, pred, tol=cfg.newton_tol, max_step=max(0.25 * abs(cur[1]), 0.05)
                    )
                    jump = abs(zn - pred)
                    ok = jump <= cfg.jump_factor * max(motion, 1e-3 * max(1.0, abs(cur[1])))
                except (NotFoundError, NumericError):
                    ok = False
                if ok:
                    accepted = True
                    break
                h *= 0.5
            if not accepted:
                # close to threshold the zero runs into the branch point at 0
                if abs(cur[1]) < 50 * near_threshold or _crosses(family, cur[0], target):
                    return _finish_real(family, traj, cur[0], target)
                traj.terminal_state = TerminalState.TRUNCATED
                traj.diagnostic = (
                    f"step control failed after {cfg.max_halvings} halvings at alpha={cur[0]:.6g}, "
                    f"zeta={cur[1]:.6g}"
                )
                return traj
            if abs(zn) < 50 * near_threshold and _crosses(family, cur[0], a):
                # the step went through the branch point
                return _finish_real(family, traj, cur[0], a)
            if abs(zn) < near_threshold and _crosses(family, a, a + (a - cur[0])):
                prev, cur = cur, (a, zn)
                return _finish_real(family, traj, a, a + 4 * (a - prev[0]))
            prev, cur = cur, (a, zn)
            if box is not None and not box.contains(zn):
                traj.append(a, zn, res)
                traj.terminal_state = TerminalState.LEFT_BOX
                traj.diagnostic = f"left {box} at alpha={a:.6g}"
                return traj
        traj.append(cur[0], cur[1], res)
    traj.terminal_state = TerminalState.REACHED_ALPHA_MAX
    return traj


def _tangent(family: Family, alpha: float, zeta: complex, rel: float = 1e-6) -> Optional[complex]:
    """``dzeta/dalpha`` along the zero through ``(alpha, zeta)``; None if undefined."""
    d = rel * max(abs(alpha), 1e-3)
    try:
        fz = complex(family(alpha).derivative(zeta))
        fa = (complex(family(alpha + d)(zeta)) - complex(family(alpha - d)(zeta))) / (2 * d)
    except (NumericError, ValueError, ZeroDivisionError):
        return None
    t = -fa / fz
    return t if np.isfinite(t) else None


def _crosses(family: Family, a0: float, a1: float) -> bool:
    try:
        g0, g1 = family(a0).threshold_value(), family(a1).threshold_value()
    except Exception:  # pragma: no cover - defensive
        return False
    return g0 < 0 <= g1


def _finish_real(family, traj: SweepTrajectory, a0: float, a1: float) -> SweepTrajectory:
    try:
        a_star = threshold_crossing(family, a0, a1)
    except NotFoundError as exc:
        traj.terminal_state = TerminalState.TRUNCATED
        traj.diagnostic = f"zero approached threshold but {exc}"
        return traj
    traj.append(a_star, 0.0, 0.0)
    traj.terminal_state = TerminalState.BECAME_REAL
    traj.diagnostic = f"reached threshold at alpha={a_star:.10g}"
    return traj


def critical_alpha(family: Family, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Coupling at which a nonstandard branch reaches threshold and turns real.

    A branch of ``f_plus`` can only leave the second sheet through the branch
    point ``zeta = 0``; this happens exactly when the real function
    ``f(0; alpha)`` changes sign, which is located by bracketing.
    """
    return threshold_crossing(family, lo, hi, tol)
