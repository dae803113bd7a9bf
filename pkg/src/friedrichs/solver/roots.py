"""Zeros of meromorphic functions in rectangles.

The number of zeros is the winding number of ``f`` along the boundary (plus
the total order of any known poles inside).  The phase is tracked by sampling
each edge adaptively until consecutive values differ by less than a fixed
fraction of their modulus, which rules out an unseen turn of the phase.
Boxes holding more than one zero are halved until each holds one, which is
then polished by Newton's method.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..core import Box, SolverConfig
from ..errors import BoundaryZeroError, NotFoundError, NumericError

Pole = tuple  # (location, order)


class CachedFunction:
    """Vectorized wrapper that remembers every value it has computed."""

    def __init__(self, f: Callable):
        self.f = f
        self._cache: dict[complex, complex] = {}
        self.calls = 0

    def __call__(self, z):
        scalar = np.ndim(z) == 0
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        missing = [w for w in dict.fromkeys(z.tolist()) if w not in self._cache]
        if missing:
            self.calls += len(missing)
            vals = np.atleast_1d(np.asarray(self.f(np.array(missing)), dtype=complex))
            if vals.shape != (len(missing),):
                vals = np.array([complex(self.f(w)) for w in missing])
            self._cache.update(zip(missing, vals.tolist()))
        if scalar:
            return self._cache[z[0].item()]
        return np.array([self._cache[w] for w in z.tolist()], dtype=complex)


def _edge_winding(
    f: CachedFunction,
    df: Optional[CachedFunction],
    a: complex,
    b: complex,
    n0: int,
    ratio: float,
    min_frac: float,
):
    """Total change of ``arg f`` from ``a`` to ``b`` along the segment.

    Samples are added until neighbouring values differ by less than ``ratio``
    times their modulus and, when ``df`` is given, until ``|f'/f| |dz|`` stays
    below ``ratio`` at both ends of every interval (this stops fast phase
    rotation from aliasing).
    """
    t = np.linspace(0.0, 1.0, n0 + 1)
    length = abs(b - a)
    vals = f(a + (b - a) * t)
    dvals = df(a + (b - a) * t) if df is not None else None
    while True:
        finite = np.isfinite(vals) & (vals != 0)
        if not np.all(finite):
            bad = t[~finite][0]
            raise BoundaryZeroError(
                f"f vanishes or is not finite on the boundary near {a + (b - a) * bad}"
            )
        dt = np.diff(t)
        step = np.abs(np.diff(vals))
        scale = np.minimum(np.abs(vals[:-1]), np.abs(vals[1:]))
        bad = step > ratio * scale
        if dvals is not None:
            # a non-finite derivative marks a branch point of f; rely on values there
            rate = np.where(np.isfinite(dvals), np.abs(dvals / vals), 0.0) * length
            bad |= np.maximum(rate[:-1], rate[1:]) * dt > ratio
        if not np.any(bad):
            break
        if np.any(dt[bad] < min_frac):
            where = a + (b - a) * t[:-1][bad & (dt < min_frac)][0]
            raise BoundaryZeroError(f"a zero (or pole) lies on or very near the boundary at {where:.6g}")
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        t = np.concatenate([t, mids])
        vals = np.concatenate([vals, f(a + (b - a) * mids)])
        if dvals is not None:
            dvals = np.concatenate([dvals, df(a + (b - a) * mids)])
        order = np.argsort(t, kind="stable")
        t, vals = t[order], vals[order]
        if dvals is not None:
            dvals = dvals[order]
    return float(np.sum(np.angle(vals[1:] / vals[:-1])))


def winding_number(
    f: Callable,
    box: Box,
    *,
    df: Optional[Callable] = None,
    n0: int = 16,
    ratio: float = 0.5,
    min_frac: float = 1e-10,
) -> int:
    """Winding number of ``f`` along the positively oriented boundary of ``box``."""
    fc = f if isinstance(f, CachedFunction) else CachedFunction(f)
    dfc = df if (df is None or isinstance(df, CachedFunction)) else CachedFunction(df)
    c = [
        complex(box.re0, box.im0),
        complex(box.re1, box.im0),
        complex(box.re1, box.im1),
        complex(box.re0, box.im1),
    ]
    total = sum(
        _edge_winding(fc, dfc, c[i], c[(i + 1) % 4], n0, ratio, min_frac) for i in range(4)
    )
    w = total / (2 * math.pi)
    if abs(w - round(w)) > 0.1:
        raise NumericError(f"winding number {w:.3f} is not close to an integer on {box}")
    return int(round(w))


def _poles_inside(poles: Sequence[Pole], box: Box) -> int:
    tot = 0
    for loc, order in poles:
        loc = complex(loc)
        if box.contains(loc, strict=True):
            tot += order
        elif box.contains(loc):
            raise BoundaryZeroError(f"pole at {loc} lies on the boundary of {box}")
    return tot


def count_zeros(
    f: Callable, box: Box, poles: Sequence[Pole] = (), *, df: Optional[Callable] = None, **kw
) -> int:
    """Number of zeros of ``f`` in ``box`` counted with multiplicity.

    Parameters
    ----------
    poles : sequence of (location, order)
        Known poles of ``f``; their orders are added back to the winding number.
    df : callable, optional
        Vectorized derivative; sharpens the boundary sampling.
    """
    n_poles = _poles_inside(poles, box)
    return winding_number(f, box, df=df, **kw) + n_poles


def newton_refine(
    f: Callable,
    df: Optional[Callable],
    z0: complex,
    *,
    tol: float = 1e-10,
    max_iter: int = 60,
    max_step: Optional[float] = None,
) -> tuple[complex, float]:
    """Newton iteration from ``z0``; returns the root and ``|f|`` there.

    Without ``df`` a central difference is used.  Raises
    :class:`NotFoundError` if the iteration does not settle.
    """
    z = complex(z0)
    fz = complex(f(z))
    for _ in range(max_iter):
        if df is not None:
            d = complex(df(z))
        else:
            h = 1e-7 * max(1.0, abs(z))
            d = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
        if d == 0 or not np.isfinite(d):
            raise NotFoundError(f"derivative vanished or is undefined at {z}")
        step = fz / d
        if max_step is not None and abs(step) > max_step:
            step *= max_step / abs(step)
        z = z - step
        fz = complex(f(z))
        if not np.isfinite(fz):
            raise NotFoundError(f"Newton left the domain at {z}")
        if abs(fz) < tol and abs(step) < 1e-6 * max(1.0, abs(z)):
            return z, abs(fz)
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    if abs(fz) < tol:
        return z, abs(fz)
    raise NotFoundError(f"Newton did not converge from {z0} (last |f|={abs(fz):.3g} at {z})")


@dataclass
class ZeroSet:
    """Zeros found in ``box``; ``counted`` is the top-level winding count."""

    zeros: list
    residuals: list
    box: Box
    counted: int
    multiplicities: list = field(default_factory=list)
    flagged: bool = False

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    @property
    def complete(self) -> bool:
        return sum(self.multiplicities or [1] * len(self.zeros)) == self.counted


def _split_offset(box: Box, frac: float) -> tuple[Box, Box]:
    if box.width >= box.height:
        m = box.re0 + frac * box.width
        return Box(box.re0, m, box.im0, box.im1), Box(m, box.re1, box.im0, box.im1)
    m = box.im0 + frac * box.height
    return Box(box.re0, box.re1, box.im0, m), Box(box.re0, box.re1, m, box.im1)


_SPLITS = (0.5, 0.5 + 0.0371, 0.5 - 0.0529, 0.5 + 0.1117)


def find_zeros(
    f: Callable,
    box: Box,
    cfg: Optional[SolverConfig] = None,
    *,
    df: Optional[Callable] = None,
    poles: Sequence[Pole] = (),
    max_zeros: Optional[int] = None,
) -> ZeroSet:
    """All zeros of ``f`` in ``box``, each polished to ``|f| < cfg.newton_tol``.

    Sub-boxes are split at (slightly off-centre, if needed) midpoints until
    they hold a single zero.  A box that still holds several zeros at the depth
    limit is reported once with its count as multiplicity and the set is
    flagged.
    """
    cfg = cfg or SolverConfig()
    fc = CachedFunction(f)
    dfc = CachedFunction(df) if df is not None else None
    total = count_zeros(fc, box, poles, df=dfc)
    if total < 0:
        raise NumericError(f"negative zero count {total} in {box}; a pole is missing")
    if max_zeros is not None and total > max_zeros:
        raise NumericError(f"{total} zeros in {box} exceed the limit of {max_zeros}; shrink the box")
    zeros: list = []
    resid: list = []
    mult: list = []
    flagged = False

    def accept(z, r, k):
        for i, w in enumerate(zeros):
            if abs(z - w) < 1e-8 * max(1.0, abs(w)):
                # two sub-boxes converged to the same zero; keep the first
                return False
        zeros.append(z)
        resid.append(r)
        mult.append(k)
        return True

    def solve(b: Box, n: int, depth: int):
        nonlocal flagged
        if n == 0:
            return
        if n == 1:
            try:
                z, r = newton_refine(
                    fc, dfc, b.center, tol=cfg.newton_tol, max_step=0.5 * max(b.width, b.height)
                )
                pad = 1e-9 * max(b.width, b.height, 1.0)
                inside = Box(b.re0 - pad, b.re1 + pad, b.im0 - pad, b.im1 + pad).contains(z)
                if inside and accept(z, r, 1):
                    return
            except NotFoundError:
                if depth >= cfg.max_subdivision_depth:
                    raise
        if depth >= cfg.max_subdivision_depth:
            z, r = newton_refine(fc, dfc, b.center, tol=cfg.newton_tol)
            flagged = True
            accept(z, r, n)
            return
        for frac in _SPLITS:
            try:
                parts = _split_offset(b, frac)
                counts = [count_zeros(fc, p, poles, df=dfc) for p in parts]
            except BoundaryZeroError:
                continue
            if sum(counts) != n:
                raise NumericError(f"sub-box counts {counts} do not add up to {n} on {b}")
            for p, c in zip(parts, counts):
                solve(p, c, depth + 1)
            return
        raise BoundaryZeroError(f"could not split {b} without hitting a zero")

    solve(box, total, 0)
    order = sorted(range(len(zeros)), key=lambda i: (zeros[i].real, zeros[i].imag))
    return ZeroSet(
        [zeros[i] for i in order],
        [resid[i] for i in order],
        box,
        total,
        [mult[i] for i in order],
        flagged,
    )
