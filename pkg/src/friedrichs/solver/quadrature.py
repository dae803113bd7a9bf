"""Cauchy-kernel integrals ``int_0^inf h(y) / (zeta - slope*y) dy``.

Two routes are provided:

``cauchy_integral``
    scalar, adaptive (QUADPACK Gauss-Kronrod), needs ``h`` on the real axis
    only.  Close to the cut the pole is removed by subtracting the first two
    Taylor terms of ``h`` at ``Re(zeta)/slope`` and adding them back in closed
    form.

``CauchyTransform``
    vectorized composite Gauss-Legendre rule on panels adapted once to ``h``.
    Points whose kernel pole sits too close to a panel are handled by
    subtracting ``h`` at the (complex) pole, which requires ``h`` to be
    analytic near the positive real axis.  Anything the fixed rule cannot
    certify is sent back to ``cauchy_integral``.

The logarithm that appears in both is continued from ``Im(zeta) < 0``; for
real ``zeta > 0`` the limit from below is returned.
"""
from __future__ import annotations

import warnings
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from ..errors import NumericError

_GL_ORDER = 24
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
_GL_HX, _GL_HW = np.polynomial.legendre.leggauss(_GL_ORDER // 2)


class QuadratureError(NumericError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(f"{message} (estimate={estimate}, error bound={error})")
        self.estimate = estimate
        self.error = error


def _log_from_below(w):
    """Principal log, except that the negative real axis is reached from below."""
    w = np.asarray(w, dtype=complex)
    out = np.log(w)
    on_cut = (w.imag == 0) & (w.real < 0)
    return np.where(on_cut, out - 2j * np.pi, out) if np.any(on_cut) else out


def kernel_log(zeta, slope, y_max):
    """``int_0^{y_max} dy / (zeta - slope*y)``."""
    return -_log_from_below(1.0 - slope * y_max / np.asarray(zeta, dtype=complex)) / slope


def _quad_c(g, a, b, rel_tol, limit, points=None):
    re, ere, m1 = _quad_part(lambda y: g(y).real, a, b, rel_tol, limit, points)
    im, eim, m2 = _quad_part(lambda y: g(y).imag, a, b, rel_tol, limit, points)
    val, err = complex(re, im), ere + eim
    # judged on the complex value: one part may cancel to almost nothing
    if (m1 or m2) and err > max(1e-8, 1e3 * rel_tol) * max(abs(val), 1e-250):
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {m1 or m2}", val, err)
    return val, err


def _quad_part(g, a, b, rel_tol, limit, points):
    kw = dict(epsabs=0.0, epsrel=rel_tol, limit=limit, full_output=1)
    if points is not None and np.isfinite(b):
        kw["points"] = [p for p in points if a < p < b] or None
        if kw["points"] is None:
            del kw["points"]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = integrate.quad(g, a, b, **kw)
    return res[0], res[1], (res[3] if len(res) > 3 else "")


def cauchy_integral(
    h: Callable[[float], float],
    zeta: complex,
    slope: float,
    *,
    dh: Optional[Callable[[float], float]] = None,
    y_max: Optional[float] = None,
    rel_tol: float = 1e-12,
    subtract_within: float = 0.1,
    limit: int = 500,
) -> complex:
    """Return ``int_0^inf h(y) / (zeta - slope*y) dy``.

    Parameters
    ----------
    h : callable
        Real-valued, smooth on ``[0, inf)`` and integrable against ``1/y``.
    zeta : complex
        Evaluation point.  ``zeta`` on the positive real axis gives the limit
        from ``Im(zeta) < 0``.
    slope : float
        Positive kernel slope.
    dh : callable, optional
        Derivative of ``h``; enables second-order subtraction near the cut.
    y_max : float, optional
        Where the finite part of the integral is split from the tail.
    """
    if not slope > 0:
        raise ValueError("slope must be positive")
    zeta = complex(zeta)
    if zeta == 0:
        raise ZeroDivisionError("Cauchy integral evaluated at zeta = 0")
    y0 = zeta.real / slope
    eta = abs(zeta.imag) / slope
    if y_max is None:
        y_max = 20.0
    near = zeta.real > 0 and eta < subtract_within
    y_cut = max(y_max, 2.0 * y0 + 1.0) if near else y_max

    if not near:
        def g(y):
            return h(y) / (zeta - slope * y)

        pts = [y0] if 0 < y0 < y_cut else None
        body, err = _quad_c(g, 0.0, y_cut, rel_tol, limit, pts)
        tail, err2 = _quad_c(g, y_cut, np.inf, rel_tol, limit)
        return body + tail

    h0 = h(y0)
    d0 = dh(y0) if dh is not None else 0.0

    def g(y):
        return (h(y) - h0 - d0 * (y - y0)) / (zeta - slope * y)

    # residual structure of width eta on both sides of y0
    pts = sorted({y0, *(y0 + k * eta for k in (-30.0, -3.0, 3.0, 30.0) if 0 < y0 + k * eta < y_cut)})
    body, err = _quad_c(g, 0.0, y_cut, rel_tol, limit, pts)
    lg = complex(kernel_log(zeta, slope, y_cut))
    # int_0^Y (y - y0)/(zeta - s y) dy = -Y/s + (zeta/s - y0) * log-term
    lin = -y_cut / slope + (zeta / slope - y0) * lg
    tail, err2 = _quad_c(lambda y: h(y) / (zeta - slope * y), y_cut, np.inf, rel_tol, limit)
    return body + h0 * lg + d0 * lin + tail


def _bernstein_rho(t):
    """Bernstein ellipse parameter of complex points ``t`` relative to [-1, 1]."""
    s = np.sqrt(t - 1.0 + 0j) * np.sqrt(t + 1.0 + 0j)
    return np.maximum(np.abs(t + s), np.abs(t - s))


def _nodes(panels):
    a = panels[:, :1]
    b = panels[:, 1:]
    y = 0.5 * (b - a) * _GL_X + 0.5 * (a + b)
    w = 0.5 * (b - a) * _GL_W
    return y.ravel(), np.broadcast_to(w, y.shape).ravel().copy()


def _gl(f, a, b, x, w):
    y = 0.5 * (b - a) * x + 0.5 * (a + b)
    return float(np.sum(f(y) * w) * 0.5 * (b - a))


def _adapt(f, a, b, max_width, rel_tol):
    """Panels on ``[a, b]`` on which Gauss-Legendre resolves ``f`` to ``rel_tol``."""
    edges = np.linspace(a, b, 9)
    total = sum(_gl(f, x0, x1, _GL_X, _GL_W) for x0, x1 in zip(edges[:-1], edges[1:]))
    out = []
    stack = list(zip(edges[:-1], edges[1:]))[::-1]
    while stack:
        x0, x1 = stack.pop()
        full = _gl(f, x0, x1, _GL_X, _GL_W)
        half = _gl(f, x0, x1, _GL_HX, _GL_HW)
        if (x1 - x0) > max_width or (
            abs(full - half) > 1e-3 * rel_tol * max(total, 1e-300) and x1 - x0 > 1e-6
        ):
            m = 0.5 * (x0 + x1)
            stack.extend([(m, x1), (x0, m)])
        else:
            out.append((x0, x1))
    return out


@lru_cache(maxsize=64)
def _panel_setup(h, y_max, tail, rel_tol, max_width):
    """Nodes, weights and samples of ``h``; independent of the kernel slope, so
    every coupling strength of one pair shares them."""
    panels = np.array(_adapt(lambda y: np.abs(h(y)), 0.0, y_max, max_width, rel_tol))
    y, w = _nodes(panels)
    hy = h(y)
    if tail:

        def tail_density(t):
            t = np.asarray(t, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                v = np.abs(h(y_max / t)) * y_max / t**2
            return np.where(t > 0, v, 0.0)

        tp = np.array(_adapt(tail_density, 0.0, 1.0, 0.125, rel_tol))
        t, tw = _nodes(tp)
        ht = h(y_max / t) * y_max / t**2
    else:
        tp = np.empty((0, 2))
        t = tw = ht = np.empty(0)
    scale = np.sum(np.abs(hy) * w) + np.sum(np.abs(ht) * tw)
    for arr in (panels, y, w, hy, tp, t, tw, ht):
        arr.flags.writeable = False
    return panels, y, w, hy, tp, t, tw, ht, scale


class CauchyTransform:
    """Vectorized ``int_0^inf h(y) / (zeta - slope*y) dy`` for analytic ``h``.

    Parameters
    ----------
    h : callable
        Vectorized and analytic in a strip around the positive real axis.
    slope : float
    y_max : float
        End of the finite panels.
    tail : bool
        If True the interval ``[y_max, inf)`` is mapped by ``t = y_max / y``;
        use it for algebraically decaying ``h``.  Otherwise ``h`` must be
        negligible beyond ``y_max``.
    dh : callable, optional
        Real-axis derivative, forwarded to the scalar fallback.
    """

    def __init__(self, h, slope, y_max, *, tail=True, dh=None, rel_tol=1e-13, max_width=0.125):
        self.h = h
        self.dh = dh
        self.slope = float(slope)
        self.y_max = float(y_max)
        self.tail = tail
        self.rel_tol = rel_tol
        self.fallbacks = 0
        (self._panels, self._y, self._w, self._hy, self._tpanels, self._t, self._tw, self._ht,
         self._scale) = _panel_setup(h, self.y_max, bool(tail), float(rel_tol), float(max_width))

    def _certified(self, zeta):
        """Panels are good when the kernel pole is far from all of them."""
        ystar = zeta / self.slope
        a, b = self._panels[:, 0], self._panels[:, 1]
        t = (2 * ystar[:, None] - a - b) / (b - a)
        rho_min = _bernstein_rho(t).min(axis=1)
        ok_body = rho_min > 10 ** (15.0 / (2 * _GL_ORDER)) * 1.15
        if self.tail:
            with np.errstate(divide="ignore", invalid="ignore"):
                tstar = self.y_max / ystar
                ta, tb = self._tpanels[:, 0], self._tpanels[:, 1]
                tt = (2 * tstar[:, None] - ta - tb) / (tb - ta)
                ok_tail = _bernstein_rho(tt).min(axis=1) > 10 ** (15.0 / (2 * _GL_ORDER)) * 1.15
        else:
            ok_tail = np.ones_like(ok_body)
        return ok_body, ok_tail

    def _plain(self, zeta):
        body = (self._hy * self._w / (zeta[:, None] - self.slope * self._y)).sum(axis=1)
        if self.tail:
            ys = self.y_max / self._t
            body = body + (self._ht * self._tw / (zeta[:, None] - self.slope * ys)).sum(axis=1)
        return body

    def _subtracted(self, zeta):
        """Subtract ``h(y*)`` at the complex pole ``y* = zeta/slope``."""
        ystar = zeta / self.slope
        hs = self.h(ystar)
        diff = (self._hy - hs[:, None]) / (zeta[:, None] - self.slope * self._y)
        body = (diff * self._w).sum(axis=1) + hs * kernel_log(zeta, self.slope, self.y_max)
        if self.tail:
            ys = self.y_max / self._t
            body = body + (self._ht * self._tw / (zeta[:, None] - self.slope * ys)).sum(axis=1)
        return body

    def __call__(self, zeta):
        zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
        shape = zeta.shape
        zeta = zeta.ravel()
        out = np.empty(zeta.shape, dtype=complex)
        ok_body, ok_tail = self._certified(zeta)
        plain = ok_body & ok_tail
        if np.any(plain):
            out[plain] = self._plain(zeta[plain])
        rest = ~plain
        if np.any(rest):
            ystar = zeta / self.slope
            dist = np.abs(ystar[:, None] - self._y).min(axis=1) if self._y.size else np.inf
            sub = rest & ok_tail & (np.abs(ystar.imag) < 0.1) & (ystar.real > 0) & (dist > 1e-6)
            if np.any(sub):
                out[sub] = self._subtracted(zeta[sub])
            for i in np.flatnonzero(rest & ~sub):
                self.fallbacks += 1
                out[i] = cauchy_integral(
                    lambda y: float(np.real(self.h(np.asarray(y)))),
                    zeta[i],
                    self.slope,
                    dh=(lambda y: float(np.real(self.dh(np.asarray(y))))) if self.dh else None,
                    y_max=self.y_max,
                    rel_tol=max(self.rel_tol, 1e-12),
                )
        return out.reshape(shape)
