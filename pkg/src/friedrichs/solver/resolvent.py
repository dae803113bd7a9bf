"""The resolvent function of a one-level Friedrichs model and its continuation.

With a real density ``h >= 0`` on ``[0, inf)`` the first-sheet function is

    f(zeta) = zeta - 1 - weight * int_0^inf h(y) / (zeta - slope*y) dy

and its continuation across the positive real axis adds the residue of the
kernel pole,

    f_plus(zeta) = f(zeta) + 2*pi*i * weight * h(zeta/slope) / slope,

where ``h`` is continued analytically off the real axis.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..errors import NumericError, OverflowRegionError, SingularInputError
from .quadrature import CauchyTransform


class Resolvent:
    """Callable ``f_plus`` plus first-sheet values and the analytic derivative.

    Parameters
    ----------
    h, dh : callable
        Vectorized density and its derivative, analytic near the positive
        real axis and valid at complex arguments.
    weight, slope : float
    y_max : float
        Panel range for the quadrature.
    tail : bool
        Map ``[y_max, inf)`` (algebraic decay) or drop it (Gaussian decay).
    log_h : callable, optional
        Returns the real part of ``log h(w)``; if given, continuation terms
        whose magnitude would exceed ``exp(log_cap)`` raise
        :class:`OverflowRegionError`.
    threshold_integral : float, optional
        Exact ``int_0^inf h(y)/y dy``; otherwise computed numerically.
    poles : sequence of (complex, int)
        Poles of the continuation term in the lower half-plane, in ``zeta``.
    singular_at_zero : bool
        Refuse ``zeta = 0`` instead of returning the threshold value there.
    """

    def __init__(
        self,
        h: Callable,
        dh: Callable,
        weight: float,
        slope: float,
        *,
        y_max: float,
        tail: bool,
        log_h: Optional[Callable] = None,
        log_cap: float = 600.0,
        threshold_integral: Optional[float] = None,
        singular_at_zero: bool = False,
        poles: tuple = (),
        rel_tol: float = 1e-13,
    ):
        self.h = h
        self.dh = dh
        self.weight = float(weight)
        self.slope = float(slope)
        self.y_max = y_max
        self.tail = tail
        self.log_h = log_h
        self.log_cap = log_cap
        self.singular_at_zero = singular_at_zero
        self.poles = tuple(poles)
        self.rel_tol = rel_tol
        self._threshold_integral = threshold_integral
        self.transform = CauchyTransform(h, slope, y_max, tail=tail, dh=dh, rel_tol=rel_tol)
        self._dtransform = None
        self.evaluations = 0

    @property
    def dtransform(self) -> CauchyTransform:
        if self._dtransform is None:
            self._dtransform = CauchyTransform(
                self.dh, self.slope, self.y_max, tail=self.tail, rel_tol=self.rel_tol
            )
        return self._dtransform

    def _prepare(self, zeta):
        z = np.asarray(zeta, dtype=complex)
        if self.singular_at_zero and np.any(z == 0):
            raise SingularInputError("resolvent function is singular at zeta = 0")
        self.evaluations += z.size
        return z

    def _transform(self, z):
        at0 = z == 0
        if not np.any(at0):
            return self.transform(z).reshape(z.shape)
        out = np.full(z.shape, -self.threshold_integral / self.slope, dtype=complex)
        if np.any(~at0):
            out[~at0] = self.transform(z[~at0])
        return out

    def integral(self, zeta):
        """``int_0^inf h(y) / (zeta - slope*y) dy``."""
        return self._transform(self._prepare(zeta))

    def first_sheet(self, zeta):
        z = self._prepare(zeta)
        out = z - 1.0 - self.weight * self._transform(z)
        return out if out.ndim else complex(out)

    def check_overflow(self, zeta):
        if self.log_h is None:
            return
        w = np.asarray(zeta, dtype=complex) / self.slope
        lg = np.asarray(self.log_h(w))
        bad = lg > self.log_cap
        if np.any(bad):
            worst = np.atleast_1d(np.asarray(zeta))[np.atleast_1d(bad)]
            raise OverflowRegionError(
                f"continuation term overflows at zeta={worst[:3]} "
                f"(log|h| up to {float(np.max(lg)):.1f} > {self.log_cap}); shrink the box "
                "away from the growth sector"
            )

    def continuation(self, zeta):
        z = np.asarray(zeta, dtype=complex)
        self.check_overflow(z)
        return 2j * np.pi * self.weight * self.h(z / self.slope) / self.slope

    def __call__(self, zeta):
        """Second-sheet value; first sheet for ``Im(zeta) > 0``."""
        z = self._prepare(zeta)
        out = z - 1.0 - self.weight * self._transform(z)
        lower = z.imag <= 0
        if np.any(lower):
            extra = self.continuation(np.where(lower, z, 0.0))
            out = out + np.where(lower, extra, 0.0)
        return out if out.ndim else complex(out)

    def derivative(self, zeta, sheet: int = 2):
        """Analytic derivative.

        Uses ``d/dzeta int h/(zeta - s y) = (1/s) int h'/(zeta - s y)``, valid
        because ``h(0) = 0``.
        """
        z = self._prepare(zeta)
        at0 = z == 0
        if np.any(at0):
            # the threshold is a logarithmic branch point: f' is unbounded there
            out = np.full(z.shape, np.nan, dtype=complex)
            if np.any(~at0):
                out[~at0] = self.derivative(z[~at0], sheet)
            return out if out.ndim else complex(out)
        out = 1.0 - self.weight / self.slope * self.dtransform(z).reshape(z.shape)
        if sheet == 2:
            lower = z.imag <= 0
            if np.any(lower):
                zz = np.where(lower, z, 0.0)
                self.check_overflow(zz)
                extra = 2j * np.pi * self.weight * self.dh(zz / self.slope) / self.slope**2
                out = out + np.where(lower, extra, 0.0)
        return out if out.ndim else complex(out)

    @property
    def threshold_integral(self) -> float:
        if self._threshold_integral is None:
            from scipy import integrate

            val, _ = integrate.quad(
                lambda y: float(np.real(self.h(np.asarray(y)))) / y if y > 0 else 0.0,
                0.0,
                np.inf,
                epsabs=0.0,
                epsrel=1e-13,
                limit=500,
            )
            self._threshold_integral = val
        return self._threshold_integral

    def threshold_value(self) -> float:
        """``f(0)``; both sheets agree there and it is real."""
        return -1.0 + self.weight / self.slope * self.threshold_integral

    def bound_state(self) -> Optional[float]:
        """Real eigenvalue below threshold, or None.

        On the negative axis the first-sheet function is real and strictly
        increasing from ``-inf`` to ``f(0)``, so there is a root iff ``f(0) > 0``.
        """
        from scipy.optimize import brentq

        if self.threshold_value() <= 0:
            return None

        def g(x):
            return float(np.real(self.first_sheet(complex(x, 0.0))))

        lo = -1.0
        while g(lo) > 0:
            lo *= 2.0
            if lo < -1e8:
                raise NumericError("bound state search ran away")
        return brentq(g, lo, 0.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
