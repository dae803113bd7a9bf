"""1-D harmonic oscillator coupling functions and resonance equation.

Lengths are measured in units of the oscillator scale ``delta``.  The coupling
of levels ``n > m`` is the Fourier transform of the product of the two Hermite
functions,

    g(y) = int psi_m(x) psi_n(x) exp(-i y x) dx = i**k * G(y),   k = n - m,

and the real function ``G(y) = y**r P(y**2) exp(-y**2/4)`` is what we store.
The constant phase ``i**k`` squares to ``(-1)**(n+m)``, so the continuation
term uses ``G**2`` directly and the real-axis integrand is ``G**2 >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from scipy import special

from . import _exact as ex
from .core import Box, DomainError, LevelPair, Potential
from .solver.resolvent import Resolvent


def _hermite(n: int) -> tuple:
    """Physicists' Hermite polynomial ``H_n`` with exact coefficients."""
    h0, h1 = ex.poly([1]), ex.poly([0, 2])
    if n == 0:
        return h0
    for j in range(1, n):
        h0, h1 = h1, ex.add(ex.shift_degree(ex.scale(h1, 2), 1), ex.scale(h0, -2 * j))
    return h1


@dataclass(frozen=True)
class HermiteWavefunction:
    """``psi_n(x) = sqrt(norm_sq) * H_n(x) * exp(-x**2/2)``, ``x`` in units of delta."""

    n: int
    norm_sq: Fraction
    poly: tuple

    def overlap(self, other: "HermiteWavefunction") -> Fraction:
        """Exact ``int psi_n psi_m dx`` over the real line."""
        p = ex.mul(self.poly, other.poly)
        # int x^j e^{-x^2} dx = sqrt(pi) * gauss_moment(j); norm_sq carries 1/sqrt(pi)
        tot = sum(c * ex.gauss_moment(j) for j, c in enumerate(p))
        if tot == 0:
            return Fraction(0)
        return tot * _sqrt_ratio(self.norm_sq, other.norm_sq)

    def second_moment(self) -> Fraction:
        """Exact ``int x**2 psi_n**2 dx`` over the real line."""
        p = ex.shift_degree(ex.mul(self.poly, self.poly), 2)
        return self.norm_sq * sum(c * ex.gauss_moment(j) for j, c in enumerate(p))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        c = math.sqrt(self.norm_sq) / math.pi**0.25
        return c * ex.evaluate([float(a) for a in self.poly], x) * np.exp(-0.5 * x * x)


def _sqrt_ratio(a: Fraction, b: Fraction) -> Fraction:
    prod = a * b
    num, den = math.isqrt(prod.numerator), math.isqrt(prod.denominator)
    if num * num != prod.numerator or den * den != prod.denominator:
        raise ArithmeticError("normalizations do not combine to a rational")
    return Fraction(num, den)


@lru_cache(maxsize=None)
def hermite_wavefunction(n: int) -> HermiteWavefunction:
    """Normalized oscillator eigenfunction; ``norm_sq`` omits the ``1/sqrt(pi)``."""
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"oscillator level must be a non-negative integer, got {n}")
    return HermiteWavefunction(n, Fraction(1, 2**n * factorial(n)), _hermite(n))


@dataclass(frozen=True)
class GaussianCoupling:
    """Exact real coupling ``G(y) = sqrt(norm_sq) * y**r * P(y**2) * exp(-y**2/4)``.

    ``poly`` holds the coefficients of ``P`` (in ``y**2``).
    """

    n: int
    m: int
    r: int
    norm_sq: Fraction
    poly: tuple
    parity_sign: int

    @property
    def k(self) -> int:
        return abs(self.n - self.m)

    @property
    def full_poly(self) -> tuple:
        """Coefficients in ``y`` of ``y**r P(y**2)``."""
        out = [Fraction(0)] * (self.r + 2 * len(self.poly) - 1)
        for i, c in enumerate(self.poly):
            out[self.r + 2 * i] = c
        return ex.poly(out)

    @property
    def _sign(self) -> float:
        # sign of the y**k coefficient relative to the Laguerre form (which is positive)
        lead = next(c for c in self.full_poly if c != 0)
        return 1.0 if lead > 0 else -1.0

    @property
    def _log_pref(self) -> float:
        lo, hi = min(self.n, self.m), max(self.n, self.m)
        return 0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1)) - 0.5 * self.k * math.log(2.0)

    def evaluate_exact(self, y):
        """Horner evaluation of the stored polynomial (for cross-checks)."""
        y = np.asarray(y, dtype=complex)
        p = [float(c) for c in self.full_poly]
        return math.sqrt(self.norm_sq) * ex.evaluate(p, y) * np.exp(-0.25 * y * y)

    def _laguerre(self, a, y):
        """``L_lo^(a)(y**2/2)`` by the three-term recurrence (complex-safe)."""
        lo = min(self.n, self.m) if a == self.k else min(self.n, self.m) - 1
        x = 0.5 * y * y
        if lo < 0:
            return np.zeros_like(x)
        l0 = np.ones_like(x)
        if lo == 0:
            return l0
        l1 = 1.0 + a - x
        for j in range(1, lo):
            l0, l1 = l1, ((2 * j + 1 + a - x) * l1 - (j + a) * l0) / (j + 1)
        return l1

    def __call__(self, y):
        y = np.asarray(y, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            g = np.exp(self._log_pref - 0.25 * y * y) * y**self.k * self._laguerre(self.k, y)
        out = self._sign * g
        return out if out.ndim else complex(out)

    def derivative(self, y):
        y = np.asarray(y, dtype=complex)
        k = self.k
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(self._log_pref - 0.25 * y * y)
            lag = self._laguerre(k, y)
            dlag = -self._laguerre(k + 1, y)  # d/dx L_m^(k)(x) = -L_{m-1}^(k+1)(x)
            g = e * (k * y ** (k - 1) * lag + y ** (k + 1) * dlag - 0.5 * y ** (k + 1) * lag)
        out = self._sign * g
        return out if out.ndim else complex(out)

    def density(self, y):
        g = self(y)
        return g * g

    def density_prime(self, y):
        return 2.0 * self(y) * self.derivative(y)

    def log_abs_density(self, y):
        """``log|G(y)**2|``, evaluated without overflow."""
        y = np.asarray(y, dtype=complex)
        with np.errstate(divide="ignore"):
            lg = (
                self._log_pref
                - 0.25 * (y * y).real
                + self.k * np.log(np.abs(y))
                + np.log(np.abs(self._laguerre(self.k, y)))
            )
        return 2.0 * lg

    def integral_over_y(self) -> Fraction:
        """Exact ``int_0^inf G(y)**2 / y dy``."""
        q = ex.mul(self.full_poly, self.full_poly)
        # int_0^inf y^(j-1) e^{-y^2/2} dy with j = 2i even: 2^(i-1) (i-1)!
        tot = Fraction(0)
        for j, c in enumerate(q):
            if c == 0:
                continue
            if j % 2 or j == 0:
                raise ArithmeticError("density must be even and vanish at the origin")
            i = j // 2
            tot += c * 2 ** (i - 1) * factorial(i - 1)
        return self.norm_sq * tot


@lru_cache(maxsize=None)
def build_G(n: int, m: int) -> GaussianCoupling:
    """Exact Fourier transform of ``psi_m psi_n`` with the phase ``i**(n-m)`` dropped."""
    if n == m:
        raise DomainError("diagonal couplings are not used by the model")
    if n < 0 or m < 0:
        raise DomainError("oscillator levels must be non-negative")
    k = abs(n - m)
    p = ex.mul(_hermite(n), _hermite(m))
    # int x^j e^{-x^2} e^{-iyx} dx = sqrt(pi) (i d/dy)^j e^{-y^2/4};
    # d/dy [Q e^{-y^2/4}] = (Q' - y Q / 2) e^{-y^2/4}
    q: tuple = ex.poly([1])
    real: tuple = ()
    for j, c in enumerate(p):
        if j:
            q = ex.add(ex.deriv(q), ex.scale(ex.shift_degree(q, 1), Fraction(-1, 2)))
        if c == 0:
            continue
        if (j - k) % 2:
            raise ArithmeticError("Hermite product has wrong parity")
        sgn = -1 if ((j - k) // 2) % 2 else 1
        real = ex.add(real, ex.scale(q, sgn * c))
    r = 1 if k % 2 else 2
    if any(real[:r]) or any(real[r + 1 :: 2]):
        raise ArithmeticError("transform does not have the expected y**r P(y**2) shape")
    P = ex.poly(real[r::2])
    norm_sq = Fraction(1, 2 ** (n + m) * factorial(n) * factorial(m))
    return GaussianCoupling(n, m, r, norm_sq, P, (-1) ** (n + m))


def level_extent(n: int, delta: float = 1.0) -> float:
    """Root-mean-square position of level ``n``: ``delta * sqrt(n + 1/2)``."""
    return delta * math.sqrt(float(hermite_wavefunction(n).second_moment()))


def pair_extent(n: int, m: int, delta: float = 1.0) -> float:
    """Harmonic mean ``2 / (1/d_n + 1/d_m)`` of the two level extents, in Fermi."""
    if n == m:
        raise DomainError("pair extent needs two distinct levels")
    dn, dm = level_extent(n, delta), level_extent(m, delta)
    return 2.0 / (1.0 / dn + 1.0 / dm)


def _check(pair: LevelPair) -> LevelPair:
    return pair.check(Potential.OSCILLATOR)


def slope(pair: LevelPair, mu: float) -> float:
    return mu / (pair.upper - pair.lower)


def resolvent_weight(pair: LevelPair, alpha: float) -> float:
    return 2.0 * alpha**2 / (pair.upper - pair.lower) ** 2


def _y_max(cpl: GaussianCoupling) -> float:
    # |G|^2 ~ y^(2n+2m) e^{-y^2/2}; past this point it is far below double precision
    return 2.0 * math.sqrt(cpl.n + cpl.m + 1.0) + 12.0


@lru_cache(maxsize=256)
def oscillator_resolvent(
    pair: LevelPair, alpha: float, mu: float, log_cap: float = 600.0, rel_tol: float = 1e-13
) -> Resolvent:
    if not alpha > 0:
        raise DomainError("alpha must be positive to build the resolvent")
    _check(pair)
    cpl = build_G(pair.upper, pair.lower)
    return Resolvent(
        cpl.density,
        cpl.density_prime,
        resolvent_weight(pair, alpha),
        slope(pair, mu),
        y_max=_y_max(cpl),
        tail=False,
        log_h=cpl.log_abs_density,
        log_cap=log_cap,
        threshold_integral=float(cpl.integral_over_y()),
        rel_tol=rel_tol,
    )


def f_plus_oscillator(zeta, pair: LevelPair, alpha: float, mu: float):
    """Continued resolvent function, written out term by term.

    ``zeta - 1 - 2 alpha**2/k**2 int G**2/(zeta - mu y/k) dy
    + 4 i pi alpha**2/(mu k) G(k zeta/mu)**2`` with ``k = n - m``.
    The last term is omitted for ``Im(zeta) > 0``.
    """
    z = np.asarray(zeta, dtype=complex)
    if alpha == 0:
        out = z - 1.0
        return out if out.ndim else complex(out)
    res = oscillator_resolvent(pair, float(alpha), float(mu))
    cpl = build_G(pair.upper, pair.lower)
    k = pair.upper - pair.lower
    out = z - 1.0 - res.weight * res.integral(z)
    lower = z.imag <= 0
    if np.any(lower):
        zz = np.where(lower, z, 0.0)
        res.check_overflow(zz)
        extra = 4j * np.pi * alpha**2 / (mu * k) * cpl(k * zz / mu) ** 2
        out = np.where(lower, out + extra, out)
    return out if out.ndim else complex(out)


def critical_alpha_exact(pair: LevelPair, mu: float) -> float:
    """Coupling at which ``f(0) = 0``: ``alpha**2 = k mu / (2 int G**2/y dy)``."""
    cpl = build_G(pair.upper, pair.lower)
    k = pair.upper - pair.lower
    return math.sqrt(k * mu / (2.0 * float(cpl.integral_over_y())))


def overflow_radius(pair: LevelPair, mu: float, log_cap: float = 600.0) -> float:
    """``|Im zeta|`` beyond which the continuation term may overflow near ``Re zeta = 0``.

    The growth is ``exp(-Re(w**2)/2)`` with ``w = k zeta / mu``; on the
    imaginary axis that is ``exp(|w|**2 / 2)``.
    """
    k = pair.upper - pair.lower
    return mu / k * math.sqrt(2.0 * 0.8 * log_cap)


def default_box(pair: LevelPair, mu: float, log_cap: float = 600.0) -> Box:
    """``[0, 6] x [-4, 0]`` clipped to where the continuation term stays finite."""
    im0 = max(-4.0, -overflow_radius(pair, mu, log_cap))
    return Box(0.0, 6.0, im0, 0.0)


def laguerre_check(n: int, m: int, y) -> np.ndarray:
    """Independent evaluation through scipy's generalized Laguerre polynomials."""
    lo, hi = min(n, m), max(n, m)
    k = hi - lo
    y = np.asarray(y, dtype=float)
    return (
        math.sqrt(math.factorial(lo) / math.factorial(hi))
        * (y / math.sqrt(2.0)) ** k
        * special.eval_genlaguerre(lo, k, y * y / 2)
        * np.exp(-y * y / 4)
    )
