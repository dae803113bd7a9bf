"""Hydrogenic (1/r) coupling function and resonance equation.

The reduced coupling between a p state ``n_h`` and an s state ``n_l``,

    Phi(y) = int_0^inf j1(y rho) R_h(rho) R_l'(rho) rho d rho,

is obtained exactly: every term is ``rho**k exp(-beta rho) j1(y rho)`` whose
integral is a rational function of ``y``.  The result is stored as

    Phi(y) = sign * sqrt(prefactor_sq) * y * N(y**2) / (b**2 + c**2 y**2)**M

with integer-coefficient ``N`` and ``b/c = (n_h + n_l)/(n_h n_l)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd

import numpy as np

from . import _exact as ex
from .core import Box, DomainError, LevelPair, Potential
from .errors import SingularInputError
from .solver.resolvent import Resolvent


@dataclass(frozen=True)
class ReducedRadialWavefunction:
    """``R(rho) = sqrt(norm_sq) * poly(rho) * exp(-rho/n)`` with ``rho = r/a``."""

    n: int
    l: int
    norm_sq: Fraction
    poly: tuple

    def norm_integral(self) -> Fraction:
        """Exact ``int_0^inf R(rho)**2 rho**2 d rho``."""
        sq = ex.shift_degree(ex.mul(self.poly, self.poly), 2)
        beta = Fraction(2, self.n)
        return self.norm_sq * sum(c * ex.exp_moment(k, beta) for k, c in enumerate(sq))

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        return math.sqrt(self.norm_sq) * ex.evaluate([float(c) for c in self.poly], rho) * np.exp(
            -rho / self.n
        )

    def derivative(self, rho):
        rho = np.asarray(rho, dtype=float)
        p = [float(c) for c in self.poly]
        dp = [float(c) for c in ex.deriv(self.poly)]
        val = ex.evaluate(dp, rho) - ex.evaluate(p, rho) / self.n
        return math.sqrt(self.norm_sq) * val * np.exp(-rho / self.n)


def _laguerre(k: int, a: int) -> tuple:
    """Generalized Laguerre polynomial ``L_k^a(x)`` with exact coefficients."""
    return ex.poly(Fraction((-1) ** i * comb(k + a, k - i), factorial(i)) for i in range(k + 1))


@lru_cache(maxsize=None)
def radial_wavefunction(n: int, l: int) -> ReducedRadialWavefunction:
    if not (isinstance(n, int) and isinstance(l, int)) or l < 0 or l + 1 > n:
        raise DomainError(f"invalid hydrogen quantum numbers n={n}, l={l}")
    norm_sq = Fraction(8, n**3) * Fraction(factorial(n - l - 1), 2 * n * factorial(n + l))
    lag = ex.compose_scale(_laguerre(n - l - 1, 2 * l + 1), Fraction(2, n))
    poly = ex.mul(ex.shift_degree((Fraction(2, n) ** l,), l), lag)
    return ReducedRadialWavefunction(n, l, norm_sq, poly)


@dataclass(frozen=True)
class RationalCoupling:
    """Exact reduced coupling ``Phi`` for one level pair (see module docstring)."""

    pair: LevelPair
    sign: int
    prefactor_sq: Fraction
    numerator: tuple
    b: int
    c: int
    power: int

    @property
    def prefactor(self) -> float:
        return self.sign * math.sqrt(self.prefactor_sq)

    @property
    def pole(self) -> complex:
        return complex(0.0, -self.b / self.c)

    @property
    def pole_exact(self) -> Fraction:
        """Imaginary part of the lower half-plane pole, as an exact rational."""
        return -Fraction(self.b, self.c)

    def prefactor_text(self) -> str:
        a, s = ex.split_square(self.prefactor_sq)
        sign = "-" if self.sign < 0 else ""
        root = "" if s == 1 else f"*sqrt({s})"
        return f"{sign}{a}{root}"

    def __str__(self):
        terms = " + ".join(f"{c}*y^{2 * i}" for i, c in enumerate(self.numerator))
        return (
            f"{self.prefactor_text()} * y * ({terms}) / "
            f"({self.b**2} + {self.c**2}*y^2)^{self.power}"
        )

    # numerics -----------------------------------------------------------
    def _ratio(self, y):
        """``N(y**2) / (b**2 + c**2 y**2)**M``, stable for large ``|y|``."""
        y = np.asarray(y, dtype=complex)
        num = [float(x) for x in self.numerator]
        b2, c2, m = float(self.b**2), float(self.c**2), self.power
        big = np.abs(y) > 1.0
        u = y * y
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            small_val = ex.evaluate(num, u) / (b2 + c2 * u) ** m
            v = np.where(big, 1.0 / np.where(big, u, 1.0), 0.0)
            d = len(num) - 1
            rev = num[::-1]
            big_val = ex.evaluate(rev, v) * v ** (m - d) / (c2 + b2 * v) ** m
        return np.where(big, big_val, small_val)

    def _ratio_prime(self, y):
        """d/dy of ``_ratio``."""
        y = np.asarray(y, dtype=complex)
        dnum = [float(x) for x in ex.deriv(self.numerator)]
        b2, c2, m = float(self.b**2), float(self.c**2), self.power
        u = y * y
        den = b2 + c2 * u
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return 2 * y * ex.evaluate(dnum, u) / den**m - self._ratio(y) * 2 * m * c2 * y / den

    def __call__(self, y):
        y = np.asarray(y, dtype=complex)
        out = self.prefactor * y * self._ratio(y)
        return out if out.ndim else complex(out)

    def density(self, y):
        """``Phi(y)**2 / y``, the integrand of the resonance equation."""
        y = np.asarray(y, dtype=complex)
        r = self._ratio(y)
        out = float(self.prefactor_sq) * y * r * r
        return out if out.ndim else complex(out)

    def density_prime(self, y):
        y = np.asarray(y, dtype=complex)
        r = self._ratio(y)
        rp = self._ratio_prime(y)
        out = float(self.prefactor_sq) * (r * r + 2 * y * r * rp)
        return out if out.ndim else complex(out)

    # exact integrals ------------------------------------------------------
    def _square_num(self):
        return ex.mul(self.numerator, self.numerator)

    def integral_over_y(self) -> Fraction:
        """Exact ``int_0^inf Phi(y)**2 / y dy`` (rational)."""
        # u = y^2: (1/2) int N(u)^2 / (b^2 + c^2 u)^(2M) du
        p = 2 * self.power
        b2, c2 = self.b**2, self.c**2
        tot = Fraction(0)
        for j, a in enumerate(self._square_num()):
            if a == 0:
                continue
            beta = Fraction(factorial(j) * factorial(p - j - 2), factorial(p - 1))
            tot += a * Fraction(b2) ** (j + 1 - p) / Fraction(c2) ** (j + 1) * beta
        return self.prefactor_sq * tot / 2

    def integral_over_y2_by_pi(self) -> Fraction:
        """Exact ``int_0^inf Phi(y)**2 / y**2 dy`` divided by pi (rational)."""
        p = 2 * self.power
        b, c = self.b, self.c
        tot = Fraction(0)
        for j, a in enumerate(self._square_num()):
            if a == 0:
                continue
            # int_0^inf y^(2j) / (b^2 + c^2 y^2)^p dy
            #   = b^(2j+1-2p) c^-(2j+1) Gamma(j+1/2) Gamma(p-j-1/2) / (2 Gamma(p))
            g1 = Fraction(factorial(2 * j), 4**j * factorial(j))
            k = p - j - 1
            g2 = Fraction(factorial(2 * k), 4**k * factorial(k))
            tot += a * Fraction(b) ** (2 * j + 1 - p * 2) / Fraction(c) ** (2 * j + 1) * g1 * g2 / (
                2 * factorial(p - 1)
            )
        return self.prefactor_sq * tot


def _im_re_powers(beta: Fraction, p: int) -> tuple[tuple, tuple]:
    """Real and imaginary parts of ``(beta + i y)**p`` as polynomials in ``y``."""
    re = [Fraction(0)] * (p + 1)
    im = [Fraction(0)] * (p + 1)
    for j, c in enumerate(ex.binomial_expand(beta, 1, p)):
        k = j % 4
        if k == 0:
            re[j] += c
        elif k == 1:
            im[j] += c
        elif k == 2:
            re[j] -= c
        else:
            im[j] -= c
    return ex.poly(re), ex.poly(im)


@lru_cache(maxsize=None)
def build_phi_red(pair: LevelPair) -> RationalCoupling:
    """Exact reduced coupling for ``R_h = R_{n_h,1}``, ``R_l = R_{n_l,0}``."""
    pair.check(Potential.COULOMB)
    nh, nl = pair.upper, pair.lower
    rh = radial_wavefunction(nh, 1)
    rl = radial_wavefunction(nl, 0)
    dl = ex.add(ex.deriv(rl.poly), ex.scale(rl.poly, Fraction(-1, nl)))
    q = ex.shift_degree(ex.mul(rh.poly, dl), 1)
    beta = Fraction(1, nh) + Fraction(1, nl)
    top = len(q) - 1
    t = (beta * beta, Fraction(0), Fraction(1))

    # Phi = sqrt(N_h N_l) * num / (y^2 * T^top),  T = beta^2 + y^2
    num: tuple = ()
    for k, qk in enumerate(q):
        if qk == 0:
            continue
        if k < 2:
            raise ArithmeticError("integrand must vanish to second order at the origin")
        _, im1 = _im_re_powers(beta, k - 1)
        re2, _ = _im_re_powers(beta, k)
        a = ex.scale(ex.mul(im1, ex.power(t, top - k + 1)), factorial(k - 2))
        b = ex.scale(ex.shift_degree(ex.mul(re2, ex.power(t, top - k)), 1), -factorial(k - 1))
        num = ex.add(num, ex.scale(ex.add(a, b), qk))
    num = ex.exact_div(num, (0, 0, 1))
    power = top
    while power > 0:
        quo, rem = ex.divmod_poly(num, t)
        if rem:
            break
        num, power = quo, power - 1

    bb, cc = nh + nl, nh * nl
    g = gcd(bb, cc)
    bb, cc = bb // g, cc // g
    # T = (b^2 + c^2 y^2) / c^2 with reduced b, c (beta = b/c)
    num = ex.scale(num, Fraction(cc * cc) ** power)
    odd = ex.poly(num[1::2])
    if any(num[0::2]):
        raise ArithmeticError("coupling numerator is not odd")
    # make N primitive with integer coefficients and positive constant term
    den_lcm = 1
    for x in odd:
        den_lcm = den_lcm * x.denominator // gcd(den_lcm, x.denominator)
    ints = [int(x * den_lcm) for x in odd]
    content = 0
    for x in ints:
        content = gcd(content, abs(x))
    lead = next(x for x in ints if x != 0)
    sgn = 1 if lead > 0 else -1
    numerator = ex.poly(Fraction(x * sgn, content) for x in ints)
    factor = Fraction(content * sgn, den_lcm)
    sign = 1 if factor > 0 else -1
    prefactor_sq = rh.norm_sq * rl.norm_sq * factor * factor
    return RationalCoupling(pair, sign, prefactor_sq, numerator, bb, cc, power)


def phi_pole(pair: LevelPair) -> tuple[complex, int]:
    """Lower half-plane pole of ``Phi`` and its order."""
    cpl = build_phi_red(pair)
    return cpl.pole, cpl.power


def pole_law(pair: LevelPair) -> Fraction:
    """Imaginary part of the pole predicted from the decay lengths: ``-(n_h+n_l)/(n_h n_l)``."""
    return -Fraction(pair.upper + pair.lower, pair.upper * pair.lower)


def spacing_factor(pair: LevelPair) -> float:
    """``1/n_l**2 - 1/n_h**2``."""
    return 1.0 / pair.lower**2 - 1.0 / pair.upper**2


def mu_coulomb(pair: LevelPair, alpha: float) -> float:
    """Kernel slope ``alpha m c^2 / E_hl = 2 / (alpha * (1/n_l^2 - 1/n_h^2))``."""
    return 2.0 / (alpha * spacing_factor(pair))


def mean_extent(pair: LevelPair) -> float:
    """Half the harmonic mean of the two decay lengths, ``n_h n_l/(n_h + n_l)``."""
    return pair.upper * pair.lower / (pair.upper + pair.lower)


@dataclass(frozen=True)
class PoleEnergy:
    value: complex
    pair: LevelPair
    alpha: float


def c_value(pair: LevelPair, alpha: float) -> PoleEnergy:
    """Energy of the integrand pole in units of ``mc^2``.

    The real part is the lower level energy ``-alpha**2 / (2 n_l**2)``.
    """
    pair.check(Potential.COULOMB)
    im = float(pole_law(pair))
    return PoleEnergy(complex(-0.5 * alpha**2 / pair.lower**2, alpha * im), pair, alpha)


def kappa(pair: LevelPair, alpha: float) -> float:
    """Coupling strength ``(2 int |g_red|^2 dy / y)**(1/2)`` in level-spacing units.

    ``|g_red|^2 = alpha**5 (mc^2/E_hl)**2 Phi**2 / pi`` and the ``y`` integral is
    done exactly.
    """
    cpl = build_phi_red(pair)
    d = spacing_factor(pair)
    return math.sqrt(8.0 * alpha / (math.pi * d * d) * float(cpl.integral_over_y()))


def kappa_mass_units(pair: LevelPair, alpha: float) -> float:
    """:func:`kappa` rescaled from level-spacing units to ``mc^2`` units.

    Multiplies by ``E_hl / mc^2 = alpha**2 d / 2``; the tabulated strengths at
    ``alpha = 1`` are quoted in this unit.
    """
    return kappa(pair, alpha) * alpha * alpha * spacing_factor(pair) / 2.0


def critical_alpha_exact(pair: LevelPair) -> float:
    """Coupling at which ``f(0) = 0``: a resonance reaches threshold and turns real.

    ``f(0) = -1 + 4 alpha**2 / (pi d) * int Phi**2 / y**2 dy``.
    """
    cpl = build_phi_red(pair)
    d = spacing_factor(pair)
    return math.sqrt(d / (4.0 * float(cpl.integral_over_y2_by_pi())))


def resolvent_weight(pair: LevelPair, alpha: float) -> float:
    d = spacing_factor(pair)
    return 8.0 * alpha / (math.pi * d * d)


@lru_cache(maxsize=256)
def coulomb_resolvent(pair: LevelPair, alpha: float, rel_tol: float = 1e-13) -> Resolvent:
    """Second-sheet resolvent function ``f_plus`` for one pair and coupling."""
    if not alpha > 0:
        raise DomainError("alpha must be positive to build the resolvent")
    cpl = build_phi_red(pair)
    ratio = cpl.b / cpl.c
    mu = mu_coulomb(pair, alpha)
    return Resolvent(
        cpl.density,
        cpl.density_prime,
        resolvent_weight(pair, alpha),
        mu,
        y_max=12.0 * max(1.0, ratio),
        tail=True,
        threshold_integral=math.pi * float(cpl.integral_over_y2_by_pi()),
        poles=((mu * cpl.pole, 2 * cpl.power),),
        rel_tol=rel_tol,
    )


def f_plus_coulomb(zeta, pair: LevelPair, alpha: float):
    """Continued resolvent function in the explicit hydrogenic form.

    ``zeta - 1 - (8/pi) d**-2 alpha int Phi**2/(zeta - mu y) dy/y
    + 16 i d**-2 alpha Phi(zeta/mu)**2 / zeta`` with ``d = 1/n_l**2 - 1/n_h**2``.
    The last term is omitted for ``Im(zeta) > 0``.
    """
    z = np.asarray(zeta, dtype=complex)
    if np.any(z == 0):
        raise SingularInputError("f_plus is singular at zeta = 0")
    if alpha == 0:
        out = z - 1.0
        return out if out.ndim else complex(out)
    res = coulomb_resolvent(pair, float(alpha))
    cpl = build_phi_red(pair)
    d = spacing_factor(pair)
    mu = res.slope
    out = z - 1.0 - res.weight * res.integral(z)
    extra = 16j / d**2 * alpha * cpl(z / mu) ** 2 / np.where(z == 0, 1, z)
    out = np.where(z.imag <= 0, out + extra, out)
    return out if out.ndim else complex(out)


def f_first_sheet_coulomb(zeta, pair: LevelPair, alpha: float):
    return coulomb_resolvent(pair, float(alpha)).first_sheet(zeta)


def default_box(pair: LevelPair, alpha: float) -> Box:
    """zeta-image of ``[Re C - 3|Im C|, 1.5] x [3 Im C, 0]`` (energies in mc^2 units)."""
    c = c_value(pair, alpha).value
    lo = -0.5 * alpha**2 / pair.lower**2
    e_hl = 0.5 * spacing_factor(pair) * alpha**2
    re0 = (c.real - 3 * abs(c.imag) - lo) / e_hl
    re1 = (1.5 - lo) / e_hl
    im0 = 3 * c.imag / e_hl
    return Box(re0, re1, im0, 0.0)

