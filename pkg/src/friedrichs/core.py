"""Domain types and unit conversions shared by both potentials.

Everything numeric is carried in the dimensionless variable ``zeta``; the
physical complex energy is ``E_lower + (E_upper - E_lower) * zeta``.  Energies
are in MeV, lengths in Fermi.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

HBARC_MEV_FM = 197.3269804


class Potential(str, enum.Enum):
    COULOMB = "coulomb"
    OSCILLATOR = "oscillator"


class DomainError(ValueError):
    """An argument lies outside the domain of the model."""


@dataclass(frozen=True)
class SystemSpec:
    """Particle, potential and coupling strength.

    For the oscillator ``alpha`` is the reduced coupling
    ``lambda / (sqrt(delta) * hbar_omega)`` and ``hbar_omega``/``mu`` are derived
    from ``delta`` and ``mass_energy`` unless given explicitly.
    """

    kind: Potential
    mass_energy: float
    alpha: float
    delta: Optional[float] = None
    hbar_omega: Optional[float] = None
    mu: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Potential(self.kind))
        if not self.mass_energy > 0:
            raise DomainError(f"mass_energy must be positive, got {self.mass_energy}")
        if self.alpha < 0:
            raise DomainError(f"alpha must be non-negative, got {self.alpha}")
        if self.kind is Potential.OSCILLATOR:
            if self.delta is None or not self.delta > 0:
                raise DomainError("oscillator requires delta > 0")
            if self.hbar_omega is None:
                object.__setattr__(
                    self, "hbar_omega", HBARC_MEV_FM**2 / (self.mass_energy * self.delta**2)
                )
            if self.mu is None:
                object.__setattr__(self, "mu", HBARC_MEV_FM / (self.hbar_omega * self.delta))

    def with_alpha(self, alpha: float) -> "SystemSpec":
        return replace(self, alpha=float(alpha))


@dataclass(frozen=True, order=True)
class LevelPair:
    """Upper and lower level of the retained transition."""

    upper: int
    lower: int

    def __post_init__(self):
        if not (isinstance(self.upper, int) and isinstance(self.lower, int)):
            raise DomainError("level numbers must be integers")
        if self.upper <= self.lower or self.lower < 0:
            raise DomainError(f"need upper > lower >= 0, got ({self.upper},{self.lower})")

    def check(self, kind: Potential) -> "LevelPair":
        if Potential(kind) is Potential.COULOMB and self.lower < 1:
            raise DomainError("hydrogen principal numbers start at 1")
        return self

    @classmethod
    def parse(cls, text: str) -> "LevelPair":
        a, b = (int(t) for t in text.replace("(", "").replace(")", "").split(","))
        return cls(a, b)

    def __str__(self):
        return f"({self.upper},{self.lower})"


class BranchKind(str, enum.Enum):
    STANDARD = "standard"
    NONSTANDARD = "nonstandard"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BranchLabel:
    """``standard``, ``nonstandard`` with optional index (z0, z1, ...) or ``unknown``."""

    kind: BranchKind
    index: Optional[int] = None

    def __str__(self):
        if self.kind is BranchKind.NONSTANDARD and self.index is not None:
            return f"z{self.index}"
        return self.kind.value


STANDARD = BranchLabel(BranchKind.STANDARD)
NONSTANDARD = BranchLabel(BranchKind.NONSTANDARD)
UNKNOWN = BranchLabel(BranchKind.UNKNOWN)


@dataclass(frozen=True)
class Resonance:
    zeta: complex
    energy: complex
    width: float
    branch: BranchLabel
    pair: LevelPair
    alpha: float
    residual: float = 0.0
    bound_state: bool = False


@dataclass(frozen=True)
class Box:
    """Closed rectangle ``[re0, re1] x [im0, im1]`` in the zeta plane."""

    re0: float
    re1: float
    im0: float
    im1: float

    def __post_init__(self):
        if not (self.re0 < self.re1 and self.im0 < self.im1):
            raise DomainError(f"degenerate box {self}")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))

    @property
    def width(self) -> float:
        return self.re1 - self.re0

    @property
    def height(self) -> float:
        return self.im1 - self.im0

    def contains(self, z: complex, strict: bool = False) -> bool:
        if strict:
            return self.re0 < z.real < self.re1 and self.im0 < z.imag < self.im1
        return self.re0 <= z.real <= self.re1 and self.im0 <= z.imag <= self.im1

    def split(self) -> tuple["Box", "Box"]:
        """Halve along the longer side."""
        if self.width >= self.height:
            m = 0.5 * (self.re0 + self.re1)
            return Box(self.re0, m, self.im0, self.im1), Box(m, self.re1, self.im0, self.im1)
        m = 0.5 * (self.im0 + self.im1)
        return Box(self.re0, self.re1, self.im0, m), Box(self.re0, self.re1, m, self.im1)

    @classmethod
    def parse(cls, text: str) -> "Box":
        return cls(*(float(t) for t in text.split(",")))


@dataclass(frozen=True)
class SolverConfig:
    search_box: Optional[Box] = None
    quad_rel_tol: float = 1e-13
    newton_tol: float = 1e-10
    max_subdivision_depth: int = 40
    alpha_step_init: float = 0.05
    jump_factor: float = 0.25
    max_halvings: int = 12

    def __post_init__(self):
        if not (self.quad_rel_tol > 0 and self.newton_tol > 0 and self.alpha_step_init > 0):
            raise DomainError("tolerances and steps must be positive")
        if self.search_box is not None and self.search_box.im0 > 0:
            raise DomainError("search box must reach into the lower half-plane")


def level_energy(spec: SystemSpec, n: int) -> float:
    """Unperturbed energy of level ``n`` in MeV."""
    if spec.kind is Potential.COULOMB:
        if n < 1:
            raise DomainError(f"hydrogen level n={n} < 1")
        return -(spec.alpha**2) * spec.mass_energy / (2.0 * n * n)
    if n < 0:
        raise DomainError(f"oscillator level n={n} < 0")
    return (n + 0.5) * spec.hbar_omega


def level_spacing(spec: SystemSpec, pair: LevelPair) -> float:
    if spec.kind is Potential.COULOMB:
        pair.check(spec.kind)
        d = 1.0 / pair.lower**2 - 1.0 / pair.upper**2
        return 0.5 * d * spec.alpha**2 * spec.mass_energy
    return (pair.upper - pair.lower) * spec.hbar_omega


def zeta_to_energy(spec: SystemSpec, pair: LevelPair, zeta: complex) -> complex:
    lo = level_energy(spec, pair.lower)
    return lo + level_spacing(spec, pair) * zeta


def energy_to_zeta(spec: SystemSpec, pair: LevelPair, energy: complex) -> complex:
    lo = level_energy(spec, pair.lower)
    return (energy - lo) / level_spacing(spec, pair)


def make_resonance(
    spec: SystemSpec,
    pair: LevelPair,
    zeta: complex,
    branch: BranchLabel = UNKNOWN,
    residual: float = 0.0,
    bound_state: bool = False,
) -> Resonance:
    zeta = complex(zeta)
    if bound_state:
        zeta = complex(zeta.real, 0.0)
    e = complex(zeta_to_energy(spec, pair, zeta))
    return Resonance(
        zeta=zeta,
        energy=e,
        width=abs(e.imag),
        branch=branch,
        pair=pair,
        alpha=spec.alpha,
        residual=float(residual),
        bound_state=bound_state,
    )


PRESETS = {
    "paper-coulomb": SystemSpec(Potential.COULOMB, mass_energy=220.0, alpha=1.0),
    "paper-osc": SystemSpec(Potential.OSCILLATOR, mass_energy=98.6, alpha=1.0, delta=1.0),
    "electron-coulomb": SystemSpec(Potential.COULOMB, mass_energy=0.511, alpha=1.0 / 137.0),
}


def preset(name: str) -> SystemSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
