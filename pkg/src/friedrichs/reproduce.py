"""Recompute reference tables and compare them with the bundled golden values.

Golden values and tolerances live in ``data/golden.json``; this module only
knows how to compute each cell.  A table passes when every gating cell lies
within its tolerance.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional

from . import coulomb, oscillator
from .core import Box, LevelPair, Potential, SolverConfig, SystemSpec, preset, zeta_to_energy
from .models import Problem, solve

GOLDEN_FILE = "golden.json"
COULOMB_PAIRS = ((2, 1), (3, 1), (4, 1), (3, 2), (4, 2), (4, 3))
LADDER_PAIRS = ((1, 0), (2, 1), (3, 2), (4, 3), (5, 4), (10, 9), (20, 19))
# z1 of the (n, n-1) ladder lies in this zeta box for alpha = 1
LADDER_BOX = Box(0.0, 3.0, -1.2, 0.0)


def load_golden() -> dict:
    """Parsed golden data file."""
    text = resources.files("friedrichs").joinpath("data", GOLDEN_FILE).read_text(encoding="utf-8")
    return json.loads(text)


def table_ids() -> list:
    return list(load_golden()["tables"])


def _key(pair) -> str:
    return f"{pair[0]},{pair[1]}"


# ----------------------------------------------------------------------
# cell computations


class _Context:
    """Presets and a solver configuration shared by all cells of one run."""

    def __init__(self, cfg: Optional[SolverConfig] = None,
                 coulomb_spec: Optional[SystemSpec] = None,
                 osc_spec: Optional[SystemSpec] = None,
                 em_spec: Optional[SystemSpec] = None):
        self.cfg = cfg or SolverConfig()
        self.coulomb = coulomb_spec or preset("paper-coulomb")
        self.osc = osc_spec or preset("paper-osc")
        self.em = em_spec or preset("electron-coulomb")
        self._solutions: dict = {}

    def coulomb_solution(self, pair, alpha: float):
        key = ("c", pair, alpha)
        if key not in self._solutions:
            prob = Problem(self.coulomb, LevelPair(*pair))
            self._solutions[key] = solve(prob, alpha, None, self.cfg, track_z0=False)
        return self._solutions[key]

    def narrowest(self, pair, alpha: float):
        res = self.coulomb_solution(pair, alpha).narrowest_nonstandard()
        if res is None:
            raise LookupError(f"no nonstandard resonance for pair {pair} at alpha={alpha}")
        return res


def _table1(ctx: _Context) -> dict:
    out = {}
    for p in COULOMB_PAIRS:
        pole, _ = coulomb.phi_pole(LevelPair(*p))
        out[f"pole_im[{_key(p)}]"] = pole.imag
        out[f"mean_extent[{_key(p)}]"] = coulomb.mean_extent(LevelPair(*p))
    return out


def _table2(ctx: _Context) -> dict:
    out = {}
    m = ctx.coulomb.mass_energy
    a = ctx.coulomb.alpha
    worst = 0.0
    for p in COULOMB_PAIRS:
        r = ctx.narrowest(p, a)
        out[f"narrowest_energy_mc2[{_key(p)}]"] = r.energy.real / m
        out[f"narrowest_width_mc2[{_key(p)}]"] = r.width / m
        out[f"kappa_mc2[{_key(p)}]"] = coulomb.kappa_mass_units(LevelPair(*p), a)
        for s in (0.25, 4.0):
            k1 = coulomb.kappa(LevelPair(*p), 1.0)
            worst = max(worst, abs(coulomb.kappa(LevelPair(*p), s) / k1 - math.sqrt(s)))
    r = ctx.narrowest((2, 1), a)
    out["narrowest_energy_mev_re[2,1]"] = r.energy.real
    out["narrowest_energy_mev_im[2,1]"] = r.energy.imag
    out["kappa_sqrt_alpha_law"] = worst
    return out


def _table3(ctx: _Context) -> dict:
    out = {}
    for p in COULOMB_PAIRS:
        st = Problem(ctx.coulomb, LevelPair(*p)).standard_branch(ctx.coulomb.alpha, ctx.cfg)
        out[f"standard_width_zeta[{_key(p)}]"] = abs(st.final.imag)
    return out


def _table4(ctx: _Context) -> dict:
    out = {}
    spec = ctx.osc
    for p in LADDER_PAIRS:
        out[f"extent[{_key(p)}]"] = oscillator.pair_extent(*p)
        sol = solve(Problem(spec, LevelPair(*p)), spec.alpha, LADDER_BOX, ctx.cfg, track_z0=False)
        z1 = sol.by_label("z1")
        if z1 is None:
            continue
        e_low = (p[1] + 0.5) * spec.hbar_omega
        out[f"z1_gap_mev[{_key(p)}]"] = z1.energy.real - e_low
        out[f"z1_width_mev[{_key(p)}]"] = z1.width
        out[f"z1_energy_mev[{_key(p)}]"] = z1.energy.real
    return out


def _em_widths(ctx: _Context) -> dict:
    spec = ctx.em
    prob = Problem(spec, LevelPair(2, 1))
    p = prob.pole(spec.alpha)
    box = Box(-0.2 * abs(p), 0.2 * abs(p), 1.2 * p.imag, 0.8 * p.imag)
    sol = solve(prob, spec.alpha, box, ctx.cfg, classify=False)
    widths = sorted(r.width * 1e3 for r in sol.resonances)  # keV
    out = {"nonstandard_count": len(widths)}
    if widths:
        out["nonstandard_width_kev_min"] = widths[0]
        out["nonstandard_width_kev_max"] = widths[-1]
    st = prob.standard_branch(spec.alpha, ctx.cfg)
    out["standard_width_ev"] = abs(zeta_to_energy(spec, prob.pair, st.final).imag) * 1e6
    return out


def _osc_z0(ctx: _Context) -> dict:
    out = {}
    spec = ctx.osc
    a = spec.alpha
    for p in ((1, 0), (6, 5)):
        prob = Problem(spec, LevelPair(*p))
        z = prob.bound_state(a)
        if z is not None:
            out[f"eigenvalue_mev[{_key(p)}]"] = zeta_to_energy(spec, prob.pair, z).real
    z0: dict = {}
    for p in ((2, 0), (3, 0), (4, 0), (5, 0), (6, 0), (7, 0), (8, 0), (3, 1), (4, 1), (5, 1), (6, 1)):
        prob = Problem(spec, LevelPair(*p))
        tr = prob.z0_branch(a, ctx.cfg)
        if tr is not None and tr.terminal_state.value == "reached_alpha_max":
            z0[p] = prob.resonance(tr.final, a)
    for p, r in z0.items():
        if p in ((6, 0), (7, 0), (8, 0)):
            continue
        out[f"z0_width_mev[{_key(p)}]"] = r.width
    e0 = 0.5 * spec.hbar_omega
    ratios = []
    for n in (5, 6, 7, 8):
        r = z0.get((n, 0))
        if r is None:
            continue
        ratio = (r.energy.real - e0) / (n * spec.hbar_omega)
        out[f"z0_plateau_ratio[{n},0]"] = ratio
        ratios.append(ratio)
    out["z0_plateau_decreasing"] = len(ratios) == 4 and all(x > y for x, y in zip(ratios, ratios[1:]))
    st = Problem(spec, LevelPair(4, 0)).standard_branch(a, ctx.cfg)
    out["standard_width_zeta[4,0]"] = abs(st.final.imag)
    return out


def _critical(ctx: _Context) -> dict:
    return {
        "critical_alpha[coulomb 2,1]": coulomb.critical_alpha_exact(LevelPair(2, 1)),
        "critical_alpha[coulomb 3,1]": coulomb.critical_alpha_exact(LevelPair(3, 1)),
        "critical_alpha[oscillator 2,1]": oscillator.critical_alpha_exact(LevelPair(2, 1), ctx.osc.mu),
    }


def _coulomb_spot(ctx: _Context) -> dict:
    m = ctx.coulomb.mass_energy
    out = {}

    def gap(r, alpha):
        # distance above the ground level -alpha^2/2 (units of mc^2)
        return r.energy.real / m + 0.5 * alpha * alpha

    r = ctx.narrowest((2, 1), 2.0)
    out["narrowest_gap_mc2[2,1 alpha=2]"] = gap(r, 2.0)
    out["narrowest_width_mc2[2,1 alpha=2]"] = r.width / m
    ns = ctx.coulomb_solution((3, 1), 2.0).nonstandard()
    if ns:
        out["closest_gap_mc2[3,1 alpha=2]"] = min((gap(x, 2.0) for x in ns), key=lambda g: abs(g - 0.04))
    out["narrowest_gap_mc2[2,1 alpha=0.5]"] = gap(ctx.narrowest((2, 1), 0.5), 0.5)
    out["narrowest_gap_mc2[3,1 alpha=0.5]"] = gap(ctx.narrowest((3, 1), 0.5), 0.5)
    return out


COMPUTE: dict[str, Callable[[_Context], dict]] = {
    "table1": _table1,
    "table2": _table2,
    "table3": _table3,
    "table4": _table4,
    "em-widths": _em_widths,
    "osc-z0-widths": _osc_z0,
    "critical": _critical,
    "coulomb-spot": _coulomb_spot,
}


# ----------------------------------------------------------------------
# comparison


@dataclass
class CellResult:
    table: str
    cell: str
    computed: Optional[float]
    reference: object
    tolerance: str
    deviation: Optional[float]
    passed: bool
    gate: bool = True


def _tolerance_text(cell: dict) -> str:
    if "abs" in cell:
        return f"+-{cell['abs']:g}"
    if "rel" in cell:
        return f"+-{100 * cell['rel']:g}%"
    if "range" in cell:
        lo, hi = cell["range"]
        return f"[{lo:g}, {hi:g}]"
    if "factor" in cell:
        return f"x/{cell['factor']:g}"
    if "decimals" in cell:
        return f"{cell['decimals']} decimals"
    return "exact"


def compare(cell: dict, computed) -> tuple[bool, Optional[float]]:
    """Whether ``computed`` satisfies the golden ``cell`` and its relative deviation."""
    ref = cell["value"]
    if computed is None:
        return False, None
    if isinstance(ref, bool) or cell.get("equal"):
        return computed == ref, None if isinstance(ref, bool) else float(computed - ref)
    computed = float(computed)
    if not math.isfinite(computed):
        return False, None
    dev = (computed - ref) / abs(ref) if ref else computed
    if "abs" in cell:
        return abs(computed - ref) <= cell["abs"] * (1 + 1e-12), dev
    if "rel" in cell:
        return abs(computed - ref) <= cell["rel"] * abs(ref) * (1 + 1e-12), dev
    if "range" in cell:
        lo, hi = cell["range"]
        return lo <= computed <= hi, dev
    if "factor" in cell:
        f = cell["factor"]
        return ref / f <= computed <= ref * f, dev
    if "decimals" in cell:
        return round(computed, cell["decimals"]) == round(ref, cell["decimals"]), dev
    return computed == ref, dev


def reproduce(table_id: str, cfg: Optional[SolverConfig] = None, *, ctx: Optional[_Context] = None) -> list:
    """Compute every cell of ``table_id`` and compare it with the golden value."""
    golden = load_golden()["tables"]
    if table_id not in golden:
        raise KeyError(f"unknown table {table_id!r}; choose from {sorted(golden)}")
    ctx = ctx or _Context(cfg)
    values = COMPUTE[table_id](ctx)
    out = []
    for cell in golden[table_id]:
        got = values.get(cell["id"])
        ok, dev = compare(cell, got)
        out.append(CellResult(table_id, cell["id"], got, cell["value"], _tolerance_text(cell), dev, ok,
                              cell.get("gate", True)))
    return out


def reproduce_many(table_ids, cfg: Optional[SolverConfig] = None) -> list:
    """Run several tables sharing cached solutions."""
    ctx = _Context(cfg)
    out = []
    for t in table_ids:
        out.extend(reproduce(t, ctx=ctx))
    return out


def all_passed(results) -> bool:
    return all(r.passed for r in results if r.gate)
