"""Command-line interface: ``friedrichs solve|sweep|reproduce|list-presets``.

Settings can also come from an INI file (``--config FILE``) holding flat
``key = value`` lines in a section named after the command; flags win over
the file.  Exit codes: 0 ok, 1 usage or configuration error, 2 numerical
failure, 3 reproduction mismatch.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core import PRESETS, Box, DomainError, LevelPair, Potential, SolverConfig, SystemSpec, preset, zeta_to_energy
from .errors import NumericError
from .models import Problem, solve, sweep_alpha

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_MISMATCH = 0, 1, 2, 3
REPORT_SCHEMA = "friedrichs-report/1"
ROW_FIELDS = ("pair", "alpha", "branch", "re_zeta", "im_zeta", "re_E_MeV", "im_E_MeV", "width_MeV", "residual")
SWEEP_FIELDS = ("alpha", "re_zeta", "im_zeta", "re_E_MeV", "im_E_MeV")
CONFIG_KEYS = {
    "preset", "pair", "alpha", "alpha_grid", "mass_mev", "box", "format", "out", "quad_tol", "newton_tol",
}


class UsageError(Exception):
    """Bad command line or configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------
# value formatting


def fmt_number(x) -> str:
    """Text form of a number for CSV: scientific notation when ``0 < |x| < 1e-3``."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        return "0"
    if not math.isfinite(x):
        return str(x)
    if abs(x) < 1e-3:
        return f"{x:.10e}"
    return f"{x:.12g}"


def _cell(v) -> str:
    return v if isinstance(v, str) else fmt_number(v)


def to_csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_cell(r[f]) for f in fields])
    return buf.getvalue()


def to_json(meta: dict, rows: Sequence[dict]) -> str:
    def clean(v):
        if isinstance(v, (np.floating,)):
            return float(v)
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, float) and not math.isfinite(v):
            return str(v)
        return v

    body = {"meta": meta, "rows": [{k: clean(v) for k, v in r.items()} for r in rows]}
    return json.dumps(body, indent=2) + "\n"


def to_table(rows: Sequence[dict], fields: Sequence[str]) -> str:
    def show(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (bool, np.bool_)):
            return "yes" if v else "no"
        if isinstance(v, (int, np.integer)):
            return str(v)
        v = float(v)
        return f"{v:.4e}" if v != 0 and (abs(v) < 1e-3 or abs(v) >= 1e6) else f"{v:.6g}"

    cells = [list(fields)] + [[show(r[f]) for f in fields] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(fields))]
    lines = ["  ".join(c[i].rjust(widths[i]) for i in range(len(fields))) for c in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render(fmt: str, meta: dict, rows: Sequence[dict], fields: Sequence[str]) -> str:
    if fmt == "json":
        return to_json(meta, rows)
    if fmt == "csv":
        return to_csv(rows, fields)
    return to_table(rows, fields)


# ----------------------------------------------------------------------
# argument parsing


def parse_pair(text: str) -> LevelPair:
    try:
        return LevelPair.parse(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad --pair {text!r}: {exc}") from None


def parse_grid(text: str) -> np.ndarray:
    """``a:b:n`` -> ``n`` evenly spaced couplings from ``a`` to ``b``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad --alpha-grid {text!r}; expected a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad --alpha-grid {text!r}; expected a:b:n") from None
    if n < 1:
        raise UsageError("--alpha-grid needs at least one point")
    if n > 1 and a == b:
        raise UsageError("--alpha-grid endpoints coincide")
    if min(a, b) < 0:
        raise UsageError("couplings must be non-negative")
    return np.linspace(a, b, n)


def parse_box(text: str) -> Box:
    try:
        return Box.parse(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad --box {text!r}: {exc}") from None


def _add_common(p: argparse.ArgumentParser, *, grid: bool = True) -> None:
    p.add_argument("--preset", help=f"system preset ({', '.join(PRESETS)})")
    p.add_argument("--pair", help="level pair N,M with N > M")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, help="coupling constant")
    if grid:
        g.add_argument("--alpha-grid", help="coupling grid a:b:n (n evenly spaced points)")
    p.add_argument("--mass-mev", type=float, help="particle rest energy in MeV (overrides the preset)")
    p.add_argument("--box", help="search rectangle in zeta: re0,re1,im0,im1")
    _add_output(p)
    p.add_argument("--quad-tol", type=float, help="relative quadrature tolerance")
    p.add_argument("--newton-tol", type=float, help="residual tolerance |f| for Newton polishing")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json", "table"), help="output format (default table)")
    p.add_argument("--out", help="output path (a directory for sweep)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="friedrichs", description="Resonances of a two-level system coupled to a massless field.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="INI file with one section per command")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("solve", help="all resonances in a search box")
    _add_common(p)
    p = sub.add_parser("sweep", help="follow resonances along a coupling grid")
    _add_common(p)
    p = sub.add_parser("reproduce", help="recompute a reference table and compare")
    p.add_argument("table", nargs="?", help="table id, or 'all'")
    _add_output(p)
    p.add_argument("--quad-tol", type=float, help="relative quadrature tolerance")
    p.add_argument("--newton-tol", type=float, help="residual tolerance |f| for Newton polishing")
    p = sub.add_parser("list-presets", help="show the built-in systems")
    _add_output(p)
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the command's section of ``--config``."""
    if not args.config:
        return args
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(args.config, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not cp.has_section(args.command):
        return args
    for key, value in cp.items(args.command):
        k = key.replace("-", "_")
        if k == "table" and args.command == "reproduce":
            pass
        elif k not in CONFIG_KEYS:
            raise UsageError(f"config {args.config} [{args.command}]: unknown key {key!r}")
        if not hasattr(args, k):
            raise UsageError(f"config {args.config} [{args.command}]: key {key!r} does not apply here")
        if getattr(args, k) is not None:
            continue
        if k in ("alpha", "mass_mev", "quad_tol", "newton_tol"):
            try:
                value = float(value)
            except ValueError:
                raise UsageError(f"config {args.config} [{args.command}]: {key} = {value!r} is not a number") from None
        setattr(args, k, value)
    if getattr(args, "alpha", None) is not None and getattr(args, "alpha_grid", None) is not None:
        raise UsageError("give exactly one of alpha and alpha_grid")
    return args


def _system(args) -> SystemSpec:
    spec = preset(args.preset or "paper-coulomb")
    if args.mass_mev is not None:
        if spec.kind is Potential.OSCILLATOR:
            spec = SystemSpec(spec.kind, args.mass_mev, spec.alpha, delta=spec.delta)
        else:
            spec = replace(spec, mass_energy=float(args.mass_mev))
    return spec


def _solver_config(args) -> SolverConfig:
    kw = {}
    if getattr(args, "quad_tol", None) is not None:
        kw["quad_rel_tol"] = float(args.quad_tol)
    if getattr(args, "newton_tol", None) is not None:
        kw["newton_tol"] = float(args.newton_tol)
    try:
        return SolverConfig(**kw)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _alphas(args, spec: SystemSpec) -> np.ndarray:
    if getattr(args, "alpha_grid", None):
        return parse_grid(args.alpha_grid)
    if args.alpha is not None:
        if args.alpha < 0:
            raise UsageError("alpha must be non-negative")
        return np.array([float(args.alpha)])
    return np.array([spec.alpha])


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _meta(command: str, spec: Optional[SystemSpec], **extra) -> dict:
    meta = {"schema": REPORT_SCHEMA, "version": __version__, "command": command}
    if spec is not None:
        meta["system"] = {
            "kind": spec.kind.value,
            "mass_MeV": spec.mass_energy,
            "delta_fm": spec.delta,
            "hbar_omega_MeV": spec.hbar_omega,
            "mu": spec.mu,
        }
    meta.update(extra)
    return meta


def _resonance_row(r) -> dict:
    return {
        "pair": str(r.pair),
        "alpha": r.alpha,
        "branch": str(r.branch),
        "re_zeta": r.zeta.real,
        "im_zeta": r.zeta.imag,
        "re_E_MeV": r.energy.real,
        "im_E_MeV": r.energy.imag,
        "width_MeV": r.width,
        "residual": r.residual,
    }


# ----------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    if not args.pair:
        raise UsageError("solve needs --pair")
    spec = _system(args)
    pair = parse_pair(args.pair)
    alphas = _alphas(args, spec)
    box = parse_box(args.box) if args.box else None
    cfg = _solver_config(args)
    try:
        problem = Problem(spec, pair)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rows, notes = [], []
    for a in alphas:
        sol = solve(problem, float(a), box, cfg)
        rows.extend(_resonance_row(r) for r in sol.resonances)
        notes.extend(f"alpha={a:g}: {n}" for n in sol.notes)
    for n in notes:
        print(f"note: {n}", file=sys.stderr)
    meta = _meta("solve", spec, pair=str(pair), alphas=[float(a) for a in alphas],
                 box=None if box is None else [box.re0, box.re1, box.im0, box.im1],
                 solver={"quad_rel_tol": cfg.quad_rel_tol, "newton_tol": cfg.newton_tol}, notes=notes)
    _emit(render(args.format or "table", meta, rows, ROW_FIELDS), args.out)
    return EXIT_OK


def _branch_name(label: str, used: dict) -> str:
    base = re.sub(r"[^A-Za-z0-9_.-]", "_", label)
    used[base] = used.get(base, 0) + 1
    return base if used[base] == 1 else f"{base}-{used[base]}"


def cmd_sweep(args) -> int:
    if not args.pair:
        raise UsageError("sweep needs --pair")
    if not args.alpha_grid:
        raise UsageError("sweep needs --alpha-grid a:b:n")
    spec = _system(args)
    pair = parse_pair(args.pair)
    alphas = parse_grid(args.alpha_grid)
    if alphas[0] == 0:
        raise UsageError("a sweep cannot start at alpha = 0")
    cfg = _solver_config(args)
    box = parse_box(args.box) if args.box else None
    try:
        trajectories = sweep_alpha(Problem(spec, pair), alphas, box, cfg)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    outdir = Path(args.out or "sweep-output")
    outdir.mkdir(parents=True, exist_ok=True)
    used: dict = {}
    summary = []
    for traj in trajectories:
        name = _branch_name(f"{pair.upper}-{pair.lower}_{traj.label}", used)
        rows = []
        for a, z in traj.points:
            e = zeta_to_energy(spec.with_alpha(a), pair, z)
            rows.append({"alpha": a, "re_zeta": z.real, "im_zeta": z.imag, "re_E_MeV": e.real, "im_E_MeV": e.imag})
        path = outdir / f"{name}.csv"
        path.write_text(to_csv(rows, SWEEP_FIELDS), encoding="utf-8")
        last = traj.alphas[-1]
        summary.append({
            "branch": str(traj.label),
            "file": path.name,
            "points": len(rows),
            "terminal_state": traj.terminal_state.value,
            "final_alpha": last,
            "re_zeta": traj.final.real,
            "im_zeta": traj.final.imag,
        })
        if traj.diagnostic:
            print(f"note: {name}: {traj.diagnostic}", file=sys.stderr)
    fields = ("branch", "file", "points", "terminal_state", "final_alpha", "re_zeta", "im_zeta")
    meta = _meta("sweep", spec, pair=str(pair), alpha_grid=[float(alphas[0]), float(alphas[-1]), len(alphas)],
                 out=str(outdir))
    sys.stdout.write(render(args.format or "table", meta, summary, fields))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import all_passed, reproduce_many, table_ids

    ids = table_ids()
    table = args.table
    if not table:
        raise UsageError(f"reproduce needs a table id: {', '.join(ids)} or all")
    chosen = ids if table == "all" else [table]
    if table != "all" and table not in ids:
        raise UsageError(f"unknown table {table!r}; choose from {', '.join(ids)} or all")
    results = reproduce_many(chosen, _solver_config(args))
    rows = []
    for r in results:
        status = "pass" if r.passed else ("fail" if r.gate else "info")
        rows.append({
            "table": r.table,
            "cell": r.cell,
            "computed": r.computed if r.computed is not None else "missing",
            "reference": r.reference,
            "tolerance": r.tolerance,
            "deviation": r.deviation if r.deviation is not None else "",
            "status": status,
        })
    fields = ("table", "cell", "computed", "reference", "tolerance", "deviation", "status")
    ok = all_passed(results)
    meta = _meta("reproduce", None, tables=chosen, passed=ok)
    _emit(render(args.format or "table", meta, rows, fields), args.out)
    failed = [r.cell for r in results if r.gate and not r.passed]
    if failed:
        print("mismatch: " + ", ".join(failed), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_list_presets(args) -> int:
    rows = []
    for name, s in PRESETS.items():
        rows.append({
            "name": name,
            "kind": s.kind.value,
            "mass_MeV": s.mass_energy,
            "alpha": s.alpha,
            "delta_fm": s.delta if s.delta is not None else "",
            "hbar_omega_MeV": s.hbar_omega if s.hbar_omega is not None else "",
            "mu": s.mu if s.mu is not None else "",
        })
    fields = ("name", "kind", "mass_MeV", "alpha", "delta_fm", "hbar_omega_MeV", "mu")
    _emit(render(args.format or "table", _meta("list-presets", None), rows, fields), args.out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "reproduce": cmd_reproduce, "list-presets": cmd_list_presets}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"friedrichs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"friedrichs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"friedrichs: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"friedrichs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
