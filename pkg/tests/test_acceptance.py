"""Acceptance criteria 1-10 at their stated tolerances.

Each test records one line in ``RESULTS``; the lines are printed at the end
of the pytest run (see ``conftest.py``) or when this file is run directly.
"""
import sys
from collections import defaultdict

import pytest

import test_coulomb as tc
import test_oscillator as to
import test_solver as ts
from friedrichs import LevelPair, preset
from friedrichs.reproduce import reproduce_many, table_ids

RESULTS: dict = {}
TITLES = {
    1: "pole positions",
    2: "narrowest resonances, m = 220 MeV, alpha = 1",
    3: "kappa row and sqrt(alpha) law",
    4: "electromagnetic regime widths",
    5: "critical couplings",
    6: "standard widths",
    7: "oscillator eigenvalues, widths and gaps",
    8: "z0 ratio plateau",
    9: "property suite",
    10: "coulomb spot checks at alpha = 2 and 0.5",
}


def summary_lines() -> list:
    out = []
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        out.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {TITLES[n]}" + (f": {detail}" if detail else ""))
    return out


def _record(n: int, ok: bool, detail: str = "") -> None:
    RESULTS[n] = (ok, detail)
    assert ok, detail


@pytest.fixture(scope="module")
def cells():
    by_table = defaultdict(dict)
    for r in reproduce_many(table_ids()):
        by_table[r.table][r.cell] = r
    return by_table


def _fmt(v) -> str:
    return f"{v:.6g}" if isinstance(v, float) else repr(v)


def _check(n, results):
    results = [r for r in results if r.gate]
    bad = [f"{r.cell}={_fmt(r.computed)} (ref {r.reference}, {r.tolerance})" for r in results if not r.passed]
    detail = f"{len(results) - len(bad)}/{len(results)} cells" + ("; failing " + "; ".join(bad) if bad else "")
    _record(n, not bad and bool(results), detail)


def _select(table, prefixes, exclude=()):
    return [r for k, r in table.items() if k.startswith(prefixes) and not k.startswith(exclude)]


def test_criterion_01(cells):
    _check(1, _select(cells["table1"], ("pole_im",)))


def test_criterion_02(cells):
    _check(2, _select(cells["table2"], ("narrowest_",)))


def test_criterion_03(cells):
    _check(3, _select(cells["table2"], ("kappa",)))


def test_criterion_04(cells):
    _check(4, list(cells["em-widths"].values()))


def test_criterion_05(cells):
    _check(5, list(cells["critical"].values()))


def test_criterion_06(cells):
    _check(6, list(cells["table3"].values()))


def test_criterion_07(cells):
    _check(7, _select(cells["osc-z0-widths"], ("",), exclude=("z0_plateau",)) + list(cells["table4"].values()))


def test_criterion_08(cells):
    _check(8, _select(cells["osc-z0-widths"], ("z0_plateau",)))


def _property_checks():
    osc = preset("paper-osc")
    pairs = [LevelPair(*p) for p in ((2, 1), (3, 1), (4, 1), (3, 2), (4, 2), (4, 3))]
    f21 = tc.C.coulomb_resolvent(LevelPair(2, 1), 1.0)
    return {
        "coupling closed forms vs quadrature (1e-8)": lambda: (
            [tc.test_phi_against_quadrature(p) for p in pairs] + [to.test_G_is_fourier_transform(*p) for p in to.PAIRS]
        ),
        "G(0) = 0 and parity": lambda: [to.test_G_zero_and_parity(*p) for p in to.PAIRS],
        "continuation jump identities (1e-12)": lambda: (
            [tc.test_continuation_jump_identity(p) for p in pairs] + [to.test_jump_identity(osc)]
        ),
        "count/enumerate on 50 random boxes": lambda: ts.test_count_matches_enumeration_on_random_boxes(f21),
        "derivative vs finite differences (1e-6)": lambda: [
            ts.test_derivative_against_finite_differences(m) for m in ts.DERIVATIVE_CASES.values()
        ],
        "no first-sheet zeros": lambda: [
            ts.test_first_sheet_has_no_complex_zeros(p, a) for p in ((2, 1), (3, 1), (4, 3)) for a in (0.5, 1.0, 2.0)
        ],
        "sweep determinism (bitwise)": ts.test_sweep_bitwise_deterministic,
    }


def test_criterion_09():
    failed = []
    checks = _property_checks()
    for name, fn in checks.items():
        try:
            fn()
        except Exception as exc:
            failed.append(f"{name} ({type(exc).__name__}: {exc})")
    _record(9, not failed, f"{len(checks) - len(failed)}/{len(checks)} checks" + (
        "; failing " + "; ".join(failed) if failed else ""))


def test_criterion_10(cells):
    _check(10, list(cells["coulomb-spot"].values()))


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:warnings"])
    sys.exit(code)
