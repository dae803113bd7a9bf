import csv
import io
import json

import pytest

from friedrichs.cli import REPORT_SCHEMA, ROW_FIELDS, SWEEP_FIELDS, fmt_number, main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_presets(capsys):
    code, out, _ = run(capsys, "list-presets", "--format", "csv")
    assert code == 0
    names = [r["name"] for r in csv.DictReader(io.StringIO(out))]
    assert names == ["paper-coulomb", "paper-osc", "electron-coulomb"]


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--preset", "paper-coulomb", "--pair", "2,1", "--alpha", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == ROW_FIELDS
    z0 = [r for r in rows if r["branch"] == "z0"][0]
    # the narrowest resonance, in MeV
    assert float(z0["re_E_MeV"]) == pytest.approx(-70.4, abs=1.5)
    assert float(z0["width_MeV"]) == pytest.approx(226.6, abs=1.0)


def test_solve_bound_state_row(capsys):
    code, out, _ = run(capsys, "solve", "--preset", "paper-osc", "--pair", "1,0", "--alpha", "1", "--format", "json")
    rows = json.loads(out)["rows"]
    bound = [r for r in rows if r["im_zeta"] == 0 and r["width_MeV"] == 0]
    assert len(bound) == 1 and abs(bound[0]["re_E_MeV"] - 85) <= 1


def test_solve_decoupled(capsys):
    code, out, _ = run(capsys, "solve", "--pair", "2,1", "--alpha", "0", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 1
    assert rows[0]["branch"] == "standard" and rows[0]["re_zeta"] == 1 and rows[0]["im_zeta"] == 0


def test_json_schema(capsys):
    code, out, _ = run(capsys, "solve", "--pair", "3,2", "--alpha", "1", "--format", "json")
    doc = json.loads(out)
    assert set(doc) == {"meta", "rows"}
    assert doc["meta"]["schema"] == REPORT_SCHEMA
    for r in doc["rows"]:
        assert tuple(r) == ROW_FIELDS


def test_output_is_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["solve", "--pair", "4,3", "--alpha", "0.5", "--format", "json", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_scientific_notation_for_small_values():
    assert fmt_number(2.5e-4) == "2.5000000000e-04"
    assert fmt_number(-1e-9).startswith("-1.0") and "e-09" in fmt_number(-1e-9)
    assert fmt_number(0.0) == "0"
    assert fmt_number(0.5) == "0.5"
    assert "e" not in fmt_number(226.6)


def test_csv_small_residuals_are_scientific(capsys):
    _, out, _ = run(capsys, "solve", "--pair", "2,1", "--alpha", "1", "--format", "csv")
    for r in csv.DictReader(io.StringIO(out)):
        v = float(r["residual"])
        if 0 < abs(v) < 1e-3:
            assert "e" in r["residual"]


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--alpha", "1"],
        ["solve", "--pair", "1,2", "--alpha", "1"],
        ["solve", "--pair", "2,1", "--alpha", "1", "--alpha-grid", "1:2:3"],
        ["solve", "--pair", "x", "--alpha", "1"],
        ["solve", "--pair", "2,1", "--preset", "nope"],
        ["sweep", "--pair", "2,1", "--alpha-grid", "1:2:0"],
        ["sweep", "--pair", "2,1", "--alpha-grid", ""],
        ["sweep", "--pair", "2,1"],
        ["reproduce", "table99"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_grid_parsing():
    assert list(parse_grid("1:2:3")) == [1.0, 1.5, 2.0]
    assert list(parse_grid("0.5:0.5:1")) == [0.5]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[solve]\npreset = paper-osc\npair = 3,2\nalpha = 1\nformat = csv\n")
    code, out, _ = run(capsys, "--config", str(cfg), "solve")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    z1 = [r for r in rows if r["branch"] == "z1"][0]
    assert abs(float(z1["re_E_MeV"]) - 1588) <= 2


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[solve]\npair = 3,2\nalpha = 0\nformat = csv\n")
    code, out, _ = run(capsys, "--config", str(cfg), "solve", "--pair", "2,1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["pair"] == '(2,1)'


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[solve]\npair = 2,1\ncolour = blue\n")
    code, _, err = run(capsys, "--config", str(cfg), "solve")
    assert code == 1 and "colour" in err


def test_reproduce_pass(capsys):
    code, out, _ = run(capsys, "reproduce", "table1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["passed"] is True
    assert {r["status"] for r in doc["rows"]} <= {"pass", "info"}


def test_reproduce_mismatch_exit_code(capsys):
    # the MeV cross-check of the narrowest (2,1) resonance is outside tolerance
    code, _, err = run(capsys, "reproduce", "table2")
    assert code == 3
    assert "narrowest_energy_mev" in err


def test_sweep_writes_branch_files(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--pair", "2,1", "--alpha-grid", "0.5:6:12", "--out", str(tmp_path),
                       "--format", "json")
    assert code == 0
    summary = json.loads(out)["rows"]
    files = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert files == sorted(r["file"] for r in summary)
    z0 = [r for r in summary if r["branch"] == "z0"][0]
    assert z0["terminal_state"] == "became_real"
    assert abs(z0["final_alpha"] - 5.54) <= 0.01
    rows = list(csv.DictReader(open(tmp_path / z0["file"])))
    assert tuple(rows[0]) == SWEEP_FIELDS
    assert float(rows[-1]["im_zeta"]) == 0
