"""End-to-end tests of the command-line tool: golden text and schema-checked JSON."""
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from pcfv.cli import main

from cli_schemas import SCHEMAS

DATA = Path(__file__).resolve().parents[1] / "src" / "pcfv" / "data"
GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("PCFV_UPDATE_GOLDEN") == "1"

PROG = DATA / "programs"
SHEAVES = DATA / "sheaves"


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def normalized(text: str, tmp_path) -> str:
    return text.replace(str(tmp_path), "<tmp>").replace(str(DATA), "<data>")


def against_golden(name: str, text: str) -> None:
    path = GOLDEN / f"{name}.txt"
    if UPDATE:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text)
    assert path.exists(), f"missing golden {path.name}; rerun with PCFV_UPDATE_GOLDEN=1"
    assert text == path.read_text()


# (golden name, argv, expected exit); "{tmp}" is replaced by pytest's tmp dir
CASES = [
    ("check_add", ["check", PROG / "add.pcfv"], 0),
    ("check_kpoint", ["check", PROG / "kpoint.pcfv"], 0),
    ("run_demo", ["run", PROG / "demo.pcfv", "--fuel", "10000"], 0),
    ("run_five", ["run", PROG / "demo.pcfv", "--def", "five", "--fuel", "10000"], 0),
    ("run_omega", ["run", PROG / "demo.pcfv", "--def", "omega", "--fuel", "100"], 0),
    ("run_odd_half", ["run", PROG / "demo.pcfv", "--def", "odd_half"], 0),
    ("denot_parity", ["denot", PROG / "kpoint.pcfv", "--model", "builtin:kpoint", "--def", "parity"], 0),
    ("denot_add_standard", ["denot", PROG / "add.pcfv", "--model", "builtin:standard",
                            "--backend", "standard"], 0),
    ("site_validate_reflexive", ["site", "validate", "builtin:reflexive"], 0),
    ("site_validate_bad_M", ["site", "validate", DATA / "bad" / "bad_M.json"], 1),
    ("site_subm_star", ["site", "subm", "builtin:kpoint", "--object", "star"], 0),
    ("site_subm_two", ["site", "subm", "builtin:reflexive", "--object", "2"], 0),
    ("site_combine", ["site", "combine", DATA / "sites" / "trivial.json",
                      DATA / "sites" / "reflexive.json", "-o", "{tmp}/combined.json"], 0),
    ("sheaf_validate_sierpinski", ["sheaf", "validate", SHEAVES / "sierpinski.json"], 0),
    ("sheaf_validate_no_gluing", ["sheaf", "validate", DATA / "bad" / "sheaf_no_gluing.json"], 1),
    ("sheaf_hom_list", ["sheaf", "hom", SHEAVES / "sierpinski.json", SHEAVES / "alpha.json", "--list"], 0),
    ("sheaf_hom_count", ["sheaf", "hom", SHEAVES / "chain3.json", SHEAVES / "num.json"], 0),
    ("sheaf_lift", ["sheaf", "lift", SHEAVES / "sierpinski.json", "-o", "{tmp}/lift.json"], 0),
    ("verify_soundness", ["verify", "soundness", "--model", "builtin:reflexive", "--max-size", "4"], 0),
    ("verify_adequacy", ["verify", "adequacy", "--model", "builtin:standard", "--max-size", "4",
                         "--fuel", "2000"], 0),
    ("verify_fundamental", ["verify", "fundamental", "--model", "builtin:reflexive", "--max-size", "4"], 0),
    ("verify_conservativity", ["verify", "conservativity", "--model", "builtin:kpoint"], 0),
]


def _argv(argv, tmp_path):
    return [str(a).replace("{tmp}", str(tmp_path)) for a in argv]


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_text_output_matches_golden(capsys, tmp_path, name, argv, code):
    got, out, err = run_cli(capsys, *_argv(argv, tmp_path))
    assert got == code, err
    against_golden(name, normalized(out, tmp_path))


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_json_output_matches_schema(capsys, tmp_path, name, argv, code):
    got, out, err = run_cli(capsys, *_argv(argv, tmp_path), "--json")
    assert got == code, err
    payload = json.loads(out)
    assert payload["schema"] == 1
    jsonschema.validate(payload, SCHEMAS[payload["command"]])
    if "ok" in payload:
        assert payload["ok"] == (code == 0)


def test_json_values(capsys, tmp_path):
    _, out, _ = run_cli(capsys, "run", PROG / "demo.pcfv", "--def", "five", "--json")
    res = json.loads(out)["results"][0]
    assert (res["outcome"], res["value"], res["steps"]) == ("Converged", "suc suc suc suc suc zero", 22)
    _, out, _ = run_cli(capsys, "sheaf", "hom", SHEAVES / "chain3.json", SHEAVES / "num.json", "--json")
    assert json.loads(out)["count"] == 3
    _, out, _ = run_cli(capsys, "site", "subm", "builtin:trivial", "--object", "star", "--json")
    assert len(json.loads(out)["subobjects"]) == 2


def test_written_files_reload(capsys, tmp_path):
    from pcfv.sheaf import load_sheaf, validate_sheaf
    from pcfv.site import FiniteSite
    run_cli(capsys, "site", "combine", DATA / "sites" / "trivial.json",
            DATA / "sites" / "reflexive.json", "-o", tmp_path / "c.json")
    assert len(FiniteSite.load(tmp_path / "c.json").objects) == 3
    run_cli(capsys, "sheaf", "lift", SHEAVES / "sierpinski.json", "-o", tmp_path / "l.json")
    lifted = json.loads((tmp_path / "l.json").read_text())
    lifted["site"] = "builtin:reflexive"
    (tmp_path / "l.json").write_text(json.dumps(lifted))
    L = load_sheaf(tmp_path / "l.json")
    assert len(L) == 3 and validate_sheaf(L).ok


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["site"],
    ["run", "{prog}", "--fuel", "0"],
    ["run", "{prog}", "--fuel", "many"],
    ["run", "{prog}", "--def", "nosuch"],
    ["check", "/nonexistent/file.pcfv"],
    ["denot", "{prog}", "--model", "/nonexistent.json"],
    ["site", "subm", "builtin:kpoint", "--object", "nowhere"],
    ["sheaf", "hom", "{sheaves}/sierpinski.json", "{sheaves}/chain3.json"],
    ["verify", "soundness", "--model", "builtin:reflexive", "--max-size", "-1"],
], ids=lambda a: " ".join(a)[:40] or "empty")
def test_usage_errors_exit_2(capsys, argv):
    argv = [a.replace("{prog}", str(PROG / "demo.pcfv")).replace("{sheaves}", str(SHEAVES)) for a in argv]
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err


def test_finite_backend_refuses_nat_under_arrow(capsys):
    code, _, err = run_cli(capsys, "denot", PROG / "add.pcfv", "--model", "builtin:standard")
    assert code == 2 and "--backend standard" in err


def test_resource_cap_exits_2(capsys):
    code, _, err = run_cli(capsys, "denot", PROG / "kpoint.pcfv", "--model", "builtin:kpoint",
                           "--def", "add", "--cap-carrier", "4")
    assert code == 2 and "resource limit" in err


@pytest.mark.parametrize("src,expect", [
    ("def x : nat = ret zero zero\n", "syntax error"),
    ("def x : nat = ret ()\n", "type mismatch: expected nat, found unit"),
])
def test_check_reports_errors_with_exit_1(capsys, tmp_path, src, expect):
    f = tmp_path / "bad.pcfv"
    f.write_text(src)
    code, out, _ = run_cli(capsys, "check", f)
    assert code == 1 and expect in out
    code, out, _ = run_cli(capsys, "check", f, "--json")
    assert code == 1 and expect in json.loads(out)["error"]


def test_run_of_ill_typed_program_exits_1(capsys, tmp_path):
    f = tmp_path / "bad.pcfv"
    f.write_text("def y : unit = ret zero\n")
    code, out, _ = run_cli(capsys, "run", f)
    assert code == 1 and out.startswith("error:")


def test_environment_fuel_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("PCFV_FUEL", "5")
    _, out, _ = run_cli(capsys, "run", PROG / "demo.pcfv", "--def", "five")
    assert out.strip() == "FuelExhausted"
    _, out, _ = run_cli(capsys, "run", PROG / "demo.pcfv", "--def", "five", "--fuel", "22")
    assert out.strip() == "Converged suc suc suc suc suc zero (22 steps)"
    monkeypatch.setenv("PCFV_FUEL", "abc")
    code, _, err = run_cli(capsys, "run", PROG / "demo.pcfv", "--def", "five")
    assert code == 2 and "PCFV_FUEL" in err


def test_environment_cap_and_flag_precedence(capsys, monkeypatch):
    argv = ["denot", PROG / "kpoint.pcfv", "--model", "builtin:kpoint", "--def", "add"]
    monkeypatch.setenv("PCFV_CAP_CARRIER", "4")
    assert run_cli(capsys, *argv)[0] == 2
    assert run_cli(capsys, *argv, "--cap-carrier", "4096")[0] == 0


def test_environment_jobs(capsys, monkeypatch):
    monkeypatch.setenv("PCFV_JOBS", "0")
    assert run_cli(capsys, "site", "validate", "builtin:trivial")[0] == 2
    assert run_cli(capsys, "site", "validate", "builtin:trivial", "--jobs", "1")[0] == 0


def test_config_restored_after_call(capsys):
    from pcfv import config
    before = config.current()
    run_cli(capsys, "run", PROG / "demo.pcfv", "--fuel", "7")
    assert config.current() == before


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pcfv", "check", str(PROG / "add.pcfv")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "add : nat -> nat -> nat\n"
    proc = subprocess.run([sys.executable, "-m", "pcfv", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
