import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from conftest import ALL, FIXTURES, fixture_text, parsed
from pdecc import cc
from pdecc.cli import main
from pdecc.jets import dim_jet
from pdecc.parser import parse_system
from pdecc.report import AnalysisReport, emit_report, parse_structured, run_analysis

SCHEMA = json.loads(resources.files("pdecc").joinpath("schema/report_v1.json").read_text())


def structured(name, command="full", seed=7):
    return emit_report(run_analysis(parsed(name), command, seed=seed), "structured")


@pytest.mark.parametrize("name", ALL)
def test_frozen_expected_reports(name):
    assert structured(name) == (FIXTURES / "expected" / f"{name}.json").read_bytes()


@pytest.mark.parametrize("name", ALL)
def test_reports_validate_against_schema(name):
    data = json.loads((FIXTURES / "expected" / f"{name}.json").read_text())
    jsonschema.validate(data, SCHEMA)
    assert all(data["checks"].values())
    assert not data["partial"]


@pytest.mark.parametrize("command", ["dims", "tabular", "cc", "syzygies", "resolution", "full"])
def test_each_command_round_trips(command):
    rep = run_analysis(parsed("example_2_2"), command)
    data = emit_report(rep, "structured")
    jsonschema.validate(json.loads(data), SCHEMA)
    assert parse_structured(data) == rep


def test_command_contents():
    rep = run_analysis(parsed("example_2_2"), "cc")
    assert [(g["label"], g["order"]) for g in rep.cc["generators"]] == [("Psi1", 3), ("Psi2", 4)]
    assert rep.dims is None and rep.syzygies is None and rep.checks is None
    rep = run_analysis(parsed("macaulay"), "resolution")
    assert rep.resolution["euler_characteristic"] == 0


def test_empty_equation_file_dims():
    rep = run_analysis(parse_system("vars x1 x2 x3\nunknown y\noption order 2\n"), "dims", depth=3)
    assert [row["dim_R"] for row in rep.dims] == [dim_jet(q, 3) for q in range(2, 6)]


def test_empty_report_is_valid_document():
    data = emit_report(AnalysisReport(), "structured")
    assert parse_structured(data) == AnalysisReport()
    assert json.loads(data)["schema"] == "v1"


def test_unknown_report_field_rejected():
    with pytest.raises(ValueError):
        parse_structured(b'{"schema": "v1", "bogus": 1}')


def test_text_tabular_example_2_1():
    text = emit_report(run_analysis(parsed("example_2_1"), "tabular"), "text").decode()
    rows = [line.split("|")[1].strip() for line in text.splitlines()
            if line.count("|") == 2][:5]
    assert rows == ["1 2 3", "1 2 3", "1 2 •", "1 2 •", "1 × •"]


def test_text_report_mentions_generators():
    text = emit_report(run_analysis(parsed("example_2_3"), "full", seed=7), "text").decode()
    assert "Psi2 (order 6)" in text
    assert "FAILED" not in text


def test_main_writes_out_file(tmp_path, capsys):
    src = tmp_path / "m.pde"
    src.write_text(fixture_text("macaulay"))
    out = tmp_path / "m.json"
    assert main(["cc", str(src), "--format", "structured", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["cc"]["generators"][0]["order"] == 2


def test_main_partial_exit(tmp_path, capsys):
    src = tmp_path / "m.pde"
    src.write_text(fixture_text("macaulay"))
    assert main(["dims", str(src), "--max-order", "1"]) == 2
    assert "partial" in capsys.readouterr().err


def test_main_invariant_exit(tmp_path, capsys, monkeypatch):
    src = tmp_path / "m.pde"
    src.write_text(fixture_text("macaulay"))
    monkeypatch.setattr(cc, "verify_cc", lambda sys, vec: False)
    assert main(["full", str(src)]) == 3
    assert "cc_substitution" in capsys.readouterr().err


def test_main_parse_error_exit(tmp_path, capsys):
    src = tmp_path / "bad.pde"
    src.write_text("vars x1 x2 x3\nunknown y\neq: y_4 = u\n")
    assert main(["dims", str(src)]) == 1
    assert "IndexOutOfRangeError" in capsys.readouterr().err


def test_main_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 1
    assert main(["dims", "--depth", "0"]) == 1
    assert main(["dims", "/nonexistent/file.pde"]) == 1


def test_cli_subprocess_reads_stdin():
    proc = subprocess.run([sys.executable, "-m", "pdecc", "cc", "--format", "structured"],
                          input=fixture_text("example_2_2").encode(), capture_output=True)
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert [g["order"] for g in data["cc"]["generators"]] == [3, 4]


def test_determinism_across_processes():
    path = str(FIXTURES / "example_2_3.pde")
    cmd = [sys.executable, "-m", "pdecc", "full", path, "--seed", "7", "--format", "structured"]
    a = subprocess.run(cmd, capture_output=True).stdout
    b = subprocess.run(cmd, capture_output=True).stdout
    assert a == b == (FIXTURES / "expected" / "example_2_3.json").read_bytes()
