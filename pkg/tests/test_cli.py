"""Command-line interface: parsing, suites, exit codes, file loading."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hsuperplane.cli import (
    SUITE_NAMES,
    UnknownSuiteError,
    load_presentation,
    main,
    run_suite,
)


# -- normalize -------------------------------------------------------------------


def test_normalize_plane_relation(capsys):
    code = main(["normalize", "--algebra", "h-calculus", "x*th - th*x - h*x^2"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "0"


def test_normalize_exchange_rule(capsys):
    code = main(["normalize", "--algebra", "qh-calculus", "dx*dth"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "q^-1*dth*dx"


def test_normalize_defaults_to_h_calculus(capsys):
    code = main(["normalize", "x*th"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "th*x + h*x^2"


def test_normalize_unknown_algebra(capsys):
    code = main(["normalize", "--algebra", "nowhere", "x"])
    assert code == 2
    assert "unknown presentation" in capsys.readouterr().err


def test_normalize_syntax_error(capsys):
    code = main(["normalize", "x**th"])
    assert code == 2
    assert "offset" in capsys.readouterr().err


def test_normalize_unknown_symbol_lists_generators(capsys):
    code = main(["normalize", "--algebra", "gl-h11", "x*th"])
    assert code == 2
    err = capsys.readouterr().err
    assert "unknown symbol" in err
    assert "valid generators" in err
    assert "gm" in err


# -- verify ----------------------------------------------------------------------


def test_verify_suite_names_are_stable():
    assert set(SUITE_NAMES) == {
        "consistency",
        "contraction",
        "confluence",
        "ybe",
        "rtt",
        "regenerate",
        "dsquared",
        "operators",
        "coaction",
        "involution",
        "heisenberg",
        "oscillator",
        "all",
    }


@pytest.mark.parametrize("suite", [s for s in SUITE_NAMES if s != "all"])
def test_verify_each_suite_passes(suite, capsys):
    code = main(["verify", suite])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out
    assert "FAIL" not in out


def test_verify_writes_json_report(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["verify", "ybe", "--json", str(target)])
    capsys.readouterr()
    assert code == 0
    data = json.loads(target.read_text())
    assert data["suite"] == "ybe"
    assert data["passed"] is True
    assert len(data["entries"]) == 5


def test_verify_rejects_unknown_suite():
    with pytest.raises(SystemExit) as err:
        main(["verify", "nosuite"])
    assert err.value.code == 2


def test_run_suite_all_aggregates():
    report = run_suite("all")
    assert report.passed
    assert len(report.entries) > 100
    with pytest.raises(UnknownSuiteError):
        run_suite("bogus")


# -- limit and solve-consistency ---------------------------------------------------


def test_limit_of_removable_singularity(capsys):
    code = main(["limit", "(q^2-1)/(q-1)"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "2"


def test_limit_reports_poles(capsys):
    code = main(["limit", "1/(q-1)"])
    assert code == 1
    assert "pole" in capsys.readouterr().err


def test_limit_parse_error(capsys):
    code = main(["limit", "q +"])
    assert code == 2


def test_solve_consistency_prints_solution(capsys):
    code = main(["solve-consistency"])
    out = capsys.readouterr().out
    assert code == 0
    for line in ("A = q^2", "B = 1", "F11 = q", "F12 = q^2-1", "F21 = -q", "F22 = 0"):
        assert line in out
    assert "PASS" in out


# -- tensor rendering --------------------------------------------------------------


def test_tensor_grid(capsys):
    code = main(["tensor", "print", "Kh"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0].split() == ["11", "12", "21", "22"]
    assert "-h" in out


def test_tensor_json(capsys):
    code = main(["tensor", "print", "Khat", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["rank"] == 4
    assert data["entries"][3][3] == "-1"


def test_tensor_rejects_unknown_name():
    with pytest.raises(SystemExit) as err:
        main(["tensor", "print", "Z"])
    assert err.value.code == 2


# -- presentation files ------------------------------------------------------------


def test_load_presentation_round_trip(tmp_path, capsys):
    source = tmp_path / "toy.alg"
    source.write_text(
        "# toy exchange algebra\n"
        "gen u even\n"
        "gen v odd\n"
        "rule v*u = q*u*v\n"
        "rule v*v = 0\n"
    )
    p = load_presentation(str(source))
    assert p.name == "toy"
    assert [g.name for g in p.generators] == ["u", "v"]

    code = main(["--load", str(source), "normalize", "v*u*u"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "q^2*u^2*v"

    code = main(["--load", str(source), "normalize", "--algebra", "toy", "v*v"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "0"


def test_load_rejects_malformed_lines(tmp_path, capsys):
    source = tmp_path / "bad.alg"
    source.write_text("gen u sideways\n")
    code = main(["--load", str(source), "normalize", "u"])
    assert code == 2
    assert "cannot parse" in capsys.readouterr().err


def test_load_rejects_composite_left_side(tmp_path, capsys):
    source = tmp_path / "bad2.alg"
    source.write_text("gen u even\nrule u + u = u\n")
    code = main(["--load", str(source), "normalize", "u"])
    assert code == 2


def test_missing_load_file(capsys):
    code = main(["--load", "/no/such/file.alg", "normalize", "x"])
    assert code == 2


# -- end-to-end --------------------------------------------------------------------


def test_module_entry_point_runs():
    root = Path(__file__).resolve().parent.parent / "src"
    env = dict(os.environ)
    env["PYTHONPATH"] = str(root) + os.pathsep + env.get("PYTHONPATH", "")
    done = subprocess.run(
        [sys.executable, "-m", "hsuperplane.cli", "verify", "oscillator"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert done.returncode == 0
    assert "PASS" in done.stdout
