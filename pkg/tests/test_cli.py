"""Command-line front-end: output formats, exit codes, self checks.

Most cases drive cli.main in-process (the kernels are already warm); two
subprocess cases prove the module entry point works cold, pinned to the
numpy backend so they skip JIT compilation.
"""
import csv
import io
import json
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import softcover.cli as cli
from softcover.info import InfoResult
from softcover.verify import CheckRow

MODELS = Path(__file__).resolve().parent.parent / "models"
BO = str(MODELS / "binary_orthogonal.json")
PM = str(MODELS / "pure_mixed.json")
TT = str(MODELS / "tilted_triple.json")
LN2 = math.log(2.0)


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [ln for ln in text.split("\r\n") if ln]
    data = [ln for ln in lines if not ln.startswith("# generated")]
    rows = list(csv.reader(io.StringIO("\r\n".join(data))))
    header = rows[0]
    return [dict(zip(header, r)) for r in rows[1:]]


def test_info_csv_binary_orthogonal(capsys):
    code, out, err = run_main(capsys, "info", "--model", BO, "--alpha", "1.5,0.75")
    assert code == 0 and err == ""
    assert out.startswith("# generated ")
    assert "\r\n" in out
    rows = parse_csv(out)
    assert len(rows) == 3  # two orders plus the summary
    first = rows[0]
    assert float(first["alpha"]) == 1.5
    for col in ("i_star", "i_star_breve", "i_down", "i_down_breve"):
        assert float(first[col]) == pytest.approx(LN2, abs=1e-8)
    assert first["converged"] == "true"
    below = rows[1]
    assert below["i_star"] == "nan"  # starred orders live above 1
    assert float(below["i_down"]) == pytest.approx(LN2, abs=1e-10)
    summary = rows[2]
    assert summary["alpha"] == "nan"
    assert float(summary["mutual_information"]) == pytest.approx(LN2, abs=1e-12)
    assert float(summary["v"]) == pytest.approx(0.0, abs=1e-10)


def test_info_json_and_header_toggle(capsys):
    code, out, _ = run_main(capsys, "info", "--model", PM, "--alpha", "1.5", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert "generated" in doc
    assert len(doc["rows"]) == 2
    assert doc["rows"][0]["i_star"] == pytest.approx(0.2470039440558, abs=1e-9)
    assert doc["rows"][1]["mutual_information"] == pytest.approx(0.2157615543388357, abs=1e-12)
    code, out, _ = run_main(
        capsys, "info", "--model", PM, "--alpha", "1.5", "--format", "json", "--no-header"
    )
    assert "generated" not in json.loads(out)


def test_no_header_csv_is_deterministic(capsys):
    args = ("info", "--model", PM, "--alpha", "1.25,1.75", "--no-header")
    code1, out1, _ = run_main(capsys, *args)
    code2, out2, _ = run_main(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert not out1.startswith("#")
    assert len([ln for ln in out1.split("\r\n") if ln]) == 3  # no header line


def test_info_all_equal_model_gives_zeros(capsys, tmp_path):
    eye = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]
    path = tmp_path / "equal.json"
    path.write_text(json.dumps({"prior": ["1/2", "1/2"], "states": [eye, eye]}))
    code, out, _ = run_main(capsys, "info", "--model", str(path), "--alpha", "1.5,2.0")
    assert code == 0
    for row in parse_csv(out)[:2]:
        for col in ("i_star", "i_star_breve", "i_down", "i_down_breve"):
            assert abs(float(row[col])) < 1e-9


def test_info_validation_failures(capsys, tmp_path):
    code, _, err = run_main(capsys, "info", "--model", BO, "--alpha", "1.0")
    assert code == 1 and "alpha" in err
    code, _, err = run_main(capsys, "info", "--model", BO, "--alpha", "x")
    assert code == 1 and "comma-separated" in err
    code, _, err = run_main(capsys, "info", "--model", str(tmp_path / "none.json"), "--alpha", "1.5")
    assert code == 1 and "not found" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"prior": ["2/3", "2/3"], "states": [[], []]}))
    code, _, err = run_main(capsys, "info", "--model", str(bad), "--alpha", "1.5")
    assert code == 1 and "softcover: error" in err


def test_info_solver_failure_flags_rows_and_exits_2(capsys, monkeypatch):
    flagged = InfoResult(0.25, 1.5, None, 7, math.inf, False, "star_renyi")
    monkeypatch.setattr(cli, "sandwiched_renyi_info", lambda cq, a, cfg: flagged)
    code, out, err = run_main(capsys, "info", "--model", PM, "--alpha", "1.5")
    assert code == 2
    assert "did not converge" in err
    rows = parse_csv(out)  # rows still emitted, flagged
    assert rows[0]["converged"] == "false"
    assert rows[0]["i_star"] == "0.25"


def test_exponent_row_and_nshot_merge(capsys):
    code, out, _ = run_main(capsys, "exponent", "--model", BO, "--rate", repr(2.0 * LN2))
    assert code == 0
    row = parse_csv(out)[0]
    assert float(row["mutual_information"]) == pytest.approx(LN2, abs=1e-12)
    assert float(row["ach_exp_iid"]) == pytest.approx(0.3466, abs=5e-4)
    assert float(row["sc_exp_iid"]) == 0.0
    assert "M" not in row
    code, out, _ = run_main(capsys, "exponent", "--model", BO, "--rate", "1.0", "--n", "2")
    row = parse_csv(out)[0]
    assert row["M"] == "8"  # ceil(e^2)
    assert 0.0 < float(row["ach_iid_tight"]) <= 1.0


def test_exponent_cc_note_is_quoted_csv(capsys):
    code, out, _ = run_main(capsys, "exponent", "--model", TT, "--rate", "0.9", "--n", "3")
    assert code == 0
    row = parse_csv(out)[0]
    assert row["sc_cc_exact"] == "nan"
    assert "composition" in row["note"]  # note contains commas; csv must round-trip


def test_simulate_exact_self_check(capsys):
    code, out, _ = run_main(
        capsys, "simulate", "--model", BO, "--n", "1", "--M", "2", "--exact", "--format", "json"
    )
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["mean"] == pytest.approx(0.25, abs=1e-12)
    assert row["exact"] is True
    assert row["ach_bound"] >= row["mean"]
    assert row["backend"] in ("numba", "numpy")


def test_simulate_mc_and_guards(capsys):
    code, out, _ = run_main(
        capsys, "simulate", "--model", PM, "--n", "2", "--M", "2", "--samples", "400",
        "--kind", "cc", "--format", "json",
    )
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["exact"] is False and row["samples"] == 400
    assert row["half_width_95"] > 0.0
    code, _, err = run_main(capsys, "simulate", "--model", PM, "--n", "2", "--M", "2", "--samples", "1")
    assert code == 1 and "samples" in err


def test_simulate_bound_violation_exits_3(capsys, monkeypatch):
    # force an impossible achievability bound so the self-check trips
    monkeypatch.setattr(
        cli, "bounds_at_m", lambda cq, n, M, kind, cfg: {"ach": -1.0, "sc": -5.0, "alpha_ach": 1.5, "alpha_sc": 0.75}
    )
    code, out, err = run_main(
        capsys, "simulate", "--model", BO, "--n", "1", "--M", "2", "--exact"
    )
    assert code == 3
    assert "exceeds the achievability bound" in err
    assert parse_csv(out)[0]["exact"] == "true"


def test_verify_subcommand(capsys):
    code, out, _ = run_main(capsys, "verify", "--suite", "type-class", "--suite", "trace-inequality")
    assert code == 0
    rows = parse_csv(out)
    assert rows and all(r["passed"] == "true" for r in rows)
    assert {r["suite"] for r in rows} == {"type-class", "trace-inequality"}


def test_verify_failure_exits_3(capsys, monkeypatch):
    failing = [CheckRow("s", "c", 1.0, 0.0, False, "")]
    monkeypatch.setattr(cli, "run_suites", lambda names, seed: failing)
    code, out, err = run_main(capsys, "verify", "--suite", "theta")
    assert code == 3
    assert "verification check" in err
    assert parse_csv(out)[0]["passed"] == "false"


def test_moderate_subcommand(capsys):
    code, out, _ = run_main(
        capsys, "moderate", "--model", PM, "--t", "0.25", "--c", "1.0", "--n-list", "100,400"
    )
    assert code == 0
    rows = parse_csv(out)
    assert [r["n"] for r in rows] == ["100", "400"]
    for r in rows:
        assert float(r["ratio_iid"]) > 0.0
    code, _, err = run_main(
        capsys, "moderate", "--model", PM, "--t", "0.25", "--c", "1.0", "--n-list", "10,x"
    )
    assert code == 1 and "comma-separated integers" in err


def test_argparse_errors_use_exit_code_1(capsys):
    code, _, err = run_main(capsys, "info", "--model", BO)  # --alpha missing
    assert code == 1 and "alpha" in err
    code, _, err = run_main(capsys, "verify", "--suite", "bogus")
    assert code == 1
    code, _, err = run_main(capsys, "nonsense")
    assert code == 1


def _subprocess_env():
    env = dict(os.environ)
    env["SOFTCOVER_PURE_NUMPY"] = "1"
    root = Path(__file__).resolve().parent.parent
    env["PYTHONPATH"] = str(root / "src") + os.pathsep + env.get("PYTHONPATH", "")
    return env


def test_module_entry_point_cold():
    proc = subprocess.run(
        [sys.executable, "-m", "softcover.cli", "info", "--model", BO, "--alpha", "2.0", "--no-header"],
        capture_output=True, text=True, env=_subprocess_env(), timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    rows = parse_csv("alpha,i_star,i_star_breve,i_down,i_down_breve,mutual_information,v,v_breve,converged\r\n" + proc.stdout)
    assert float(rows[0]["i_star"]) == pytest.approx(LN2, abs=1e-8)


def test_entry_point_exit_code_cold(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    proc = subprocess.run(
        [sys.executable, "-m", "softcover.cli", "info", "--model", str(bad), "--alpha", "1.5"],
        capture_output=True, text=True, env=_subprocess_env(), timeout=120,
    )
    assert proc.returncode == 1
    assert "softcover: error" in proc.stderr
