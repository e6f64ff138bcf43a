import json
import shutil
import subprocess
import sys

import pytest

from springer_lab.cli import corpus_paths, main
from springer_lab.report import SCHEMA_VERSION

PATHS = {p.stem: p for p in corpus_paths()}


def run(*args):
    return main([str(a) for a in args])


def test_packaged_corpus_present():
    assert len(PATHS) >= 10
    assert {"node_q3", "tacnode_q5", "cusp_line_q3", "star_q3"} <= set(PATHS)


@pytest.mark.parametrize("cmd", ["invariants", "enumerate", "orbital", "strata", "verify-fl"])
def test_subcommands_succeed(cmd, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(cmd, "--config", PATHS["node_q3"], "--out", out, "--threads", 1) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == SCHEMA_VERSION
    assert doc["problems"] == []
    assert "== node_q3 ==" in capsys.readouterr().out


def test_verify_fl_report_carries_both_sides(tmp_path):
    out = tmp_path / "r.json"
    assert run("verify-fl", "--config", PATHS["tacnode_q3"], "--out", out) == 0
    doc = json.loads(out.read_text())
    fl = doc["verify_fl"][0]["fundamental_lemma"]
    assert (fl["lhs"], fl["rhs"], fl["verdict"]) == (9, 9, "PASS")
    assert doc["invariants"]["delta_direct"] == doc["invariants"]["delta_formula"] == 2


def test_invariants_examples(tmp_path):
    out = tmp_path / "r.json"
    run("invariants", "--config", PATHS["cusp_q3"], "--out", out)
    inv = json.loads(out.read_text())["invariants"]
    assert inv["delta_direct"] == 1 and inv["conductor"] == [2] and inv["rosenlicht"]["perfect"]
    run("invariants", "--config", PATHS["smooth_q3"], "--out", out)
    inv = json.loads(out.read_text())["invariants"]
    assert inv["delta_direct"] == 0 and inv["rosenlicht"]["size"] == [0, 0]


def test_enumerate_lists_points(tmp_path):
    out = tmp_path / "r.json"
    run("enumerate", "--config", PATHS["cusp_f3"], "--out", out)
    z = json.loads(out.read_text())["enumerate"]["0"]
    assert z["count"] == 4 and len(z["points"]) == 4
    assert sum(p["free"] for p in z["points"]) == z["free"] == 3


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    text = PATHS["node_q3"].read_text().replace("coeff = [0, 1]", "coeff = [1, 1]", 1)
    bad.write_text(text)
    assert run("verify-fl", "--config", bad) == 2
    assert "violate" in capsys.readouterr().err


def test_command_needs_hermitian(capsys):
    assert run("orbital", "--config", PATHS["node_f3"]) == 2


def test_budget_exit_code(tmp_path):
    assert run("enumerate", "--config", PATHS["tacnode_q3"], "--budget", 10) == 3


def test_precision_exit_code():
    assert run("invariants", "--config", PATHS["cusp_q3"], "--precision-ceiling", 1) == 3


def test_expected_mismatch_exit_code(tmp_path, capsys):
    bad = tmp_path / "mis.toml"
    bad.write_text(PATHS["node_q3"].read_text().replace("SO = 5", "SO = 6"))
    assert run("verify-fl", "--config", bad) == 4
    err = capsys.readouterr().err
    assert "SO: expected 6, got 5" in err
    assert '"verify_fl"' in err  # diagnostic dump


def test_corpus_directory_and_thread_determinism(tmp_path):
    for name in ("node_q3", "cusp_f3", "star_q3", "monomial_2_5"):
        shutil.copy(PATHS[name], tmp_path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("corpus", "--corpus", tmp_path, "--threads", 1, "--out", a, "--quiet") == 0
    assert run("corpus", "--corpus", tmp_path, "--threads", 3, "--out", b, "--quiet") == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert list(doc["summary"]) == ["cusp_f3", "monomial_2_5", "node_q3", "star_q3"]


def test_empty_corpus_directory(tmp_path):
    assert run("corpus", "--corpus", tmp_path) == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "springer_lab.cli", "invariants", "--config", str(PATHS["node_q3"]), "--quiet"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr


def test_no_floats_in_reports(tmp_path):
    out = tmp_path / "r.json"
    run("verify-fl", "--config", PATHS["cusp_line_q3"], "--out", out)

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"float {x} in report")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(out.read_text()))
