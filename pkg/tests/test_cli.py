import json
import subprocess
import sys

import pytest

from arboreal import cli
from arboreal.hyperelliptic import C2


def test_jacobian_order_prints_count(tmp_path, capsys):
    path = tmp_path / "C2.json"
    path.write_text(json.dumps(C2.to_json()))
    assert cli.main(["jacobian-order", "--curve", str(path), "--q", "11"]) == 0
    assert capsys.readouterr().out.strip() == "1351"


def test_builtin_curve_name(capsys):
    assert cli.main(["jacobian-order", "--curve", "X2", "--q", "5"]) == 0
    assert capsys.readouterr().out.strip() == "66"


def test_json_document_and_metadata(tmp_path, capsys):
    out = tmp_path / "order.json"
    assert cli.main(["jacobian-order", "--curve", "C2", "--q", "3", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"tool", "config", "verdict", "result"}
    assert doc["result"]["order"] == 24 and doc["verdict"] == "positive"
    assert "started" not in out.read_text()
    meta = json.loads((tmp_path / "order.json.meta.json").read_text())
    assert {"started", "elapsed_seconds", "argv"} <= set(meta)


def test_json_to_stdout(capsys):
    assert cli.main(["jacobian-order", "--curve", "C2", "--q", "5", "--json", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["order"] == 180


def test_output_dir_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    assert cli.main(["eisenstein", "--p", "5", "--i", "3", "--nmax", "2"]) == 0
    assert json.loads((tmp_path / "eisenstein.json").read_text())["result"]["family"]["verdict"]


def test_usage_errors_exit_2(capsys):
    assert cli.main(["verify-unicritical", "--p", "11"]) == 2
    assert cli.main(["bound", "--p", "9"]) == 2
    assert cli.main(["eisenstein", "--p", "5", "--i", "9"]) == 2
    assert cli.main(["jacobian-order", "--curve", "nowhere", "--q", "5"]) == 2
    assert cli.main([]) == 2


def test_negative_verdict_exits_1(capsys):
    # at n_direct = 1 the stage-5 stabilization at F_43 is not covered
    assert cli.main(["verify-unicritical", "--p", "7", "--n-direct", "1"]) == 1


def test_unicritical_summary(capsys):
    assert cli.main(["verify-unicritical", "--p", "5"]) == 0
    assert "verdict=surjective" in capsys.readouterr().out


def test_bound_command(capsys):
    assert cli.main(["bound", "--p", "3", "--json", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["n_bound"] == 2186665
    assert doc["result"]["n_bound_published"] == 20031664
    assert doc["result"]["discrepancy"] is True


def test_quadratic_small_sweep(capsys):
    assert cli.main(["verify-quadratic", "--pmax", "1000", "--json", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["exceptional"] == [229]
    assert all(r["ok"] for r in doc["result"]["case_rules"])


def test_console_entry_point_runs():
    res = subprocess.run([sys.executable, "-m", "arboreal.cli", "jacobian-order", "--curve", "C2", "--q", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "24"
