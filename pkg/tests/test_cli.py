import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

import gendescent
from gendescent.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

DATA = Path(gendescent.__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info(capsys):
    code, out, _ = run(capsys, "info", "--type", "G2", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc[0]["order"] == 12 if isinstance(doc, list) else doc["order"] == 12


def test_info_matrix(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text("[[1,2],[2,1]]")
    code, out, _ = run(capsys, "info", "--matrix", str(p))
    assert code == EXIT_OK and "4" in out
    code, out, _ = run(capsys, "info", "--matrix", "[[1,3],[3,1]]")
    assert code == EXIT_OK and "6" in out


def test_descent_nice(capsys):
    code, out, _ = run(capsys, "descent", "--type", "I2_8", "--A", "s,t,sts")
    assert code == EXIT_OK and "nice" in out.lower()
    code, out, _ = run(capsys, "descent", "--type", "B2", "--A", "s,sts")
    assert code == EXIT_OK and "sts" in out


def test_algebra_export_roundtrip(capsys, tmp_path):
    from gendescent.export import revalidate
    out_path = tmp_path / "g2.json"
    code, _, _ = run(capsys, "algebra", "--type", "G2", "--A", "B", "--format", "json", "-o", str(out_path))
    assert code == EXIT_OK
    assert revalidate(out_path.read_text()) == (True, "ok")


def test_algebra_csv(capsys):
    code, out, _ = run(capsys, "algebra", "--type", "A2", "--format", "csv")
    assert code == EXIT_OK and out.startswith("I,J,K,c")


def test_family(capsys):
    code, out, _ = run(capsys, "algebra", "--type", "F4", "--family", "S1=ALL", "S2=s1", "--format", "json")
    assert code == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["info", "--type", "Q9"],
    ["info"],
    ["descent", "--type", "B2", "--A", "nosuch"],
    ["verify", "--only", "nosuch"],
    ["search-nice", "--type", "F4"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_search(capsys):
    code, out, _ = run(capsys, "search-nice", "--type", "B2", "--format", "json")
    assert code == EXIT_OK
    assert "11" in out or json.loads(out)


def test_verify_g2_passes(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--only", "g2", "coxeter", "--report", str(report))
    assert code == EXIT_OK
    assert "[PASS] g2" in out
    assert set(json.loads(report.read_text())) == {"g2", "coxeter"}


def test_verify_alias(capsys):
    assert run(capsys, "verify-paper", "--only", "coxeter")[0] == EXIT_OK


def test_tampered_data_fails(tmp_path):
    data = tmp_path / "data"
    shutil.copytree(DATA, data, ignore=shutil.ignore_patterns("__pycache__"))
    doc = json.loads((data / "g2_B.json").read_text())
    doc["descent_sets"]["d_1"] = ["s"]  # a wrong descent set for one basis element
    (data / "g2_B.json").write_text(json.dumps(doc))
    env = {**__import__("os").environ, "GENDESCENT_DATA_DIR": str(data)}
    proc = subprocess.run([sys.executable, "-m", "gendescent", "verify", "--only", "g2"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == EXIT_FAIL, proc.stdout + proc.stderr
    assert "[FAIL] g2" in proc.stdout


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gendescent", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and gendescent.__version__ in proc.stdout
