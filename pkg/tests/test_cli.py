import json
import subprocess
import sys

import pytest

from elimcert.cli import main

CONICS = "x1^2 + x2^2 - 1; x1^2 - x2"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eliminate_conics_json(capsys):
    code, out, _ = run(capsys, "eliminate", "--field", "q", "--seed", "0", "-e", CONICS, "--json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["degPhi"], doc["bound"], doc["verified"]) == (4, 4, True)


def test_dim_hyperplane(capsys):
    code, out, _ = run(capsys, "dim", "-e", "x1", "--nvars", "2", "--json")
    assert code == 0 and json.loads(out)["q"] == 1


def test_certificate_file_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "eliminate", "-e", "x2 - x1^2; x3 - x1^3", "--mode", "original",
                       "--json")
    assert code == 0
    path = tmp_path / "cert.json"
    path.write_text(out)
    code, out, _ = run(capsys, "certify-check", str(path), "--json")
    assert code == 0 and json.loads(out)["verified"]

    doc = json.loads(path.read_text())
    doc["phi"] = doc["phi"] + " + 1"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "certify-check", str(path), "--json")
    verdict = json.loads(out)
    assert code == 1
    assert verdict["failed"] == ["membership_identity"]


def test_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "eliminate", "-e", CONICS, "--seed", "2")
    _, js, _ = run(capsys, "eliminate", "-e", CONICS, "--seed", "2", "--json")
    doc = json.loads(js)
    fields = dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line
                  and not line.startswith("  "))
    assert fields["phi"] == doc["phi"]
    assert int(fields["bound"]) == doc["bound"] and int(fields["degPhi"]) == doc["degPhi"]
    assert fields["verified"] == "true"


def test_seeded_runs_are_identical(capsys):
    a = run(capsys, "eliminate", "-e", CONICS, "--seed", "4", "--json")[1]
    b = run(capsys, "eliminate", "-e", CONICS, "--seed", "4", "--json")[1]
    assert a == b


def test_system_file_with_headers(capsys, tmp_path):
    path = tmp_path / "sys.txt"
    path.write_text("field: fp 65537\n# twisted cubic\nx2 - x1^2\nx3 - x1^3\n")
    code, out, _ = run(capsys, "eliminate", str(path), "--json")
    doc = json.loads(out)
    assert code == 0 and doc["field"] == "fp:65537" and doc["bound"] == 6


def test_bound_only(capsys):
    code, out, _ = run(capsys, "eliminate", "-e", "x2 - x1^2; x3 - x1^3", "--bound-only", "--json")
    doc = json.loads(out)
    assert code == 0 and (doc["q"], doc["bound"]) == (1, 6)


def test_empty_variety(capsys):
    code, _, err = run(capsys, "eliminate", "-e", "x1; x1 - 1")
    assert code == 2 and "empty" in err
    code, out, _ = run(capsys, "eliminate", "-e", "x1; x1 - 1", "--allow-empty-variety", "--json")
    assert code == 0 and json.loads(out)["q"] == -1


def test_perron_and_noether(capsys):
    code, out, _ = run(capsys, "perron", "-e", "x1^2; x1^3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["verified"] and doc["weightedDegree"] == 6
    code, out, _ = run(capsys, "noether", "-e", "x1*x2 - 1", "--json")
    assert code == 0 and json.loads(out)["noetherPosition"] is False


@pytest.mark.parametrize("argv", [
    ["eliminate", "-e", "x1 + "],
    ["dim", "-e", "x1", "--field", "fp:65537", "--nvars", "0"],
    ["eliminate", "-e", ""],
    ["dim", "/nonexistent/system.txt"],
    ["certify-check", "-e", "{not json"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "dim", "-e", "x1 + x2; x1 $ x2")
    assert code == 2 and "column" in err


def test_budget_exit_3(capsys):
    code, _, _ = run(capsys, "eliminate", "-e", "x1^3 + x2^2*x3 - 1; x2^3 - x1*x3 + 2; x3^3 - x1*x2",
                     "--budget", "5")
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "elimcert", "dim", "-e", "x1*x3; x2*x3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "q = 2" in proc.stdout
