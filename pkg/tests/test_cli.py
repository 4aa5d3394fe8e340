import csv
import io
import json
import subprocess
import sys

import pytest

from nakano.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_norm_default_is_golden_ratio(capsys):
    code, out, _ = run(capsys, "norm")
    assert code == 0
    phi_row = next(r for r in rows(out) if r["kind"] == "phi")
    assert phi_row["norm"] == "1.61803398875"
    assert phi_row["attainment"] == "AttainsOne"


def test_norm_from_file(tmp_path, capsys):
    src = tmp_path / "in.json"
    src.write_text(
        json.dumps(
            {
                "exponent": {"atoms": [{"p": "inf", "w": 1}, {"p": 2, "w": 1}]},
                "vectors": [{"entries": [{"i": 0, "v": 2}, {"i": 1, "v": 3}]}],
                "kinds": ["phi"],
            }
        )
    )
    code, out, _ = run(capsys, "norm", "--input", str(src))
    assert code == 0 and rows(out)[0]["norm"] == "3"


def test_malformed_json_reports_position(tmp_path, capsys):
    src = tmp_path / "bad.json"
    src.write_text('{\n  "exponent": [1,\n}')
    code, _, err = run(capsys, "norm", "--input", str(src))
    assert code == 2
    assert "line 3, column 1" in err


def test_unknown_keys_are_input_errors(tmp_path, capsys):
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"exponent": {"atoms": [{"p": 2, "w": 1, "x": 0}]}, "vectors": []}))
    code, _, err = run(capsys, "norm", "--input", str(src))
    assert code == 2 and "unknown keys" in err


def test_embed_violation_is_a_result(capsys):
    code, out, _ = run(capsys, "embed")
    assert code == 0
    assert rows(out)[0]["verdict"] == "ViolationFound"


def test_props_deterministic(capsys):
    first = run(capsys, "props", "--seed", "42")
    second = run(capsys, "props", "--seed", "42")
    assert first[0] == 0 and first[1] == second[1]
    assert all(r["passed"] == "true" for r in rows(first[1]))


def test_props_json_and_out(tmp_path, capsys):
    dest = tmp_path / "props.json"
    code, out, _ = run(capsys, "props", "--seed", "7", "--format", "json", "--out", str(dest))
    assert code == 0 and out == ""
    data = json.loads(dest.read_text())
    assert len(data) == 21 and data[0]["property"] == "ts_inequality"


@pytest.mark.parametrize("cmd", ["conjugate", "block-basis", "duality", "classify"])
def test_default_runs_are_clean(capsys, cmd):
    code, out, _ = run(capsys, cmd)
    assert code == 0 and out.count("\n") >= 2


def test_bad_grid(capsys):
    code, _, err = run(capsys, "norm", "--grid", "cubic:0:1:3")
    assert code == 2 and "grid" in err


def test_console_entry():
    proc = subprocess.run([sys.executable, "-m", "nakano", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("nakano ")
