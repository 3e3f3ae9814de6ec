import io
import json
import math

import numpy as np
import pytest

from parseval_walsh import checks, cli
from parseval_walsh.checks import Check
from parseval_walsh.frames import frame_from_json, matrix_from_csv


def run(capsys, monkeypatch, *argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_walsh_gen_natural_and_sequency(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "walsh-gen", "--order", "2")
    assert code == 0
    assert out == "1,1,1,1\n1,-1,1,-1\n1,1,-1,-1\n1,-1,-1,1\n"
    code, out, _ = run(capsys, monkeypatch, "walsh-gen", "--order", "2", "--ordering", "sequency")
    assert out == "1,1,1,1\n1,1,-1,-1\n1,-1,-1,1\n1,-1,1,-1\n"
    code, out, _ = run(capsys, monkeypatch, "walsh-gen", "--order", "1", "--format", "json")
    assert json.loads(out)["rows"] == [[1, 1], [1, -1]]


def test_walsh_gen_order_too_large(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, "walsh-gen", "--order", "99")
    assert code == 1 and "error" in err


def test_frame_build_json_carries_metadata(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "frame-build", "--m", "3", "--order", "3")
    assert code == 0
    data = json.loads(out)
    assert data["m"] == 3 and data["n"] == 8
    assert data["walsh"]["kind"] == "plain"
    assert np.allclose(np.abs(frame_from_json(out).V), 1 / math.sqrt(8), atol=1e-15, rtol=0)


def test_frame_build_csv(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "frame-build", "--m", "1", "--order", "2", "--format", "csv")
    assert code == 0 and out == "0.5,0.5,0.5,0.5\n"


def test_reduced_piped_into_split(capsys, monkeypatch):
    _, frame_json, _ = run(capsys, monkeypatch, "frame-reduced", "--order", "3", "--cols", "1,3")
    code, out, _ = run(capsys, monkeypatch, "split", stdin=frame_json)
    assert code == 0
    rep = json.loads(out)
    assert rep["kind"] == "reduced"
    assert abs(rep["two_norm"] - 0.5) <= 1e-10
    assert abs(rep["frobenius"] - 1.0) <= 1e-10
    assert rep["eigen"] == {"0": 2, "0.5": 2, "1": 2}
    assert rep["delta_cols"] == [1, 3]


def test_plain_split_from_file(tmp_path, capsys, monkeypatch):
    path = tmp_path / "f.json"
    assert cli.main(["frame-build", "--m", "3", "--order", "3", "--output", str(path)]) == 0
    code, out, _ = run(capsys, monkeypatch, "split", "--input", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["kind"] == "plain"
    assert rep["two_norm"] <= 1e-12


def test_split_csv_without_metadata_is_generic(capsys, monkeypatch):
    csv = "\n".join(",".join(str(v / 2) for v in row) for row in checks.EX1_V4.tolist())
    code, out, _ = run(capsys, monkeypatch, "split", stdin=csv)
    rep = json.loads(out)
    assert code == 0 and rep["kind"] == "generic"
    assert abs(rep["two_norm"] - 0.5) <= 1e-10


def test_bruteforce_on_csv(capsys, monkeypatch):
    csv = "\n".join(",".join(str(v / 2) for v in row) for row in checks.EX1_V4.tolist())
    code, out, _ = run(capsys, monkeypatch, "bruteforce", "--threads", "2", stdin=csv)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["value"] - 0.5) <= 1e-9
    assert rep["inspected"] == 7
    assert 1 in rep["partition"]["J1"]
    assert sorted(rep["partition"]["J1"] + rep["partition"]["J2"]) == [1, 2, 3, 4]
    assert rep["report"]["satisfies"]["mss"]


def test_bruteforce_objectives_and_empty_mode(capsys, monkeypatch):
    _, frame_json, _ = run(capsys, monkeypatch, "frame-build", "--m", "2", "--order", "2")
    code, out, _ = run(capsys, monkeypatch, "bruteforce", "--objective", "devF", "--allow-empty",
                       stdin=frame_json)
    rep = json.loads(out)
    assert code == 0 and rep["inspected"] == 8 and rep["value"] <= 1e-12


def test_embed_example3_with_export(tmp_path, capsys, monkeypatch):
    from parseval_walsh.embedding import equal_norm_triple
    from parseval_walsh.frames import frame_to_json
    code, out, _ = run(capsys, monkeypatch, "embed", "--order", "2", "--export-dir", str(tmp_path / "mats"),
                       stdin=frame_to_json(equal_norm_triple(3 / 5)))
    assert code == 0
    rep = json.loads(out)
    assert rep["n"] == 4 and len(rep["constraints"]) == 2
    assert rep["pg_error"] <= 1e-10
    assert rep["discrepancy"] <= 0.5 + 1e-10
    qa = np.array(rep["Qa"])
    assert abs(qa[0, 0] - 0.9732) <= 2e-3 and abs(2 * qa[0, 1] - 0.2618) <= 2e-3
    for name in ("H", "G", "P"):
        mat = matrix_from_csv((tmp_path / "mats" / f"{name}.csv").read_text())
        assert mat.shape == (4, 4)
        assert np.max(np.abs(mat.T @ mat - np.eye(4))) <= 1e-10


def test_embed_rejects_non_parseval(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, "embed", "--order", "1", stdin="1,0\n0,2\n")
    assert code == 1 and "Parseval" in err


@pytest.mark.parametrize("name", list(checks.SUITES))
def test_verify_suites_pass(name, capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "verify", name)
    assert code == 0
    assert "FAIL" not in out
    done, total = out.strip().splitlines()[-1].split()[0].split("/")
    assert done == total


def test_verify_failure_exits_2(capsys, monkeypatch):
    monkeypatch.setitem(checks.SUITES, "ex3", lambda: [Check("broken", False, "forced")])
    code, out, err = run(capsys, monkeypatch, "verify", "ex3")
    assert code == 2
    assert "FAIL" in out and "numerical check failed" in err


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["walsh-gen"],
    ["frame-reduced", "--order", "3", "--cols", "x"],
    ["frame-reduced", "--order", "3", "--cols", "3,1"],
    ["frame-build", "--m", "9", "--order", "3"],
    ["split", "--input", "/nonexistent/frame.json"],
    ["verify", "ex9"],
])
def test_validation_errors_exit_1(argv, capsys, monkeypatch):
    code, _, _ = run(capsys, monkeypatch, *argv)
    assert code == 1


def test_malformed_json_input(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, "split", stdin="{not json")
    assert code == 1 and "JSON" in err


def test_help_exits_0(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "--help")
    assert code == 0 and "walsh-gen" in out


def test_output_is_byte_deterministic(capsys, monkeypatch):
    outs = set()
    for threads in ("1", "3"):
        _, frame_json, _ = run(capsys, monkeypatch, "frame-reduced", "--order", "3", "--cols", "2,4")
        _, out, _ = run(capsys, monkeypatch, "bruteforce", "--threads", threads, stdin=frame_json)
        outs.add(frame_json + out)
    assert len(outs) == 1
