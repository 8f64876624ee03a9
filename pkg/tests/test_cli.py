"""End-to-end command-line checks: outputs, artifacts, and exit codes."""

import json

import numpy as np
import pytest

from schurhorn import load_matrix, load_plan, load_truncated_projection, save_vector
from schurhorn.cli import main


def _kv(capsys) -> dict:
    out = capsys.readouterr().out
    pairs = {}
    for line in out.strip().splitlines():
        key, _, value = line.partition("=")
        pairs[key] = value
    return pairs


def _write_vector(path, values):
    save_vector(path, np.asarray(values, dtype=float))
    return str(path)


def _write_spec(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


INTERLEAVE_SPEC = {
    "prefix": [],
    "tail": {
        "kind": "interleave",
        "parts": [
            {"kind": "geometric-low", "c": 0.5, "r": 0.5},
            {"kind": "geometric-high", "c": 0.5, "r": 0.5},
        ],
    },
}


def test_majorize_true_with_plan(tmp_path, capsys):
    x = _write_vector(tmp_path / "x.json", [2.0, 2.0, 2.0])
    y = _write_vector(tmp_path / "y.json", [3.0, 2.0, 1.0])
    plan_path = tmp_path / "plan.json"
    code = main(["majorize", x, y, "--decompose", str(plan_path)])
    pairs = _kv(capsys)
    assert code == 0
    assert pairs["majorizes"] == "true"
    assert int(pairs["transforms"]) <= 2
    assert float(pairs["replay_error"]) <= 1e-9
    plan = load_plan(plan_path)
    assert len(plan.transforms) <= 2


def test_majorize_false_exits_one(tmp_path, capsys):
    x = _write_vector(tmp_path / "x.json", [3.0, 1.0])
    y = _write_vector(tmp_path / "y.json", [2.0, 2.0])
    code = main(["majorize", x, y])
    pairs = _kv(capsys)
    assert code == 1
    assert pairs["majorizes"] == "false"


def test_majorize_length_mismatch_exits_two(tmp_path, capsys):
    x = _write_vector(tmp_path / "x.json", [1.0])
    y = _write_vector(tmp_path / "y.json", [0.5, 0.5])
    assert main(["majorize", x, y]) == 2
    capsys.readouterr()


def test_synth_writes_verifiable_artifacts(tmp_path, capsys):
    d = _write_vector(tmp_path / "d.json", [1.0, 1.0, 1.0])
    s = _write_vector(tmp_path / "s.json", [2.0, 1.0, 0.0])
    out = tmp_path / "a.json"
    unitary = tmp_path / "u.json"
    code = main(["synth", d, s, "--out", str(out), "--unitary", str(unitary)])
    pairs = _kv(capsys)
    assert code == 0
    assert float(pairs["hermitian_residual"]) <= 1e-10
    assert float(pairs["unitary_residual"]) <= 1e-12
    assert float(pairs["diagonal_error"]) <= 1e-10
    assert float(pairs["spectrum_error"]) <= 1e-8

    code = main(["verify", str(out), "--diagonal", d, "--spectrum", s])
    pairs = _kv(capsys)
    assert code == 0
    assert pairs["ok"] == "true"
    a = load_matrix(out)
    u = load_matrix(unitary)
    assert np.max(np.abs(u @ np.diag([2.0, 1.0, 0.0]) @ u.conj().T - a)) <= 1e-9


def test_synth_non_majorized_exits_one(tmp_path, capsys):
    d = _write_vector(tmp_path / "d.json", [2.0, 0.0])
    s = _write_vector(tmp_path / "s.json", [1.5, 0.5])
    assert main(["synth", d, s, "--out", str(tmp_path / "a.json")]) == 1
    capsys.readouterr()


def test_carpenter_and_verify(tmp_path, capsys):
    d = _write_vector(tmp_path / "d.json", [0.75, 0.5, 0.5, 0.25])
    out = tmp_path / "p.json"
    code = main(["carpenter", d, "--out", str(out)])
    pairs = _kv(capsys)
    assert code == 0
    assert float(pairs["trace"]) == pytest.approx(2.0, abs=1e-9)
    assert float(pairs["projection_residual"]) <= 1e-10
    assert float(pairs["entry_excess"]) <= 1e-9
    code = main(["verify", str(out), "--diagonal", d])
    assert code == 0
    capsys.readouterr()


def test_carpenter_infeasible_exits_one(tmp_path, capsys):
    d = _write_vector(tmp_path / "d.json", [0.5, 0.25])
    assert main(["carpenter", d, "--out", str(tmp_path / "p.json")]) == 1
    capsys.readouterr()


def test_obstruction_classifies_and_builds(tmp_path, capsys):
    spec = _write_spec(tmp_path / "spec.json", INTERLEAVE_SPEC)
    build = tmp_path / "tower.json"
    code = main(["obstruction", spec, "--build", str(build)])
    pairs = _kv(capsys)
    assert code == 0
    assert pairs["case"] == "CaseB-feasible"
    assert float(pairs["a_f"]) == pytest.approx(0.5)
    assert float(pairs["b_f"]) == pytest.approx(0.5)
    assert float(pairs["defect"]) <= 1e-12
    assert int(pairs["depth"]) == 6
    assert int(pairs["dim"]) == 14
    proj = load_truncated_projection(build)
    assert proj.depth == 6

    code = main(["verify", str(build), "--spec", spec])
    pairs = _kv(capsys)
    assert code == 0
    assert pairs["ok"] == "true"


def test_obstruction_case_a_build(tmp_path, capsys):
    spec = _write_spec(
        tmp_path / "spec.json",
        {
            "prefix": [],
            "tail": {
                "kind": "divergent-low",
                "generator": "0.5",
                "certificate": {"kind": "constant", "p": 0.5, "start": 1},
            },
        },
    )
    build = tmp_path / "block.json"
    code = main(["obstruction", spec, "--build", str(build), "--depth", "3"])
    pairs = _kv(capsys)
    assert code == 0
    assert pairs["case"] == "CaseA"
    assert pairs["a_f"] == "inf"
    assert pairs["defect"] == "unattributed"
    assert int(pairs["dim"]) == 12
    assert float(pairs["trace"]) == pytest.approx(7.0, abs=1e-9)
    assert pairs["residual_bound"] == "inf"
    code = main(["verify", str(build), "--spec", spec])
    assert code == 0
    capsys.readouterr()


def test_obstruction_infeasible_exits_one(tmp_path, capsys):
    spec = _write_spec(
        tmp_path / "spec.json",
        {"prefix": [], "tail": {"kind": "geometric-low", "c": 0.5, "r": 0.5}},
    )
    code = main(["obstruction", spec])
    pairs = _kv(capsys)
    assert code == 1
    assert pairs["case"] == "Infeasible"
    assert float(pairs["defect"]) == pytest.approx(0.5)


def test_verify_failure_exits_one(tmp_path, capsys):
    d = _write_vector(tmp_path / "d.json", [0.5, 0.5])
    out = tmp_path / "p.json"
    assert main(["carpenter", d, "--out", str(out)]) == 0
    wrong = _write_vector(tmp_path / "wrong.json", [0.9, 0.1])
    code = main(["verify", str(out), "--diagonal", wrong])
    capsys.readouterr()
    assert code == 1


def test_malformed_inputs_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["majorize", str(bad), str(bad)]) == 2
    missing = str(tmp_path / "missing.json")
    assert main(["majorize", missing, missing]) == 2
    not_vector = tmp_path / "nv.json"
    not_vector.write_text(json.dumps({"rows": []}))
    assert main(["majorize", str(not_vector), str(not_vector)]) == 2
    capsys.readouterr()


def test_budget_exhaustion_exits_three(tmp_path, capsys):
    spec = _write_spec(tmp_path / "spec.json", INTERLEAVE_SPEC)
    code = main(["obstruction", spec, "--build", str(tmp_path / "t.json"), "--budget", "2"])
    capsys.readouterr()
    assert code == 3


def test_csv_and_human_styles(tmp_path, capsys):
    x = _write_vector(tmp_path / "x.json", [1.0, 1.0])
    y = _write_vector(tmp_path / "y.json", [2.0, 0.0])
    assert main(["majorize", x, y, "--csv"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "n,majorizes"
    assert out[1] == "2,true"
    assert main(["majorize", x, y, "--human"]) == 0
    out = capsys.readouterr().out
    assert "majorizes: true" in out
