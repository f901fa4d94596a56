"""Command-line interface: subcommands, exit codes, and output formats."""

import json

import numpy as np
import pytest

from qmcforge.cli import gen_test_circuit, main
from qmcforge.errors import SizeOutOfRange
from qmcforge.normalize import translate

DEUTSCH = """\
qubits 2
gate H 1
gate H 2
gate CNOT 1 2
gate H 1
measure 1
"""


@pytest.fixture
def circuit_file(tmp_path):
    path = tmp_path / "deutsch.qc"
    path.write_text(DEUTSCH)
    return str(path)


def test_validate_ok(circuit_file, capsys):
    assert main(["validate", circuit_file]) == 0
    out = capsys.readouterr().out
    assert "ok" in out and "2 qubits" in out


def test_validate_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.qc"
    path.write_text("qubits 2\ngate CNOT 1 1\nmeasure 1\nmeasure 2\n")
    assert main(["validate", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_validate_missing_file(capsys):
    assert main(["validate", "no-such-circuit.qc"]) == 2
    assert "error" in capsys.readouterr().err


def test_compile_writes_model(circuit_file, tmp_path, capsys):
    out = tmp_path / "model.qpmc"
    assert main(["compile", circuit_file, "--output", str(out),
                 "--name", "deutsch"]) == 0
    text = out.read_text()
    assert text.startswith("qmc\n")
    assert "module deutsch" in text
    assert "endmodule" in text


def test_compile_stdout_reparses(circuit_file, capsys):
    assert main(["compile", circuit_file]) == 0
    text = capsys.readouterr().out
    from qmcforge.emit import reparse_model
    q = reparse_model(text)
    assert q.k == 2 and q.h == 1


def test_compile_json_output(circuit_file, capsys):
    assert main(["compile", circuit_file, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["qubits"] == 2 and payload["measured"] == 1
    assert payload["swap_account"]["total"] == sum(
        payload["swap_account"]["per_gate"])
    from qmcforge.emit import reparse_model
    q = reparse_model(payload["model"])
    assert q.k == 2 and q.h == 1


def test_simulate_text_output(circuit_file, capsys):
    assert main(["simulate", circuit_file, "--input", "01"]) == 0
    out = capsys.readouterr().out
    assert "1  1.0000000000" in out


def test_simulate_json_output(circuit_file, capsys):
    assert main(["simulate", circuit_file, "--input", "01",
                 "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    probs = {o["bits"]: o["probability"] for o in payload["outcomes"]}
    assert probs["1"] == pytest.approx(1.0, abs=1e-9)


def test_simulate_state_file(circuit_file, tmp_path, capsys):
    amps = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]  # |01>
    state = tmp_path / "state.json"
    state.write_text(json.dumps(amps))
    assert main(["simulate", circuit_file, "--state-file", str(state)]) == 0
    assert "1  1.0000000000" in capsys.readouterr().out


def test_simulate_rejects_bad_bits(circuit_file, capsys):
    assert main(["simulate", circuit_file, "--input", "012"]) == 2


def test_verify_passes(circuit_file, capsys):
    assert main(["verify", circuit_file, "--random", "4", "--seed", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_against_model_file(circuit_file, tmp_path, capsys):
    model = tmp_path / "model.qpmc"
    assert main(["compile", circuit_file, "--output", str(model)]) == 0
    assert main(["verify", circuit_file, "--against", str(model)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_fails_against_wrong_model(circuit_file, tmp_path, capsys):
    wrong_src = tmp_path / "wrong.qc"
    wrong_src.write_text(DEUTSCH.replace("gate CNOT 1 2", "gate CZ 1 2"))
    model = tmp_path / "wrong.qpmc"
    assert main(["compile", str(wrong_src), "--output", str(model)]) == 0
    assert main(["verify", circuit_file, "--against", str(model)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_json_format(circuit_file, capsys):
    assert main(["verify", circuit_file, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert payload["deviations"]["probability"] <= 1e-9


def test_gen_test_circuit_structure():
    for k in range(3, 9):
        c = gen_test_circuit(k)
        assert c.k == k
        s, _ = translate(c)
        assert s.n == k  # consecutive gates share a wire: nothing groups
        assert s.h == 0
    with pytest.raises(SizeOutOfRange):
        gen_test_circuit(2)
    with pytest.raises(SizeOutOfRange):
        gen_test_circuit(13)


def test_gen_test_circuit_deterministic():
    from qmcforge.parser import emit_circuit_text
    assert emit_circuit_text(gen_test_circuit(5)) == \
        emit_circuit_text(gen_test_circuit(5))


def test_bench_runs_and_writes_report(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    report = tmp_path / "report.json"
    assert main(["bench", "--sizes", "3..4", "--runs", "2",
                 "--output", str(report)]) == 0
    out = capsys.readouterr().out
    assert "mean (s)" in out
    payload = json.loads(report.read_text())
    assert payload["format"] == "qmcforge-bench/1"
    assert [r["size"] for r in payload["results"]] == [3, 4]
    assert all(r["mean_s"] > 0 for r in payload["results"])


def test_bench_size_list_spelling(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["bench", "--sizes", "3,5", "--runs", "1",
                 "--output", str(tmp_path / "r.json")]) == 0
    payload = json.loads((tmp_path / "r.json").read_text())
    assert [r["size"] for r in payload["results"]] == [3, 5]


def test_strategies_emit_identical_models(tmp_path, capsys):
    src = tmp_path / "swapy.qc"
    src.write_text("qubits 3\ngate CNOT 3 1\nmeasure 3\n")
    for strategy in ("composed", "direct", "naive-adjacent"):
        assert main(["compile", str(src), "--strategy", strategy,
                     "--output", str(tmp_path / f"{strategy}.qpmc")]) == 0
    # all three strategies must produce the same model text
    texts = {(tmp_path / f"{s}.qpmc").read_text()
             for s in ("composed", "direct", "naive-adjacent")}
    assert len(texts) == 1


def test_emit_swaps_as_gates_flag(tmp_path, capsys):
    src = tmp_path / "swapy.qc"
    src.write_text("qubits 3\ngate CNOT 3 1\nmeasure 3\n")
    fused = tmp_path / "fused.qpmc"
    split = tmp_path / "split.qpmc"
    assert main(["compile", str(src), "--output", str(fused)]) == 0
    assert main(["compile", str(src), "--strategy", "naive-adjacent",
                 "--emit-swaps-as-gates", "--output", str(split)]) == 0
    # standalone swaps stretch the chain: more guarded commands
    assert split.read_text().count("(s' =") > fused.read_text().count("(s' =")
