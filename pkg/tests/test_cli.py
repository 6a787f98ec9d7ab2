import json
import random
from fractions import Fraction

import pytest

from concordsim.circuit import Circuit, Gate, InitialState, LocalBasis, QuditRegister, dump_circuit
from concordsim.cli import EXIT_HERALD, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, EXIT_PROMISE, main
from concordsim.generate import dqc1_circuit, exceptional_gate_1, not_gate, random_local_unitary

h = Fraction(1, 2)


def write(tmp_path, c, name="c.json"):
    p = tmp_path / name
    p.write_text(dump_circuit(c))
    return str(p)


def exc1_circuit():
    return Circuit(QuditRegister((2, 2)), InitialState(LocalBasis.computational((2, 2)), ((h, h), (h, h))),
                   (exceptional_gate_1(),)).validate()


def test_lbf_herald_exit(tmp_path, capsys):
    path = write(tmp_path, exc1_circuit())
    assert main(["lbf", "--circuit", path, "--gate", "0"]) == EXIT_HERALD
    out = capsys.readouterr()
    assert "Local-basis ambiguity at time step 0" in out.err
    assert json.loads(out.out)["status"] == "incompatible"
    assert main(["simulate", "--circuit", path, "--shots", "5"]) == EXIT_HERALD


def test_zero_shots(tmp_path, capsys):
    path = write(tmp_path, dqc1_circuit(2, (frozenset({0}),)))
    assert main(["simulate", "--circuit", path, "--shots", "0"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["shots"] == 0 and rep["counts"] == {}


def test_simulate_is_byte_identical(tmp_path, capsys):
    path = write(tmp_path, dqc1_circuit(3, (frozenset({0, 1}), frozenset({2}))))
    argv = ["simulate", "--circuit", path, "--shots", "2000", "--seed", "9", "--measure", "0:Z", "--exact"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv + ["--threads", "3"]) == EXIT_OK
    assert capsys.readouterr().out == first
    assert sum(json.loads(first)["counts"].values()) == 2000


def test_gen_then_verify(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["gen", "--qudits", "5", "--seed", "3", "-o", str(out)]) == EXIT_OK
    assert main(["verify", "--circuit", str(out)]) == EXIT_OK
    report = capsys.readouterr().out
    assert "NOT" not in report and "marginals: equal" in report


def test_marginals_and_update_rule(tmp_path, capsys):
    c = Circuit(QuditRegister((2,)), InitialState(LocalBasis.computational((2,)), ((1, 0),)), (not_gate(),)).validate()
    path = write(tmp_path, c)
    assert main(["marginals", "--circuit", path]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"0": "0", "1": "1"}
    rule = tmp_path / "rule.json"
    assert main(["update-rule", "--circuit", path, "-o", str(rule)]) == EXIT_OK
    assert json.loads(rule.read_text())["steps"][0]["support"] == [0]


def test_measure_file_basis(tmp_path, capsys):
    c = dqc1_circuit(1, (frozenset({0}),))
    path = write(tmp_path, c)
    basis = tmp_path / "pm.json"
    basis.write_text(json.dumps([[["1/2", "1/2"], ["1/2", "1/2"]], [["1/2", "-1/2"], ["-1/2", "1/2"]]]))
    assert main(["marginals", "--circuit", path, "--measure", f"0:{basis}"]) == EXIT_OK
    # control picks up (-1)^x averaged over a uniform bit: <X> = 0
    assert json.loads(capsys.readouterr().out) == {"0": "1/2", "1": "1/2"}


@pytest.mark.parametrize("spec", ["0:Q", "7:Z", "x:Z", "0"])
def test_bad_measure_token_is_named(tmp_path, capsys, spec):
    path = write(tmp_path, dqc1_circuit(1, ()))
    assert main(["marginals", "--circuit", path, "--measure", spec]) == EXIT_INPUT
    assert "bad measurement" in capsys.readouterr().err


def test_input_errors(tmp_path, capsys):
    assert main(["simulate", "--circuit", str(tmp_path / "missing.json"), "--shots", "1"]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text('{"dims": [2], "initial": {"probs": [["1", "1"]], "basis": []}, "gates": []}')
    assert main(["marginals", "--circuit", str(bad)]) == EXIT_INPUT
    assert "normalized" in capsys.readouterr().err
    path = write(tmp_path, exc1_circuit())
    assert main(["lbf", "--circuit", path, "--gate", "4"]) == EXIT_INPUT


def test_promise_violation_exit(tmp_path, capsys):
    # Bell-basis sandwich of a generic local rotation: no computational split stays local
    rng = random.Random(1)
    u, v = random_local_unitary(2, rng), random_local_unitary(2, rng)
    bell = exceptional_gate_1().matrix
    g = Gate((0, 1), bell @ u.matrix.kron(v.matrix) @ bell, 4 * u.radicand * v.radicand)
    c = Circuit(QuditRegister((2, 2)), InitialState(LocalBasis.computational((2, 2)), ((1, 0), (1, 0))), (g,))
    path = write(tmp_path, c.validate())
    assert main(["update-rule", "--circuit", path, "--strategy", "lbf"]) == EXIT_PROMISE
    assert "promise violation" in capsys.readouterr().err


def test_exit_code_table():
    assert (EXIT_OK, EXIT_INPUT, EXIT_HERALD, EXIT_PROMISE, EXIT_MISMATCH) == (0, 1, 2, 3, 4)
