import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concordsim.circuit import Circuit, InitialState, LocalBasis, QuditRegister
from concordsim.errors import ResourceLimit
from concordsim.exactnum import ExactMatrix
from concordsim.generate import cnot, hadamard, identity_gate, plus_minus_basis, random_concordant_circuit
from concordsim.measure import MeasurementSpec
from concordsim.oracle import check_concordant, dense_marginals, evolve, initial_evolution, run_dense
from concordsim.simulator import SimulatorConfig, build_update_rule, exact_marginals

h = Fraction(1, 2)


def circuit(dims, probs, gates=(), basis=None):
    basis = basis or LocalBasis.computational(dims)
    return Circuit(QuditRegister(tuple(dims)), InitialState(basis, probs), tuple(gates)).validate()


def test_evolve_examples():
    c = circuit((2,), ((1, 0),))
    ev = initial_evolution(c)
    assert evolve(ev, identity_gate((0,), (2,))).state.matrix == ev.state.matrix
    assert evolve(ev, hadamard()).state.matrix == ExactMatrix.from_rows([[h, h], [h, h]])
    c2 = circuit((2, 2), ((1, 0), (1, 0)), basis=LocalBasis((plus_minus_basis(), LocalBasis.computational((2,)).per_qudit[0])))
    bell = ExactMatrix.from_rows([[h, 0, 0, h], [0, 0, 0, 0], [0, 0, 0, 0], [h, 0, 0, h]])
    out = evolve(initial_evolution(c2), cnot())
    assert out.state.matrix == bell and out.history == 1
    assert not check_concordant(out, LocalBasis.computational((2, 2)))
    assert not check_concordant(out, LocalBasis((plus_minus_basis(), plus_minus_basis())))


def test_concordance_and_marginal_examples():
    c = circuit((2, 2), ((h, h), (1, 0)))
    ev = initial_evolution(c)
    assert check_concordant(ev, c.initial.basis)
    assert dense_marginals(ev, MeasurementSpec.computational([1], c.dims)) == {"0": 1, "1": 0}
    assert dense_marginals(ev, MeasurementSpec(((0, plus_minus_basis()),))) == {"0": h, "1": h}


def test_dense_cap():
    c = circuit((2,) * 3, ((1, 0),) * 3)
    with pytest.raises(ResourceLimit):
        run_dense(c, cap=4)


@settings(max_examples=15)
@given(st.integers(0, 10**9), st.sampled_from([(2, 2, 2), (2, 3), (3, 3), (2, 2, 2, 2)]))
def test_dense_and_simulator_agree(seed, dims):
    c = random_concordant_circuit(dims, 5, random.Random(seed))
    rule = build_update_rule(c, SimulatorConfig(strategy="lbf"))
    states = run_dense(c)
    basis = c.initial.basis
    assert check_concordant(states[0], basis)
    for step, ev in zip(rule.steps, states[1:]):
        assert ev.state.matrix.trace() == 1 and ev.state.matrix.is_hermitian()
        basis = basis.replace({j: step.new_basis[k] for k, j in enumerate(step.support)})
        assert check_concordant(ev, basis)
    assert basis == rule.final_basis
    spec = MeasurementSpec.computational(range(len(dims)), dims)
    assert dense_marginals(states[-1], spec) == exact_marginals(c, spec, rule=rule)
