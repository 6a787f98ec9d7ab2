import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concordsim.errors import PromiseViolation
from concordsim.exactnum import ExactMatrix
from concordsim.generate import (
    cnot, exceptional_gate_1, exceptional_gate_2, hadamard, identity_gate, not_gate, plus_minus_basis,
    random_planted_gate,
)
from concordsim.lbf import (
    CandidateProjector, GateTooLarge, Incompatible, LbfConfig, LbfInput, LbfSuccess, build_linear_system,
    enumerate_candidates, fine_grain, run_lbf, slice_basis, solve_local_basis, xk_unique_basis,
)
from concordsim.oracle import lbf_relation_holds

h = Fraction(1, 2)
P0, P1 = ExactMatrix.diag([1, 0]), ExactMatrix.diag([0, 1])
PLUS, MINUS = plus_minus_basis()
COMP1 = ((P0, P1),)
COMP2 = ((P0, P1), (P0, P1))


def cand(subset, dims):
    return CandidateProjector(frozenset(subset), tuple(dims))


def unique(gate, prev, subset, seed=1):
    inp = LbfInput.from_projectors(gate, prev)
    sol = solve_local_basis(inp, cand(subset, inp.dims), random.Random(seed))
    return sol, (xk_unique_basis(sol, random.Random(seed)) if sol.complete else None)


def test_enumeration_sizes():
    one = list(enumerate_candidates((2,)))
    assert [c.subset for c in one] == [frozenset({0}), frozenset({1}), frozenset({0, 1})]
    four = {c.subset for c in enumerate_candidates((2, 2))}
    nontrivial = {s for s in four if 0 < len(s) < 4}
    assert len(nontrivial) == 14  # 7 pairs up to complementation
    assert frozenset(range(4)) in four
    with pytest.raises(GateTooLarge):
        list(enumerate_candidates((2,) * 7))


def _null_dim(gate, prev, subset, j):
    inp = LbfInput.from_projectors(gate, prev)
    from concordsim.lbf import _Images
    C = _Images(inp).projector(frozenset(subset))
    d = inp.dims[j]
    rows = build_linear_system(slice_basis(C, inp.dims, j), d)
    from concordsim.exactnum import integer_nullspace
    return integer_nullspace(rows) if rows else None, d


def test_linear_system_identity_gate():
    ns, d = _null_dim(identity_gate((0,), (2,)), COMP1, [0], 0)
    assert len(ns) == d  # diagonal Hermitian matrices


def test_hadamard_unique_basis_is_plus_minus():
    sol, ub = unique(hadamard(), COMP1, [0])
    assert sol.complete
    assert set(p.key() for p in ub[0]) == {PLUS.key(), MINUS.key()}


def test_identity_candidate_identity_blocks():
    sol, ub = unique(identity_gate((0, 1), (2, 2)), COMP2, range(4))
    assert sol.complete
    assert ub == ((ExactMatrix.identity(2),), (ExactMatrix.identity(2),))


def test_exc2_candidates():
    sol, ub = unique(exceptional_gate_2(), COMP2, [0])
    assert sol.complete and ub == ((P0, P1), (P0, P1))
    sol, ub = unique(exceptional_gate_2(), COMP2, [2, 3])
    assert sol.complete and ub == ((P0, P1), (ExactMatrix.identity(2),))


def test_exc1_rank_one_is_incomplete():
    sol, _ = unique(exceptional_gate_1(), COMP2, [0])
    assert not sol.complete


def test_fine_grain_splits_free_blocks_canonically():
    out = fine_grain([((P0, P1), (ExactMatrix.identity(2),))], (2, 2))
    assert out == ((P0, P1), (P0, P1))


def test_fixed_gates():
    r = run_lbf(LbfInput.from_projectors(identity_gate((0,), (2,)), COMP1))
    assert isinstance(r, LbfSuccess) and r.basis == COMP1
    assert all(k == v for k, v in r.permutation.mapping.items())
    r = run_lbf(LbfInput.from_projectors(not_gate(), COMP1))
    assert r.permutation.mapping == {(0,): (1,), (1,): (0,)}
    r = run_lbf(LbfInput.from_projectors(hadamard(), COMP1))
    assert all(k == v for k, v in r.permutation.mapping.items())
    assert r.basis == ((PLUS, MINUS),)
    # CNOT on |+-> inputs: qubit 1 now controls qubit 0
    r = run_lbf(LbfInput.from_projectors(cnot(), ((PLUS, MINUS), (PLUS, MINUS))))
    assert r.permutation.mapping == {(0, 0): (0, 0), (0, 1): (1, 1), (1, 0): (1, 0), (1, 1): (0, 1)}


def test_exceptional_gates_are_heralded():
    for g in (exceptional_gate_1(), exceptional_gate_2()):
        r = run_lbf(LbfInput.from_projectors(g, COMP2), step=3)
        assert isinstance(r, Incompatible)
        assert r.message == "Local-basis ambiguity at time step 3"


def test_no_complete_candidate_is_a_promise_violation():
    # restricting the candidates to an entangling split leaves nothing complete
    with pytest.raises(PromiseViolation):
        run_lbf(LbfInput.from_projectors(exceptional_gate_1(), COMP2), candidates=[frozenset({0})])


def _purity_ok(basis):
    for projs in basis:
        for p in projs:
            if not (p.trace() == (p @ p).trace() == (p @ p @ p).trace() == 1):
                return False
    return True


@settings(max_examples=40)
@given(st.integers(0, 10**9), st.lists(st.sampled_from([2, 3]), min_size=1, max_size=2))
def test_planted_gates_round_trip(seed, dims):
    rng = random.Random(seed)
    pg, _ = random_planted_gate(dims, rng)
    r = run_lbf(LbfInput.from_projectors(pg.gate, pg.prev_basis), step=0)
    assert isinstance(r, LbfSuccess)
    assert lbf_relation_holds(pg.gate, pg.prev_basis, r)
    assert _purity_ok(r.basis)
    # the recovered partition refines the planted mixing blocks
    for b in pg.blocks:
        assert any(b <= blk for blk in r.partition)
    # uniquely determined projectors commute with the planted output basis
    for ub in r.unique_bases:
        for j, projs in enumerate(ub):
            for p in projs:
                for q in pg.new_basis[j]:
                    assert p @ q == q @ p


@settings(max_examples=10)
@given(st.integers(0, 10**9), st.integers(0, 50), st.integers(0, 50))
def test_classification_is_seed_independent(seed, s1, s2):
    pg, _ = random_planted_gate((2, 2), random.Random(seed))
    inp = LbfInput.from_projectors(pg.gate, pg.prev_basis)
    a = run_lbf(inp, LbfConfig(seed=s1))
    b = run_lbf(inp, LbfConfig(seed=s2))
    c = run_lbf(inp, LbfConfig(seed=s1))
    assert type(a) is type(b)
    assert a.partition == b.partition and a.basis == b.basis
    assert a.permutation.mapping == c.permutation.mapping
