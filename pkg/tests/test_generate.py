import random
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from concordsim.circuit import LocalBasis, conjugate_projector, dit_strings, embed_projector
from concordsim.exactnum import ExactMatrix
from concordsim.generate import (
    DQC1_FIXTURES, anf_eval, dqc1_circuit, exceptional_gate_1, exceptional_gate_2, random_anf, random_local_unitary,
    random_planted_gate,
)


@settings(max_examples=30)
@given(st.integers(0, 10**9), st.sampled_from([2, 3, 4, 5]))
def test_local_unitaries_are_exact_bases(seed, d):
    u = random_local_unitary(d, random.Random(seed))
    assert u.matrix.dagger() @ u.matrix == ExactMatrix.identity(d).scale(u.radicand)


@settings(max_examples=20)
@given(st.integers(0, 10**9), st.lists(st.sampled_from([2, 3]), min_size=1, max_size=3))
def test_planted_gate_maps_blocks_as_built(seed, dims):
    pg, _ = random_planted_gate(dims, random.Random(seed))
    old, new = LocalBasis(pg.prev_basis), LocalBasis(pg.new_basis)
    sup = tuple(range(len(dims)))
    strings = dit_strings(dims)
    for blk in pg.blocks:
        xs = [strings[x] for x in blk]
        ys = [strings[pg.images[x]] for x in blk]
        assert conjugate_projector(pg.gate, embed_projector(old, sup, xs)) == embed_projector(new, sup, ys)


def test_exceptional_gates_are_unitary_fixtures():
    for g in (exceptional_gate_1(), exceptional_gate_2()):
        assert g.matrix.dagger() @ g.matrix == ExactMatrix.identity(4).scale(g.radicand)


def test_dqc1_fixtures_and_anf():
    assert set(DQC1_FIXTURES) == {"chained_products", "inner_product", "mixed_degree"}
    ip = DQC1_FIXTURES["inner_product"]
    assert anf_eval(ip, [1, 1, 0, 1, 0, 0]) == 1
    assert anf_eval(ip, [1, 1, 0, 1, 1, 0]) == 0
    c = dqc1_circuit(6, ip)
    assert len(c.gates) == 3 and c.dims == (2,) * 7
    anf = random_anf(5, random.Random(3))
    assert all(max(m, default=0) < 5 for m in anf)
    values = {anf_eval(anf, x) for x in product((0, 1), repeat=5)}
    assert values <= {0, 1}
