"""Dense exact reference: density-matrix evolution, concordance checks, marginals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from .circuit import Circuit, Gate, LocalBasis, conjugate_projector, dit_strings, embed_projector, format_dits
from .dense import conjugate_local, partial_trace
from .errors import ResourceLimit
from .exactnum import ExactMatrix
from .frase import DenseState
from .measure import MeasurementSpec

__all__ = ["DenseEvolution", "evolve", "check_concordant", "dense_marginals", "initial_evolution", "run_dense",
           "lbf_relation_holds", "DEFAULT_DENSE_CAP"]

DEFAULT_DENSE_CAP = 2**10


@dataclass(frozen=True, eq=False)
class DenseEvolution:
    state: DenseState
    history: int = 0


def initial_evolution(circuit: Circuit, cap: int = DEFAULT_DENSE_CAP) -> DenseEvolution:
    if circuit.register.dimension > cap:
        raise ResourceLimit(f"dense dimension {circuit.register.dimension} exceeds cap {cap}")
    return DenseEvolution(DenseState.from_product(circuit.register, circuit.initial.basis, circuit.initial.probs))


def evolve(d: DenseEvolution, g: Gate, cap: int = DEFAULT_DENSE_CAP) -> DenseEvolution:
    """rho <- M rho M^dagger / n on the gate support."""
    reg = d.state.register
    if reg.dimension > cap:
        raise ResourceLimit(f"dense dimension {reg.dimension} exceeds cap {cap}")
    rho = conjugate_local(g.matrix, g.support, reg.dims, d.state.matrix).scale(Fraction(1, g.radicand))
    return DenseEvolution(DenseState(reg, rho), d.history + 1)


def run_dense(circuit: Circuit, cap: int = DEFAULT_DENSE_CAP) -> list[DenseEvolution]:
    """States before the first gate and after every gate."""
    ev = initial_evolution(circuit, cap)
    out = [ev]
    for g in circuit.gates:
        ev = evolve(ev, g, cap)
        out.append(ev)
    return out


def check_concordant(d: DenseEvolution, basis: LocalBasis) -> bool:
    """True iff rho has no off-diagonal elements in the product basis."""
    mats = []
    for j in range(len(basis.per_qudit)):
        vecs = basis.vectors(j)
        rows = [[v[i, 0] for v in vecs] for i in range(vecs[0].rows)]
        mats.append(ExactMatrix.from_rows(rows))
    V = ExactMatrix.kron_all(mats)
    R = V.dagger() @ d.state.matrix @ V
    n = R.rows
    for i in range(n):
        for k in range(n):
            if i != k and (R.re[i, k] or R.im[i, k]):
                return False
    return True


def dense_marginals(d: DenseEvolution, spec: MeasurementSpec) -> dict[str, Fraction]:
    """Joint outcome distribution of the measured qudits, keyed by outcome digits in target order."""
    dims = d.state.dims
    qs = spec.qudits
    reduced = partial_trace(d.state.matrix, sorted(qs), dims)
    bases = dict(spec.targets)
    out = {}
    for outcome in product(*(range(len(bases[q])) for q in qs)):
        chosen = {q: bases[q][k] for q, k in zip(qs, outcome)}
        op = ExactMatrix.kron_all([chosen[q] for q in sorted(qs)])
        p = (reduced @ op).trace()
        if not p.is_real():
            raise ArithmeticError("non-real probability")
        out[format_dits(outcome)] = p.real
    return out


def lbf_relation_holds(gate: Gate, prev_basis, success) -> bool:
    """G L X L^dagger G^dagger == L' D X D^dagger L'^dagger for every block X of a finder result,
    checked by dense conjugation of the embedded projectors."""
    old = LocalBasis(tuple(tuple(p) for p in prev_basis))
    new = LocalBasis(success.basis)
    sup = tuple(range(len(old.per_qudit)))
    strings = dit_strings([len(p) for p in old.per_qudit])
    for block in success.partition:
        xs = [strings[x] for x in block]
        lhs = conjugate_projector(gate, embed_projector(old, sup, xs))
        rhs = embed_projector(new, sup, [success.permutation(x) for x in xs])
        if lhs != rhs:
            return False
    return True
