"""Subsystem eigenprojectors on explicitly represented states.

A projector Pi on subsystem b is a subsystem eigenprojector (SE) of rho when
rho (1 (x) Pi) = (1 (x) Pi) rho; its subsystem operator-valued eigenvalue
(SOVE) is Tr_b[(1 (x) Pi) rho] / rank(Pi). Merging all SEs that share a SOVE
gives the unique full-rank subsystem eigenprojector (FRASE) decomposition
rho = sum_k SOVE_k (x) Pi_k.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import prod
from typing import Sequence

from .circuit import LocalBasis, QuditRegister, dit_strings
from .dense import apply_left, partial_trace
from .errors import NotAnEigenprojector, NotQuantumClassical
from .exactnum import ExactMatrix, GaussianRational, SpanBuilder, spectral_groups

__all__ = [
    "DenseState",
    "Frase",
    "sove_of",
    "is_subsystem_eigenprojector",
    "frase_decompose",
    "orthogonality_check",
    "reconstruct",
]


@dataclass(frozen=True, eq=False)
class DenseState:
    register: QuditRegister
    matrix: ExactMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.register.dimension, self.register.dimension):
            raise ValueError("state dimension does not match register")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.register.dims

    def validate(self) -> "DenseState":
        if not self.matrix.is_hermitian():
            raise ValueError("state is not Hermitian")
        if self.matrix.trace() != 1:
            raise ValueError("state trace is not 1")
        return self

    @classmethod
    def from_product(cls, register: QuditRegister, basis: LocalBasis, probs) -> "DenseState":
        mats = []
        for projs, ps in zip(basis.per_qudit, probs):
            acc = ExactMatrix.zeros(projs[0].rows)
            for p, q in zip(projs, ps):
                if q:
                    acc = acc + p.scale(q)
            mats.append(acc)
        return cls(register, ExactMatrix.kron_all(mats))


@dataclass(frozen=True, eq=False)
class Frase:
    projector: ExactMatrix
    rank: int
    sove: ExactMatrix

    def key(self):
        return self.projector.key()


def _complement(b: Sequence[int], n: int) -> list[int]:
    return [a for a in range(n) if a not in b]


def _project_b(state: DenseState, b: Sequence[int], se: ExactMatrix) -> ExactMatrix:
    """(1 (x) se) rho, with se expressed on b in increasing qudit order."""
    return apply_left(se, sorted(b), state.dims, state.matrix)


def is_subsystem_eigenprojector(state: DenseState, b: Sequence[int], se: ExactMatrix) -> bool:
    # rho and se are Hermitian, so rho E = (E rho)^dagger: they commute iff E rho is Hermitian
    return _project_b(state, b, se).is_hermitian()


def sove_of(state: DenseState, b: Sequence[int], se: ExactMatrix, *, check: bool = True) -> ExactMatrix:
    """Tr_b[(1 (x) se) rho], divided by rank(se)."""
    E_rho = _project_b(state, b, se)
    if check and not E_rho.is_hermitian():
        raise NotAnEigenprojector("projector does not commute with the state")
    return _sove_from(state, b, E_rho, se.trace().real)


def _sove_from(state: DenseState, b: Sequence[int], E_rho: ExactMatrix, rank) -> ExactMatrix:
    keep = _complement(sorted(b), len(state.dims))
    if keep:
        out = partial_trace(E_rho, keep, state.dims)
    else:
        out = ExactMatrix.from_rows([[E_rho.trace()]])
    return out.scale(1 / rank) if rank != 1 else out


def reconstruct(state: DenseState, b: Sequence[int], frases: Sequence[Frase]) -> ExactMatrix:
    """sum_k SOVE_k (x) Pi_k placed back in register order."""
    b = sorted(b)
    a = _complement(b, len(state.dims))
    dims = state.dims
    total = ExactMatrix.zeros(prod(dims))
    order = a + b
    sub_dims = [dims[q] for q in order]
    for f in frases:
        term = f.sove.kron(f.projector) if a else f.projector.scale(f.sove[0, 0])
        total = total + _reorder(term, sub_dims, order)
    return total


def _reorder(A: ExactMatrix, sub_dims: Sequence[int], order: Sequence[int]) -> ExactMatrix:
    """Operator given on qudits in ``order`` rewritten in register order."""
    n = len(order)
    inv = sorted(range(n), key=lambda i: order[i])
    perm = inv + [n + i for i in inv]
    shape = tuple(sub_dims) + tuple(sub_dims)
    D = prod(sub_dims)
    re = A.re.reshape(shape).transpose(perm).reshape(D, D)
    im = A.im.reshape(shape).transpose(perm).reshape(D, D)
    return ExactMatrix(re, im, A.den)


def orthogonality_check(f1: Frase, f2: Frase) -> bool:
    return (f1.projector @ f2.projector).trace() == 0


def _canonical(frases: list[Frase]) -> list[Frase]:
    return sorted(frases, key=lambda f: f.key(), reverse=True)


def frase_decompose(state: DenseState, b: Sequence[int], basis: Sequence[Sequence[ExactMatrix]] | None = None, *,
                    search_order: Sequence[int] | None = None) -> list[Frase]:
    """Unique FRASE decomposition of ``state`` on subsystem ``b``.

    With ``basis`` (per qudit of b, in increasing qudit order, complete rank-1
    projectors) the rank-1 SEs of that product basis are grouped by SOVE;
    ``search_order`` permutes the order in which they are visited. Without a
    basis, FRASEs are the minimal projectors of the commutative algebra spanned
    by the b-slices of the state.
    """
    b = sorted(b)
    if basis is not None:
        frases = _from_basis(state, b, basis, search_order)
    else:
        frases = _from_slices(state, b)
    if reconstruct(state, b, frases) != state.matrix:
        raise NotQuantumClassical("state is not quantum-classical on the requested subsystem")
    return _canonical(frases)


def _from_basis(state, b, basis, search_order):
    strings = dit_strings([len(p) for p in basis])
    order = list(range(len(strings))) if search_order is None else list(search_order)
    groups: dict[tuple, tuple[ExactMatrix, int, ExactMatrix]] = {}
    for i in order:
        x = strings[i]
        Pi = ExactMatrix.kron_all([basis[k][x[k]] for k in range(len(b))])
        E_rho = _project_b(state, b, Pi)
        if not E_rho.is_hermitian():
            raise NotQuantumClassical(f"basis element {x} is not a subsystem eigenprojector")
        s = _sove_from(state, b, E_rho, 1)
        key = s.key()
        if key in groups:
            P, r, _ = groups[key]
            groups[key] = (P + Pi, r + 1, s)
        else:
            groups[key] = (Pi, 1, s)
    return [Frase(P, r, s) for P, r, s in groups.values()]


def _from_slices(state, b):
    dims = state.dims
    n = len(dims)
    a = _complement(b, n)
    db = prod(dims[q] for q in b)
    da = prod(dims[q] for q in a) if a else 1
    order = a + b + [n + q for q in a] + [n + q for q in b]
    shape = tuple(dims) + tuple(dims)
    re = state.matrix.re.reshape(shape).transpose(order).reshape(da, db, da, db)
    im = state.matrix.im.reshape(shape).transpose(order).reshape(da, db, da, db)
    span = SpanBuilder(db * db)
    mats = []
    for r in range(da):
        for s in range(da):
            R = ExactMatrix(re[r, :, s, :].copy(), im[r, :, s, :].copy(), state.matrix.den)
            if R.is_zero():
                continue
            flat = [R[i, j] for i in range(db) for j in range(db)]
            if span.add(flat):
                mats.append(R)
    herm = []
    for R in mats:
        herm.append(R + R.dagger())
        herm.append((R - R.dagger()).scale(GaussianRational(0, 1)))
    for i, A in enumerate(herm):
        for B in herm[i + 1:]:
            if A @ B != B @ A:
                raise NotQuantumClassical("subsystem slices do not commute")
    blocks = [ExactMatrix.identity(db)]
    for H in herm:
        if H.is_zero():
            continue
        eig = [g.projector for g in spectral_groups(H)]
        blocks = [P @ E for P in blocks for E in eig if not (P @ E).is_zero()]
    out = []
    for P in blocks:
        r = int(P.trace().real)
        if not is_subsystem_eigenprojector(state, b, P):
            raise NotQuantumClassical("refined block is not a subsystem eigenprojector")
        out.append(Frase(P, r, sove_of(state, b, P, check=False)))
    return _merge_equal(out)


def _merge_equal(frases: list[Frase]) -> list[Frase]:
    groups: dict[tuple, Frase] = {}
    for f in frases:
        k = f.sove.key()
        if k in groups:
            g = groups[k]
            groups[k] = Frase(g.projector + f.projector, g.rank + f.rank, f.sove)
        else:
            groups[k] = f
    return list(groups.values())


def shuffled_decompose(state: DenseState, b: Sequence[int], basis, rng: random.Random) -> list[Frase]:
    n = prod(len(p) for p in basis)
    order = list(range(n))
    rng.shuffle(order)
    return frase_decompose(state, b, basis, search_order=order)
