"""Fixture and random-instance generators with known ground truth.

Every unitary here is M / sqrt(n) with M a Gaussian-integer matrix, so gates,
bases and states stay exactly rational.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .circuit import Circuit, Gate, InitialState, LocalBasis, QuditRegister, dit_strings, to_index
from .exactnum import ExactMatrix, GaussianRational

__all__ = [
    "LocalUnitary",
    "PlantedGate",
    "hadamard",
    "not_gate",
    "cnot",
    "identity_gate",
    "exceptional_gate_1",
    "exceptional_gate_2",
    "plus_minus_basis",
    "random_local_unitary",
    "random_planted_gate",
    "random_concordant_circuit",
    "dqc1_circuit",
    "anf_eval",
    "random_anf",
    "DQC1_FIXTURES",
]

# Gaussian integers of norm 25, used as exact unit phases times 5
_NORM25 = [GaussianRational(a, b) for a, b in
           [(5, 0), (-5, 0), (0, 5), (0, -5), (3, 4), (3, -4), (-3, 4), (-3, -4), (4, 3), (4, -3), (-4, 3), (-4, -3)]]
# pairs (a, b) with |a|^2 + |b|^2 = 25 and b != 0, for 2x2 mixing blocks
_MIX25 = [(GaussianRational(*a), GaussianRational(*b)) for a, b in
          [((3, 0), (4, 0)), ((4, 0), (3, 0)), ((0, 3), (4, 0)), ((3, 0), (0, 4)), ((-4, 0), (3, 0)),
           ((0, 4), (0, 3)), ((3, 0), (-4, 0)), ((0, -3), (4, 0))]]


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """U = M / sqrt(n) on one qudit; its columns are the basis vectors."""

    matrix: ExactMatrix
    radicand: int

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def projectors(self) -> tuple[ExactMatrix, ...]:
        M = self.matrix
        out = []
        for k in range(M.cols):
            v = M.submatrix(range(M.rows), [k])
            out.append((v @ v.dagger()).scale(Fraction(1, self.radicand)))
        return tuple(out)


def _gate(support, rows, n=1) -> Gate:
    return Gate(tuple(support), ExactMatrix.from_rows(rows), n)


def hadamard(q: int = 0) -> Gate:
    return _gate((q,), [[1, 1], [1, -1]], 2)


def not_gate(q: int = 0) -> Gate:
    return _gate((q,), [[0, 1], [1, 0]])


def cnot(c: int = 0, t: int = 1) -> Gate:
    return _gate((c, t), [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def identity_gate(support: Sequence[int], dims: Sequence[int]) -> Gate:
    return Gate(tuple(support), ExactMatrix.identity(prod(dims)))


def exceptional_gate_1(support=(0, 1)) -> Gate:
    """Maps the computational basis to four Bell-type states; heralded by the finder."""
    return _gate(support, [[1, 0, 1, 0], [0, 1, 0, 1], [0, 1, 0, -1], [1, 0, -1, 0]], 2)


def exceptional_gate_2(support=(0, 1)) -> Gate:
    """Controlled rational rotation (3/5, 4/5): a controlled-Hadamard analogue with rational entries."""
    return _gate(support, [[5, 0, 0, 0], [0, 5, 0, 0], [0, 0, 3, -4], [0, 0, 4, 3]], 25)


def plus_minus_basis() -> tuple[ExactMatrix, ExactMatrix]:
    return LocalUnitary(ExactMatrix.from_rows([[1, 1], [1, -1]]), 2).projectors()


def _gauss(rng: random.Random, r: int) -> GaussianRational:
    return GaussianRational(rng.randint(-r, r), rng.randint(-r, r))


def random_local_unitary(d: int, rng: random.Random, r: int = 3) -> LocalUnitary:
    """Generic rational unitary: SU(2)-form for qubits, a Householder reflection otherwise."""
    if d == 2:
        while True:
            a, b = _gauss(rng, r), _gauss(rng, r)
            if a != 0 and b != 0:
                break
        M = ExactMatrix.from_rows([[a, -b.conj()], [b, a.conj()]])
        return LocalUnitary(M, int(a.norm2() + b.norm2()))
    while True:
        v = [_gauss(rng, r) for _ in range(d)]
        if sum(1 for x in v if x != 0) >= 2:
            break
    vec = ExactMatrix.column(v)
    nv = int(sum(x.norm2() for x in v))
    M = ExactMatrix.identity(d).scale(nv) - (vec @ vec.dagger()).scale(2)
    return LocalUnitary(M, nv * nv)


def _kron_unitaries(us: Sequence[LocalUnitary]) -> tuple[ExactMatrix, int]:
    return ExactMatrix.kron_all([u.matrix for u in us]), prod(u.radicand for u in us)


def _perm_matrix(images: Sequence[int]) -> ExactMatrix:
    d = len(images)
    P = ExactMatrix.zeros(d)
    for x, y in enumerate(images):
        P.re[y, x] = 1
    return P


def _hamming(a, b) -> int:
    return sum(1 for u, v in zip(a, b) if u != v)


_UNITS = [GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1)]


def _block_matrix(d: int, pairs: Sequence[tuple[int, int]], rng: random.Random) -> ExactMatrix:
    """5 x (unitary): phases of norm 25 on the diagonal plus 2x2 rotations on ``pairs``."""
    B = ExactMatrix.zeros(d)
    used = set()
    for x, y in pairs:
        a, b = rng.choice(_MIX25)
        ph = rng.choice(_UNITS)
        for (i, j), z in (((x, x), a), ((x, y), -b.conj()), ((y, x), b), ((y, y), a.conj())):
            w = z * ph
            B.re[i, j], B.im[i, j] = w.a, w.b
        used.update((x, y))
    for x in range(d):
        if x not in used:
            z = rng.choice(_NORM25)
            B.re[x, x], B.im[x, x] = z.a, z.b
    return B


@dataclass(frozen=True, eq=False)
class PlantedGate:
    """G = L D B L'^dagger with the ground truth it was built from."""

    gate: Gate
    prev_basis: tuple[tuple[ExactMatrix, ...], ...]  # L' columns as projectors, per support qudit
    new_basis: tuple[tuple[ExactMatrix, ...], ...]   # L columns as projectors
    images: tuple[int, ...]                          # D as index images
    blocks: tuple[frozenset, ...]                    # index sets mixed by B
    dims: tuple[int, ...]


def random_planted_gate(dims: Sequence[int], rng: random.Random, *, allowed: Sequence[frozenset] | None = None,
                        mix_prob: float = 0.5, prev: Sequence[LocalUnitary] | None = None,
                        support: Sequence[int] | None = None) -> tuple[PlantedGate, list[LocalUnitary]]:
    """Random G = L D B L'^dagger.

    B mixes pairs of strings only inside the classes of ``allowed`` (default:
    anything) and only when their D-images differ on at least two qudits, so
    the mixing cannot be absorbed into a single qudit's basis.
    """
    dims = tuple(dims)
    d = prod(dims)
    strings = dit_strings(dims)
    Lp = list(prev) if prev is not None else [random_local_unitary(k, rng) for k in dims]
    L = [random_local_unitary(k, rng) for k in dims]
    images = list(range(d))
    rng.shuffle(images)
    classes = allowed if allowed is not None else [frozenset(range(d))]
    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    for cls in classes:
        members = sorted(cls)
        rng.shuffle(members)
        for x in members:
            if x in used or rng.random() >= mix_prob:
                continue
            for y in members:
                if y != x and y not in used and _hamming(strings[images[x]], strings[images[y]]) >= 2:
                    pairs.append((x, y))
                    used.update((x, y))
                    break
    B = _block_matrix(d, pairs, rng)
    ML, nL = _kron_unitaries(L)
    MLp, nLp = _kron_unitaries(Lp)
    M = ML @ _perm_matrix(images) @ B @ MLp.dagger()
    sup = tuple(support) if support is not None else tuple(range(len(dims)))
    gate = Gate(sup, M, nL * 25 * nLp)
    blocks = tuple(frozenset(p) for p in pairs) + tuple(frozenset([x]) for x in range(d) if x not in used)
    planted = PlantedGate(gate, tuple(u.projectors() for u in Lp), tuple(u.projectors() for u in L), tuple(images),
                          blocks, dims)
    return planted, L


def _sove_classes(table: dict[tuple, Fraction], dims, support) -> list[frozenset]:
    """Support-string index classes with identical conditional profiles over the rest."""
    n = len(dims)
    rest = [j for j in range(n) if j not in support]
    sub = [dims[j] for j in support]
    profiles: dict[int, dict] = {}
    for s, p in table.items():
        x = to_index([s[j] for j in support], sub)
        key = tuple(s[j] for j in rest)
        profiles.setdefault(x, {})[key] = p
    groups: dict[tuple, set] = {}
    for x in range(prod(sub)):
        prof = tuple(sorted((k, v) for k, v in profiles.get(x, {}).items() if v))
        groups.setdefault(prof, set()).add(x)
    return [frozenset(g) for g in groups.values()]


def random_concordant_circuit(dims: Sequence[int], n_gates: int, rng: random.Random, *, max_support: int = 2,
                              mix_prob: float = 0.5, pure_prob: float = 0.3) -> Circuit:
    """A circuit whose state stays diagonal in a tracked product basis after every gate."""
    dims = tuple(dims)
    n = len(dims)
    basis = [random_local_unitary(d, rng) for d in dims]
    first = list(basis)
    probs = []
    for d in dims:
        if rng.random() < pure_prob:
            ps = [Fraction(0)] * d
            ps[rng.randrange(d)] = Fraction(1)
        else:
            w = [rng.randint(0, 4) for _ in range(d)]
            if not any(w):
                w[0] = 1
            ps = [Fraction(x, sum(w)) for x in w]
        probs.append(tuple(ps))
    table = {}
    for s in dit_strings(dims):
        p = prod((probs[j][s[j]] for j in range(n)), start=Fraction(1))
        if p:
            table[s] = p
    gates = []
    for _ in range(n_gates):
        k = rng.randint(1, min(max_support, n))
        support = tuple(rng.sample(range(n), k))
        sub = [dims[j] for j in support]
        allowed = _sove_classes(table, dims, support)
        planted, L = random_planted_gate(sub, rng, allowed=allowed, mix_prob=mix_prob,
                                         prev=[basis[j] for j in support], support=support)
        gates.append(planted.gate)
        strings = dit_strings(sub)
        new_table = {}
        for s, p in table.items():
            x = to_index([s[j] for j in support], sub)
            img = strings[planted.images[x]]
            t = list(s)
            for j, v in zip(support, img):
                t[j] = v
            new_table[tuple(t)] = p
        table = new_table
        for j, u in zip(support, L):
            basis[j] = u
    initial = InitialState(LocalBasis(tuple(u.projectors() for u in first)), tuple(probs))
    return Circuit(QuditRegister(dims), initial, tuple(gates)).validate()


# one-clean-qubit fixtures -----------------------------------------------------------

Anf = tuple[frozenset, ...]  # XOR of monomials; each monomial is a set of variable indices, empty = 1


def anf_eval(anf: Anf, x: Sequence[int]) -> int:
    return sum(all(x[i] for i in m) for m in anf) % 2


def random_anf(n: int, rng: random.Random, terms: int = 5, max_degree: int = 3) -> Anf:
    out = set()
    while len(out) < terms:
        k = rng.randint(0, max_degree)
        out.add(frozenset(rng.sample(range(n), k)))
    return tuple(sorted(out, key=lambda m: (len(m), sorted(m))))


DQC1_FIXTURES: dict[str, Anf] = {
    "chained_products": (frozenset({0, 1}), frozenset({2, 3}), frozenset({3, 4, 5})),
    "inner_product": (frozenset({0, 3}), frozenset({1, 4}), frozenset({2, 5})),
    "mixed_degree": (frozenset(), frozenset({1, 5}), frozenset({3, 4}), frozenset({0, 1, 2})),
}


def dqc1_circuit(n: int, anf: Anf) -> Circuit:
    """Control qubit 0 in |+>, n maximally mixed register qubits, one
    controlled phase flip per monomial; the control ends with <X> equal to the
    average of (-1)^f(x)."""
    dims = (2,) * (n + 1)
    comp = LocalBasis.computational((2,))
    basis = LocalBasis((plus_minus_basis(),) + comp.per_qudit * n)
    probs = ((Fraction(1), Fraction(0)),) + ((Fraction(1, 2), Fraction(1, 2)),) * n
    gates = []
    for m in anf:
        support = (0,) + tuple(1 + i for i in sorted(m))
        diag = [1] * (2 ** len(support))
        diag[-1] = -1
        gates.append(Gate(support, ExactMatrix.diag(diag)))
    return Circuit(QuditRegister(dims), InitialState(basis, probs), tuple(gates)).validate()
