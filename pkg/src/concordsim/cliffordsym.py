"""Symmetry tests for diagonal product states under classical reversible circuits.

Pauli products are propagated through NOT/CNOT/SWAP circuits exactly (phases
included), so whether S rho S^dagger = rho can be decided from the N
single-qubit Z expectations alone.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

__all__ = [
    "PauliProduct",
    "ReversibleCircuit",
    "DiagonalProductState",
    "PropagationCounter",
    "propagate_pauli",
    "diagonal_expectation",
    "symmetry_test",
    "permutation_word",
    "diagnose_degeneracy12",
    "SupportTooLarge",
]


class SupportTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class PauliProduct:
    """i^phase * prod_j X_j^x_j Z_j^z_j (X factor written left of Z on each qubit)."""

    phase: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def z_on(cls, j: int, n: int) -> "PauliProduct":
        return cls(0, (0,) * n, tuple(1 if k == j else 0 for k in range(n)))

    @classmethod
    def parse(cls, text: str) -> "PauliProduct":
        """e.g. '-ZIZ' or '+XZ' (Y is i X Z)."""
        sign = 0
        if text[0] in "+-":
            sign = 0 if text[0] == "+" else 2
            text = text[1:]
        x, z = [], []
        for c in text:
            x.append(1 if c in "XY" else 0)
            z.append(1 if c in "ZY" else 0)
            if c == "Y":
                sign += 1
        return cls(sign, tuple(x), tuple(z))

    @property
    def n(self) -> int:
        return len(self.x)

    def __str__(self):
        sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
        return sign + "".join("I" if (a, b) == (0, 0) else "X" if (a, b) == (1, 0) else "Z" if (a, b) == (0, 1) else "(XZ)"
                              for a, b in zip(self.x, self.z))


@dataclass(frozen=True)
class ReversibleCircuit:
    """Gates ("NOT", (j,)), ("CNOT", (control, target)), ("SWAP", (a, b)), applied in order."""

    gates: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        gs = tuple((str(k), tuple(q)) for k, q in self.gates)
        for kind, q in gs:
            if kind not in ("NOT", "CNOT", "SWAP") or len(q) != (1 if kind == "NOT" else 2):
                raise ValueError(f"unsupported gate {kind}{q}")
            if len(set(q)) != len(q):
                raise ValueError(f"repeated qubit in {kind}{q}")
        object.__setattr__(self, "gates", gs)

    def __add__(self, other: "ReversibleCircuit") -> "ReversibleCircuit":
        return ReversibleCircuit(self.gates + other.gates)

    def inverse(self) -> "ReversibleCircuit":
        return ReversibleCircuit(tuple(reversed(self.gates)))

    def relabel(self, qubits: Sequence[int]) -> "ReversibleCircuit":
        return ReversibleCircuit(tuple((k, tuple(qubits[i] for i in q)) for k, q in self.gates))

    def apply(self, bits: Sequence[int]) -> tuple[int, ...]:
        b = list(bits)
        for kind, q in self.gates:
            if kind == "NOT":
                b[q[0]] ^= 1
            elif kind == "CNOT":
                b[q[1]] ^= b[q[0]]
            else:
                b[q[0]], b[q[1]] = b[q[1]], b[q[0]]
        return tuple(b)


@dataclass(frozen=True)
class DiagonalProductState:
    """tensor_j (I + q_j Z)/2."""

    q: tuple[Fraction, ...]

    def __post_init__(self):
        qs = tuple(Fraction(v) for v in self.q)
        if any(abs(v) > 1 for v in qs):
            raise ValueError("each q_j must lie in [-1, 1]")
        object.__setattr__(self, "q", qs)

    @classmethod
    def from_probs(cls, probs: Sequence[Sequence]) -> "DiagonalProductState":
        return cls(tuple(Fraction(p[0]) - Fraction(p[1]) for p in probs))

    def probability(self, bits: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for qj, b in zip(self.q, bits):
            out *= (1 + qj) / 2 if b == 0 else (1 - qj) / 2
        return out


@dataclass
class PropagationCounter:
    count: int = 0


def propagate_pauli(circuit: ReversibleCircuit, p: PauliProduct, counter: PropagationCounter | None = None) -> PauliProduct:
    """S^dagger p S for the circuit unitary S (gates conjugated last to first)."""
    if counter is not None:
        counter.count += 1
    phase, x, z = p.phase, list(p.x), list(p.z)
    for kind, q in reversed(circuit.gates):
        if kind == "NOT":
            j = q[0]
            if z[j]:
                phase += 2
        elif kind == "CNOT":
            c, t = q
            x[t] ^= x[c]
            z[c] ^= z[t]
        else:
            a, b = q
            x[a], x[b] = x[b], x[a]
            z[a], z[b] = z[b], z[a]
    return PauliProduct(phase, tuple(x), tuple(z))


def diagonal_expectation(state: DiagonalProductState, p: PauliProduct) -> Fraction:
    if any(p.x):
        return Fraction(0)
    value = Fraction(1)
    for qj, zj in zip(state.q, p.z):
        if zj:
            value *= qj
    if p.phase % 2:
        if value != 0:
            raise ValueError("imaginary expectation: the Pauli product is not Hermitian")
        return Fraction(0)
    return value if p.phase == 0 else -value


def symmetry_test(state: DiagonalProductState, s: ReversibleCircuit, counter: PropagationCounter | None = None) -> bool:
    """S rho S^dagger == rho, decided from <Z_j> before and after S (2N propagations)."""
    n = len(state.q)
    empty = ReversibleCircuit()
    ok = True
    for j in range(n):
        zj = PauliProduct.z_on(j, n)
        after = diagonal_expectation(state, propagate_pauli(s, zj, counter))
        before = diagonal_expectation(state, propagate_pauli(empty, zj, counter))
        ok = ok and after == before
    return ok


_WORD_CACHE: dict[int, dict[tuple, ReversibleCircuit]] = {}


def _words(k: int) -> dict[tuple, ReversibleCircuit]:
    """Shortest NOT/CNOT/SWAP word for every permutation of k-bit strings (k <= 2)."""
    if k in _WORD_CACHE:
        return _WORD_CACHE[k]
    gens = [("NOT", (j,)) for j in range(k)]
    if k == 2:
        gens += [("CNOT", (0, 1)), ("CNOT", (1, 0)), ("SWAP", (0, 1))]
    strings = list(product((0, 1), repeat=k))
    start = tuple(strings)
    seen = {start: ReversibleCircuit()}
    queue = deque([start])
    while queue:
        images = queue.popleft()
        word = seen[images]
        for g in gens:
            w = ReversibleCircuit(word.gates + (g,))
            nxt = tuple(w.apply(s) for s in strings)
            if nxt not in seen:
                seen[nxt] = w
                queue.append(nxt)
    table = {imgs: w for imgs, w in seen.items()}
    _WORD_CACHE[k] = table
    return table


def permutation_word(mapping: dict, k: int) -> ReversibleCircuit:
    """NOT/CNOT/SWAP word on qubits 0..k-1 realizing a permutation of k-bit strings."""
    if k > 2:
        raise SupportTooLarge("words are tabulated for at most two qubits")
    strings = list(product((0, 1), repeat=k))
    images = tuple(tuple(mapping.get(s, s)) for s in strings)
    return _words(k)[images]


def diagnose_degeneracy12(state: DiagonalProductState, history: ReversibleCircuit, b: Sequence[int],
                          counter: PropagationCounter | None = None) -> list[frozenset]:
    """FRASE blocks of b's basis strings for the state history * rho * history^dagger.

    Every permutation P of b's strings (all affine for one or two qubits) is
    tested as a symmetry; the blocks are the orbits of the accepted ones.
    """
    b = list(b)
    if len(b) > 2:
        raise SupportTooLarge(f"support {b} has more than two qubits")
    k = len(b)
    strings = list(product((0, 1), repeat=k))
    parent = {s: s for s in strings}

    def find(s):
        while parent[s] != s:
            s = parent[s]
        return s

    for images in permutations(strings):
        mapping = dict(zip(strings, images))
        if all(mapping[s] == s for s in strings):
            continue
        word = permutation_word(mapping, k).relabel(b)
        test = history + word + history.inverse()
        if symmetry_test(state, test, counter):
            for s in strings:
                ra, rb = find(s), find(mapping[s])
                if ra != rb:
                    parent[ra] = rb
    blocks: dict[tuple, set] = {}
    for s in strings:
        blocks.setdefault(find(s), set()).add(s)
    return sorted((frozenset(v) for v in blocks.values()), key=lambda f: min(f))
