"""Circuit data model: registers, gates, local bases, initial states and the file format.

Dit strings are tuples of ints; qudit 0 is the most significant digit of a
mixed-radix index.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError
from .exactnum import ExactMatrix, GaussianRational, format_rational, parse_rational

__all__ = [
    "QuditRegister",
    "Gate",
    "LocalBasis",
    "InitialState",
    "PermutationGate",
    "Circuit",
    "load_circuit",
    "dump_circuit",
    "conjugate_projector",
    "embed_projector",
    "to_digits",
    "to_index",
    "dit_strings",
    "format_dits",
]


def to_digits(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        index, r = divmod(index, d)
        out.append(r)
    return tuple(reversed(out))


def to_index(digits: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for x, d in zip(digits, dims):
        idx = idx * d + x
    return idx


def dit_strings(dims: Sequence[int]) -> list[tuple[int, ...]]:
    return list(product(*(range(d) for d in dims)))


def format_dits(dits: Sequence[int]) -> str:
    """Concatenated digits; comma separated if any digit exceeds 9."""
    if any(x > 9 for x in dits):
        return ",".join(str(x) for x in dits)
    return "".join(str(x) for x in dits)


@dataclass(frozen=True)
class QuditRegister:
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims:
            raise ValidationError("register non-empty", "no qudits")
        if any(d < 2 for d in self.dims):
            raise ValidationError("qudit dimension >= 2", str(self.dims))

    @property
    def size(self) -> int:
        return len(self.dims)

    @property
    def dimension(self) -> int:
        return prod(self.dims)

    def sub_dims(self, support: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.dims[j] for j in support)


@dataclass(frozen=True, eq=False)
class Gate:
    """G = M / sqrt(radicand) acting on ``support`` (first listed qudit most significant)."""

    support: tuple[int, ...]
    matrix: ExactMatrix
    radicand: int = 1

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(int(j) for j in self.support))
        if len(set(self.support)) != len(self.support) or not self.support:
            raise ValidationError("gate support distinct and non-empty", str(self.support))
        if not isinstance(self.radicand, int) or self.radicand <= 0:
            raise ValidationError("radicand positive integer", str(self.radicand))
        M = self.matrix
        if M.rows != M.cols:
            raise ValidationError("gate matrix square", str(M.shape))
        if M.den != 1:
            raise ValidationError("gate matrix Gaussian-integer", "non-integer entries")
        if M.dagger() @ M != ExactMatrix.identity(M.rows).scale(self.radicand):
            raise ValidationError("gate unitary (M^dagger M = n I)", f"fails for n = {self.radicand}")

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def unitary_entries(self) -> ExactMatrix:
        """M itself; the true gate is this divided by sqrt(radicand)."""
        return self.matrix

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        return self.support == other.support and self.radicand == other.radicand and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.support, self.radicand, self.matrix))


def conjugate_projector(g: Gate, p: ExactMatrix) -> ExactMatrix:
    """G p G^dagger = M p M^dagger / n, exactly rational."""
    if p.shape != (g.dim, g.dim):
        raise ValueError(f"projector shape {p.shape} does not match gate dimension {g.dim}")
    M = g.matrix
    return (M @ p @ M.dagger()).scale(Fraction(1, g.radicand))


def _check_local_projectors(j: int, d: int, projs: Sequence[ExactMatrix]) -> None:
    if len(projs) != d:
        raise ValidationError("local basis complete", f"qudit {j} has {len(projs)} projectors, needs {d}")
    total = ExactMatrix.zeros(d)
    for k, p in enumerate(projs):
        if p.shape != (d, d):
            raise ValidationError("local projector shape", f"qudit {j} projector {k}")
        if not p.is_hermitian():
            raise ValidationError("local projector Hermitian", f"qudit {j} projector {k}")
        if p @ p != p:
            raise ValidationError("local projector idempotent", f"qudit {j} projector {k}")
        if p.trace() != 1:
            raise ValidationError("local projector rank one", f"qudit {j} projector {k}")
        total = total + p
    for a in range(d):
        for b in range(a + 1, d):
            if not (projs[a] @ projs[b]).is_zero():
                raise ValidationError("local projectors orthogonal", f"qudit {j} projectors {a},{b}")
    if total != ExactMatrix.identity(d):
        raise ValidationError("local projectors sum to identity", f"qudit {j}")


@dataclass(frozen=True, eq=False)
class LocalBasis:
    """Per-qudit complete ordered sets of rank-1 projectors."""

    per_qudit: tuple[tuple[ExactMatrix, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "per_qudit", tuple(tuple(p) for p in self.per_qudit))

    def validate(self, dims: Sequence[int]) -> None:
        if len(self.per_qudit) != len(dims):
            raise ValidationError("local basis covers register", f"{len(self.per_qudit)} vs {len(dims)} qudits")
        for j, (d, projs) in enumerate(zip(dims, self.per_qudit)):
            _check_local_projectors(j, d, projs)

    @classmethod
    def computational(cls, dims: Sequence[int]) -> "LocalBasis":
        out = []
        for d in dims:
            projs = []
            for k in range(d):
                m = ExactMatrix.zeros(d)
                m.re[k, k] = 1
                projs.append(m)
            out.append(tuple(projs))
        return cls(tuple(out))

    def vectors(self, j: int) -> list[ExactMatrix]:
        """Column vectors spanning each projector of qudit j (not normalized)."""
        return [p.rank_one_vector() for p in self.per_qudit[j]]

    def replace(self, updates: dict[int, Sequence[ExactMatrix]]) -> "LocalBasis":
        return LocalBasis(tuple(tuple(updates[j]) if j in updates else ps for j, ps in enumerate(self.per_qudit)))

    def __eq__(self, other):
        if not isinstance(other, LocalBasis):
            return NotImplemented
        return self.per_qudit == other.per_qudit

    def __hash__(self):
        return hash(self.per_qudit)


def embed_projector(basis: LocalBasis, support: Sequence[int], dits) -> ExactMatrix:
    """Tensor product of the selected per-qudit projectors on ``support``.

    ``dits`` is one dit string (tuple of ints or digit text) or an iterable of
    them, in which case the products are summed.
    """
    if isinstance(dits, str) or (dits and isinstance(next(iter(dits)), int)):
        selection = [dits]
    else:
        selection = list(dits)
    total = None
    for s in selection:
        digits = tuple(int(c) for c in s) if isinstance(s, str) else tuple(s)
        if len(digits) != len(support):
            raise IndexError(f"dit string {s!r} does not match support of size {len(support)}")
        mats = []
        for j, x in zip(support, digits):
            projs = basis.per_qudit[j]
            if not 0 <= x < len(projs):
                raise IndexError(f"dit {x} out of range for qudit {j}")
            mats.append(projs[x])
        term = ExactMatrix.kron_all(mats)
        total = term if total is None else total + term
    if total is None:
        d = prod(basis.per_qudit[j][0].rows for j in support)
        return ExactMatrix.zeros(d)
    return total


@dataclass(frozen=True, eq=False)
class InitialState:
    basis: LocalBasis
    probs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(tuple(Fraction(p) for p in ps) for ps in self.probs))

    def validate(self, dims: Sequence[int]) -> None:
        if len(self.probs) != len(dims):
            raise ValidationError("probabilities cover register", f"{len(self.probs)} vs {len(dims)} qudits")
        for j, (d, ps) in enumerate(zip(dims, self.probs)):
            if len(ps) != d:
                raise ValidationError("probability vector length", f"qudit {j}")
            if any(p < 0 for p in ps):
                raise ValidationError("probabilities nonnegative", f"qudit {j}")
            if sum(ps) != 1:
                raise ValidationError("probabilities normalized", f"qudit {j} sums to {sum(ps)}")
        self.basis.validate(dims)

    def __eq__(self, other):
        if not isinstance(other, InitialState):
            return NotImplemented
        return self.probs == other.probs and self.basis == other.basis


@dataclass(frozen=True)
class PermutationGate:
    support: tuple[int, ...]
    mapping: dict

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        images = set(self.mapping.values())
        if len(images) != len(self.mapping) or images != set(self.mapping):
            raise ValidationError("permutation is a bijection", f"on support {self.support}")

    def __call__(self, dits: tuple) -> tuple:
        return self.mapping.get(dits, dits)

    def __hash__(self):
        return hash((self.support, tuple(sorted(self.mapping.items()))))


@dataclass(frozen=True, eq=False)
class Circuit:
    register: QuditRegister
    initial: InitialState
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def validate(self) -> "Circuit":
        dims = self.register.dims
        self.initial.validate(dims)
        for t, g in enumerate(self.gates):
            if any(not 0 <= j < len(dims) for j in g.support):
                raise ValidationError("gate support within register", f"gate {t}: {g.support}")
            d = prod(dims[j] for j in g.support)
            if g.dim != d:
                raise ValidationError("gate dimension matches support", f"gate {t}: {g.dim} vs {d}")
        return self

    @property
    def dims(self) -> tuple[int, ...]:
        return self.register.dims

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.register == other.register and self.initial == other.initial and self.gates == other.gates

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.register, self.initial, tuple(gates))


# serialization -----------------------------------------------------------------------


def _matrix_to_json(m: ExactMatrix) -> list[list[str]]:
    return [[m[i, j].format() for j in range(m.cols)] for i in range(m.rows)]


def _matrix_from_json(obj, where: str) -> ExactMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError(f"{where}: expected a non-empty list of rows")
    try:
        rows = [[GaussianRational.parse(_expect_str(v, where)) for v in r] for r in obj]
        return ExactMatrix.from_rows(rows)
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"{where}: {e}") from None


def _expect_str(v, where: str) -> str:
    if not isinstance(v, str):
        raise ParseError(f"{where}: scalars must be strings, got {type(v).__name__}")
    return v


def _keys(obj, expected: list[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    keys = list(obj)
    unknown = [k for k in keys if k not in expected]
    if unknown:
        raise ParseError(f"{where}: unknown field(s) {unknown}")
    if keys != expected:
        raise ParseError(f"{where}: fields must be {expected} in that order, got {keys}")


def _pairs_hook(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise ParseError(f"duplicate field {k!r}")
        seen[k] = v
    return seen


def circuit_to_json(c: Circuit) -> dict:
    return {
        "dims": list(c.register.dims),
        "initial": {
            "probs": [[format_rational(p) for p in ps] for ps in c.initial.probs],
            "basis": [[_matrix_to_json(p) for p in projs] for projs in c.initial.basis.per_qudit],
        },
        "gates": [
            {"support": list(g.support), "radicand": g.radicand, "matrix": _matrix_to_json(g.matrix)} for g in c.gates
        ],
    }


def dump_circuit(c: Circuit) -> str:
    """Canonical text: one line per section and per gate."""
    obj = circuit_to_json(c)
    gates = "[" + ",".join("\n  " + json.dumps(g) for g in obj["gates"]) + ("\n ]" if obj["gates"] else "]")
    return (
        "{\n"
        f' "dims": {json.dumps(obj["dims"])},\n'
        f' "initial": {json.dumps(obj["initial"])},\n'
        f' "gates": {gates}\n'
        "}\n"
    )


def load_circuit(document: str) -> Circuit:
    """Parse and fully validate a circuit document."""
    try:
        obj = json.loads(document, object_pairs_hook=_pairs_hook)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    return circuit_from_json(obj)


def circuit_from_json(obj) -> Circuit:
    _keys(obj, ["dims", "initial", "gates"], "document")
    dims = obj["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise ParseError("dims: expected a list of integers")
    register = QuditRegister(tuple(dims))
    init = obj["initial"]
    _keys(init, ["probs", "basis"], "initial")
    if not isinstance(init["probs"], list) or not all(isinstance(ps, list) for ps in init["probs"]):
        raise ParseError("initial.probs: expected a list of lists")
    try:
        probs = tuple(tuple(parse_rational(_expect_str(p, "initial.probs")) for p in ps) for ps in init["probs"])
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"initial.probs: {e}") from None
    if not isinstance(init["basis"], list) or not all(isinstance(b, list) for b in init["basis"]):
        raise ParseError("initial.basis: expected a list of projector lists")
    basis = LocalBasis(
        tuple(
            tuple(_matrix_from_json(p, f"initial.basis[{j}][{k}]") for k, p in enumerate(projs))
            for j, projs in enumerate(init["basis"])
        )
    )
    if not isinstance(obj["gates"], list):
        raise ParseError("gates: expected a list")
    gates = []
    for t, g in enumerate(obj["gates"]):
        _keys(g, ["support", "radicand", "matrix"], f"gates[{t}]")
        sup, rad = g["support"], g["radicand"]
        if not isinstance(sup, list) or not all(isinstance(j, int) and not isinstance(j, bool) for j in sup):
            raise ParseError(f"gates[{t}].support: expected a list of integers")
        if not isinstance(rad, int) or isinstance(rad, bool):
            raise ParseError(f"gates[{t}].radicand: expected an integer")
        gates.append(Gate(tuple(sup), _matrix_from_json(g["matrix"], f"gates[{t}].matrix"), rad))
    return Circuit(register, InitialState(basis, probs), tuple(gates)).validate()
