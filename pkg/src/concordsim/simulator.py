"""Whole-circuit update rules and the statistics drawn from them.

An update rule records, per gate, the permutation D_t of local dit strings and
the new local basis on the gate's support. Trajectories only need the
permutations and the final basis: draw s_in from the initial product
distribution, push it through every D_t, then sample each measured qudit from
the overlap of its measurement basis with the final basis projector of its dit.
"""
from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from math import lcm, prod
from typing import Sequence

from .circuit import (
    Circuit, InitialState, LocalBasis, PermutationGate, _matrix_to_json, dit_strings, format_dits, to_index,
)
from .cliffordsym import DiagonalProductState, ReversibleCircuit, diagnose_degeneracy12, permutation_word
from .errors import PromiseViolation, ResourceLimit
from .exactnum import ExactMatrix, format_rational
from .lbf import Incompatible, LbfConfig, LbfInput, LbfSuccess, run_lbf
from .measure import MeasurementSpec

__all__ = [
    "RuleStep",
    "UpdateRule",
    "HeraldedFailure",
    "Trajectory",
    "SampleReport",
    "SimulatorConfig",
    "build_update_rule",
    "clifford12_eligible",
    "sample_dits",
    "sample_trajectory",
    "measure_probabilities",
    "run_shots",
    "exact_marginals",
    "initial_distribution",
    "transport",
    "dump_rule",
    "TooLarge",
]


class TooLarge(ResourceLimit):
    pass


@dataclass(frozen=True)
class SimulatorConfig:
    strategy: str = "auto"               # lbf | clifford12 | auto
    lbf: LbfConfig = LbfConfig()
    enumeration_cap: int = 2**20         # initial strings enumerated by exact_marginals
    chunk: int = 4096                    # shots per independently seeded chunk
    threads: int = 1


@dataclass(frozen=True, eq=False)
class RuleStep:
    t: int
    support: tuple[int, ...]
    permutation: PermutationGate
    new_basis: tuple[tuple[ExactMatrix, ...], ...] | None
    strategy: str = "lbf"

    def table(self) -> dict[tuple, tuple]:
        return self.permutation.mapping


@dataclass(frozen=True, eq=False)
class UpdateRule:
    dims: tuple[int, ...]
    steps: tuple[RuleStep, ...]
    final_basis: LocalBasis

    def stripped(self) -> "UpdateRule":
        """The same rule without intermediate bases."""
        return UpdateRule(self.dims, tuple(replace(s, new_basis=None) for s in self.steps), self.final_basis)

    def is_success(self) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class HeraldedFailure:
    step: int
    witness: Incompatible
    partial: UpdateRule

    @property
    def message(self) -> str:
        return self.witness.message

    def is_success(self) -> bool:
        return False


@dataclass(frozen=True)
class Trajectory:
    s_in: tuple[int, ...]
    s_out: tuple[int, ...]


@dataclass(frozen=True)
class SampleReport:
    shots: int
    counts: dict[str, int]
    seed: int
    exact: dict[str, Fraction] | None = None

    def to_json(self) -> dict:
        out = {"shots": self.shots, "seed": self.seed, "counts": dict(sorted(self.counts.items()))}
        if self.exact is not None:
            out["exact"] = {k: format_rational(v) for k, v in sorted(self.exact.items())}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"


# rule construction -------------------------------------------------------------------


def clifford12_eligible(circuit: Circuit) -> bool:
    return all(d == 2 for d in circuit.dims) and all(len(g.support) <= 2 for g in circuit.gates)


def _identity_step(t, support, basis):
    strings = dit_strings([len(basis.per_qudit[j]) for j in support])
    return RuleStep(t, tuple(support), PermutationGate(tuple(support), {s: s for s in strings}),
                    tuple(basis.per_qudit[j] for j in support), "clifford12")


def _clifford12_step(t, gate, basis, state, history, config):
    support = gate.support
    blocks = diagnose_degeneracy12(state, history, support)
    if len(blocks) == 1:
        # the state is I (x) SOVE on the support: any basis stays diagonal
        return _identity_step(t, support, basis)
    dims = [2] * len(support)
    subsets = [frozenset(to_index(s, dims) for s in blk) for blk in blocks]
    inp = LbfInput.from_projectors(gate, [basis.per_qudit[j] for j in support])
    return run_lbf(inp, config.lbf, step=t, candidates=subsets)


def build_update_rule(circuit: Circuit, config: SimulatorConfig = SimulatorConfig()) -> UpdateRule | HeraldedFailure:
    """Thread the local basis through every gate.

    lbf uses the state-independent local-basis finder; clifford12 restricts the
    candidates to the state's actual FRASE blocks found by symmetry testing
    (qubits, gates on at most two qubits); auto runs the finder and falls back
    to clifford12 for a step only when the finder finds no complete candidate
    and the circuit is eligible.
    """
    strategy = config.strategy
    if strategy not in ("lbf", "clifford12", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    eligible = clifford12_eligible(circuit)
    if strategy == "clifford12" and not eligible:
        raise ValueError("clifford12 needs an all-qubit register and gates on at most two qubits")
    basis = circuit.initial.basis
    state = DiagonalProductState.from_probs(circuit.initial.probs) if eligible else None
    history = ReversibleCircuit()
    steps: list[RuleStep] = []
    for t, gate in enumerate(circuit.gates):
        used = strategy
        if strategy == "clifford12":
            out = _clifford12_step(t, gate, basis, state, history, config)
        else:
            inp = LbfInput.from_projectors(gate, [basis.per_qudit[j] for j in gate.support])
            try:
                out = run_lbf(inp, config.lbf, step=t)
                used = "lbf"
            except PromiseViolation:
                if strategy != "auto" or not eligible:
                    raise
                out = _clifford12_step(t, gate, basis, state, history, config)
                used = "clifford12"
        if isinstance(out, Incompatible):
            return HeraldedFailure(t, out, UpdateRule(circuit.dims, tuple(steps), basis))
        if isinstance(out, LbfSuccess):
            step = RuleStep(t, gate.support, out.permutation, out.basis, used)
        else:
            step = out
        steps.append(step)
        basis = basis.replace({j: step.new_basis[k] for k, j in enumerate(gate.support)})
        if eligible:
            history = history + permutation_word(step.permutation.mapping, len(gate.support)).relabel(gate.support)
    return UpdateRule(circuit.dims, tuple(steps), basis)


# transport and sampling -------------------------------------------------------------


def transport(rule: UpdateRule, s: Sequence[int]) -> tuple[int, ...]:
    """Apply D_1, ..., D_T in temporal order."""
    s = list(s)
    for step in rule.steps:
        sub = tuple(s[j] for j in step.support)
        img = step.permutation.mapping.get(sub, sub)
        for j, v in zip(step.support, img):
            s[j] = v
    return tuple(s)


class _ExactSampler:
    """Draws an index with exact rational probabilities from uniform random bits.

    A uniform u in [0, 1) is revealed 32 bits at a time as a dyadic interval;
    drawing stops as soon as the interval lies inside one cumulative bin.
    """

    def __init__(self, probs: Sequence[Fraction]):
        den = lcm(*(Fraction(p).denominator for p in probs)) if probs else 1
        self.den = den
        cum, acc = [], 0
        for p in probs:
            acc += int(Fraction(p) * den)
            cum.append(acc)
        if acc != den:
            raise ValueError("probabilities must sum to 1")
        self.cum = cum
        self.support = [k for k, p in enumerate(probs) if p]

    def draw(self, rng: random.Random) -> int:
        if len(self.support) == 1:
            return self.support[0]
        num, bits = 0, 0
        while True:
            num = (num << 32) | rng.getrandbits(32)
            bits += 32
            # u in [num, num + 1) / 2^bits ; bin k holds [cum[k-1], cum[k]) / den
            lo, hi = num * self.den, (num + 1) * self.den
            for k, c in enumerate(self.cum):
                if lo < (c << bits):
                    if hi <= (c << bits):
                        return k
                    break


def sample_dits(probs: Sequence[Sequence[Fraction]], rng: random.Random) -> tuple[int, ...]:
    return tuple(_ExactSampler(ps).draw(rng) for ps in probs)


def sample_trajectory(rule: UpdateRule, init: InitialState, rng: random.Random) -> Trajectory:
    s_in = sample_dits(init.probs, rng)
    return Trajectory(s_in, transport(rule, s_in))


class _Overlaps:
    """Cached Tr(B_o F_x) for measurement projector B_o and final-basis projector F_x."""

    def __init__(self, rule: UpdateRule, spec: MeasurementSpec):
        self.table = {}
        for q, projs in spec.targets:
            for x, F in enumerate(rule.final_basis.per_qudit[q]):
                dist = []
                for B in projs:
                    v = (B @ F).trace()
                    if not v.is_real():
                        raise ArithmeticError("non-real measurement probability")
                    dist.append(v.real)
                self.table[(q, x)] = dist
        self.samplers = {k: _ExactSampler(v) for k, v in self.table.items()}


def measure_probabilities(rule: UpdateRule, s_out: Sequence[int], spec: MeasurementSpec,
                          _cache: _Overlaps | None = None) -> list[list[Fraction]]:
    """Per target, the exact outcome distribution given the final dit string."""
    ov = _cache or _Overlaps(rule, spec)
    return [list(ov.table[(q, s_out[q])]) for q in spec.qudits]


def _run_chunk(rule, init, spec, ov, seed, index, n):
    rng = random.Random(f"{seed}/{index}")
    counts: dict[str, int] = {}
    samplers = [_ExactSampler(ps) for ps in init.probs]
    qs = spec.qudits
    for _ in range(n):
        s_out = transport(rule, [smp.draw(rng) for smp in samplers])
        key = format_dits([ov.samplers[(q, s_out[q])].draw(rng) for q in qs])
        counts[key] = counts.get(key, 0) + 1
    return counts


def run_shots(circuit: Circuit, spec: MeasurementSpec, shots: int, seed: int,
              config: SimulatorConfig = SimulatorConfig(), *, rule: UpdateRule | None = None,
              with_exact: bool = False) -> SampleReport | HeraldedFailure:
    """Seeded, reproducible counts; chunks are seeded independently so the
    result does not depend on the number of threads."""
    if shots < 0:
        raise ValueError("shots must be nonnegative")
    spec.validate(circuit.dims)
    if rule is None:
        rule = build_update_rule(circuit, config)
        if isinstance(rule, HeraldedFailure):
            return rule
    ov = _Overlaps(rule, spec)
    sizes = [min(config.chunk, shots - i) for i in range(0, shots, config.chunk)]
    args = [(rule, circuit.initial, spec, ov, seed, i, n) for i, n in enumerate(sizes)]
    if config.threads > 1 and len(args) > 1:
        with ThreadPoolExecutor(config.threads) as ex:
            parts = list(ex.map(lambda a: _run_chunk(*a), args))
    else:
        parts = [_run_chunk(*a) for a in args]
    counts: dict[str, int] = {}
    for part in parts:
        for k, v in part.items():
            counts[k] = counts.get(k, 0) + v
    exact = exact_marginals(circuit, spec, config, rule=rule) if with_exact else None
    return SampleReport(shots, dict(sorted(counts.items())), seed, exact)


def initial_distribution(init: InitialState, cap: int) -> list[tuple[tuple[int, ...], Fraction]]:
    supports = [[(k, p) for k, p in enumerate(ps) if p] for ps in init.probs]
    if prod(len(s) for s in supports) > cap:
        raise TooLarge(f"{prod(len(s) for s in supports)} initial strings exceed the enumeration cap {cap}")
    out = []
    for combo in product(*supports):
        out.append((tuple(k for k, _ in combo), prod((p for _, p in combo), start=Fraction(1))))
    return out


def exact_marginals(circuit: Circuit, spec: MeasurementSpec, config: SimulatorConfig = SimulatorConfig(), *,
                    rule: UpdateRule | None = None) -> dict[str, Fraction] | HeraldedFailure:
    """Exact joint distribution of the measured qudits, by enumerating initial strings."""
    spec.validate(circuit.dims)
    if rule is None:
        rule = build_update_rule(circuit, config)
        if isinstance(rule, HeraldedFailure):
            return rule
    ov = _Overlaps(rule, spec)
    qs = spec.qudits
    out = {format_dits(o): Fraction(0) for o in product(*(range(len(p)) for _, p in spec.targets))}
    finals: dict[tuple, Fraction] = {}
    for s, p in initial_distribution(circuit.initial, config.enumeration_cap):
        key = tuple(transport(rule, s)[q] for q in qs)
        finals[key] = finals.get(key, 0) + p
    for key, p in finals.items():
        dists = [ov.table[(q, x)] for q, x in zip(qs, key)]
        for o in product(*(range(len(d)) for d in dists)):
            w = prod((d[k] for d, k in zip(dists, o)), start=Fraction(1))
            if w:
                out[format_dits(o)] += p * w
    return out


# text dump --------------------------------------------------------------------------


def dump_rule(rule: UpdateRule) -> str:
    """One line per step: support, permutation table and (when kept) the new basis."""
    lines = ["{", f' "dims": {json.dumps(list(rule.dims))},', ' "steps": [']
    body = []
    for s in rule.steps:
        obj = {
            "t": s.t,
            "support": list(s.support),
            "strategy": s.strategy,
            "permutation": {format_dits(k): format_dits(v) for k, v in sorted(s.permutation.mapping.items())},
        }
        if s.new_basis is not None:
            obj["basis"] = [[_matrix_to_json(p) for p in projs] for projs in s.new_basis]
        body.append("  " + json.dumps(obj))
    lines.append(",\n".join(body))
    lines.append(" ],")
    final = [[_matrix_to_json(p) for p in projs] for projs in rule.final_basis.per_qudit]
    lines.append(f' "final_basis": {json.dumps(final)}')
    lines.append("}")
    return "\n".join(line for line in lines if line) + "\n"
