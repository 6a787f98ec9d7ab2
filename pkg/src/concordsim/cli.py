"""Command-line front end.

Exit codes: 0 success, 1 malformed or invalid input, 2 heralded local-basis
ambiguity, 3 concordance promise violated, 4 dense verification mismatch,
5 a configured size cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from .circuit import Circuit, _matrix_to_json, dump_circuit, format_dits, load_circuit
from .errors import ParseError, PromiseViolation, ResourceLimit
from .exactnum import format_rational
from .lbf import Incompatible, LbfConfig, LbfInput, run_lbf
from .measure import MeasurementSpec, parse_measure_spec
from .oracle import DEFAULT_DENSE_CAP, check_concordant, dense_marginals, run_dense
from .simulator import (
    HeraldedFailure, SimulatorConfig, UpdateRule, build_update_rule, dump_rule, exact_marginals, run_shots,
)

EXIT_OK, EXIT_INPUT, EXIT_HERALD, EXIT_PROMISE, EXIT_MISMATCH, EXIT_LIMIT = 0, 1, 2, 3, 4, 5


def _read_circuit(path: str) -> Circuit:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read circuit: {e}") from None
    return load_circuit(text)


def _config(args) -> SimulatorConfig:
    return SimulatorConfig(strategy=args.strategy, lbf=LbfConfig(seed=args.lbf_seed),
                           threads=getattr(args, "threads", 1))


def _rule_or_herald(circuit: Circuit, args) -> UpdateRule:
    out = build_update_rule(circuit, _config(args))
    if isinstance(out, HeraldedFailure):
        raise _Herald(out.witness)
    return out


class _Herald(Exception):
    def __init__(self, witness: Incompatible):
        super().__init__(witness.message)
        self.witness = witness


def _spec(args, circuit: Circuit) -> MeasurementSpec:
    if args.measure is None:
        return MeasurementSpec.computational(range(len(circuit.dims)), circuit.dims)
    return parse_measure_spec(args.measure, circuit.dims)


def _dist_json(dist) -> str:
    return json.dumps({k: format_rational(v) for k, v in sorted(dist.items())}, indent=1) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# subcommands -----------------------------------------------------------------------


def cmd_simulate(args) -> int:
    circuit = _read_circuit(args.circuit)
    spec = _spec(args, circuit)
    rule = _rule_or_herald(circuit, args)
    report = run_shots(circuit, spec, args.shots, args.seed, _config(args), rule=rule, with_exact=args.exact)
    _write(report.dumps(), args.output)
    return EXIT_OK


def cmd_update_rule(args) -> int:
    circuit = _read_circuit(args.circuit)
    rule = _rule_or_herald(circuit, args)
    _write(dump_rule(rule), args.output)
    return EXIT_OK


def cmd_marginals(args) -> int:
    circuit = _read_circuit(args.circuit)
    spec = _spec(args, circuit)
    rule = _rule_or_herald(circuit, args)
    _write(_dist_json(exact_marginals(circuit, spec, _config(args), rule=rule)), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = _read_circuit(args.circuit)
    spec = _spec(args, circuit)
    rule = _rule_or_herald(circuit, args)
    states = run_dense(circuit, args.dense_cap)
    basis = circuit.initial.basis
    lines = []
    ok = check_concordant(states[0], basis)
    lines.append(f"initial: {'concordant' if ok else 'NOT concordant'}")
    for step, ev in zip(rule.steps, states[1:]):
        basis = basis.replace({j: step.new_basis[k] for k, j in enumerate(step.support)})
        good = check_concordant(ev, basis)
        ok = ok and good
        lines.append(f"step {step.t}: {'concordant' if good else 'NOT concordant'}")
    sim = exact_marginals(circuit, spec, _config(args), rule=rule)
    dense = dense_marginals(states[-1], spec)
    same = sim == dense
    lines.append(f"marginals: {'equal' if same else 'DIFFER'}")
    if not same:
        for k in sorted(dense):
            lines.append(f"  {k}: simulator {format_rational(sim.get(k, 0))} dense {format_rational(dense[k])}")
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok and same else EXIT_MISMATCH


def cmd_lbf(args) -> int:
    circuit = _read_circuit(args.circuit)
    T = args.gate
    if not 0 <= T < len(circuit.gates):
        raise ParseError(f"--gate {T} outside 0..{len(circuit.gates) - 1}")
    prefix = build_update_rule(circuit.with_gates(circuit.gates[:T]), _config(args))
    if isinstance(prefix, HeraldedFailure):
        raise _Herald(prefix.witness)
    gate = circuit.gates[T]
    basis = prefix.final_basis
    inp = LbfInput.from_projectors(gate, [basis.per_qudit[j] for j in gate.support])
    out = run_lbf(inp, LbfConfig(seed=args.lbf_seed), step=T)
    if isinstance(out, Incompatible):
        obj = {"step": T, "support": list(gate.support), "status": "incompatible", "herald": out.message,
               "candidate": out.candidate, "other": out.other, "qudit": out.qudit,
               "projector": _matrix_to_json(out.projector)}
        _write(json.dumps(obj, indent=1) + "\n", args.output)
        print(out.message, file=sys.stderr)
        return EXIT_HERALD
    obj = {
        "step": T,
        "support": list(gate.support),
        "status": "success",
        "chi": list(out.chi),
        "unique_bases": [[[_matrix_to_json(p) for p in projs] for projs in b] for b in out.unique_bases],
        "basis": [[_matrix_to_json(p) for p in projs] for projs in out.basis],
        "permutation": {format_dits(k): format_dits(v) for k, v in sorted(out.permutation.mapping.items())},
        "partition": [sorted(format_dits(s) for s in blk) for blk in out.partition_strings()],
    }
    _write(json.dumps(obj, indent=1) + "\n", args.output)
    return EXIT_OK


def _parse_qudits(text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        if "x" in text:
            n, d = text.split("x")
            return (int(d),) * int(n)
        if "," in text:
            return tuple(int(t) for t in text.split(","))
        return (2,) * int(text)
    except ValueError:
        raise ParseError(f"bad --qudits {text!r}: use N, NxD or d1,d2,...") from None


def cmd_gen(args) -> int:
    from .generate import random_concordant_circuit

    dims = _parse_qudits(args.qudits)
    if not dims or any(d < 2 for d in dims):
        raise ParseError(f"bad --qudits {args.qudits!r}")
    rng = random.Random(args.seed)
    circuit = random_concordant_circuit(dims, args.gates, rng, max_support=min(args.max_support, len(dims)))
    _write(dump_circuit(circuit), args.output)
    return EXIT_OK


# parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="concordsim", description="Exact simulation of concordant quantum circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, measure=False):
        sp.add_argument("--circuit", required=True, help="circuit JSON file")
        sp.add_argument("--strategy", choices=["lbf", "clifford12", "auto"], default="auto")
        sp.add_argument("--lbf-seed", type=int, default=0, help="seed for the finder's random instances")
        sp.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        if measure:
            sp.add_argument("--measure", default=None, help="comma separated q:Z or q:FILE (default: all qudits, Z)")

    sp = sub.add_parser("simulate", help="sample measurement outcomes from trajectories")
    common(sp, measure=True)
    sp.add_argument("--shots", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--exact", action="store_true", help="include exact probabilities in the report")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("update-rule", help="dump the per-gate permutations and bases")
    common(sp)
    sp.set_defaults(func=cmd_update_rule)

    sp = sub.add_parser("marginals", help="exact joint distribution of the measured qudits")
    common(sp, measure=True)
    sp.set_defaults(func=cmd_marginals)

    sp = sub.add_parser("verify", help="compare against dense density-matrix evolution")
    common(sp, measure=True)
    sp.add_argument("--dense-cap", type=int, default=DEFAULT_DENSE_CAP)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("lbf", help="run the local-basis finder on one gate")
    common(sp)
    sp.add_argument("--gate", type=int, required=True)
    sp.set_defaults(func=cmd_lbf)

    sp = sub.add_parser("gen", help="synthesize a random concordant circuit")
    sp.add_argument("--qudits", required=True, help="N (qubits), NxD, or d1,d2,...")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--gates", type=int, default=8)
    sp.add_argument("--max-support", type=int, default=2)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "shots", 0) < 0:
        parser.error("--shots must be nonnegative")
    try:
        return args.func(args)
    except _Herald as h:
        print(h.witness.message, file=sys.stderr)
        return EXIT_HERALD
    except PromiseViolation as e:
        print(f"promise violation: {e}", file=sys.stderr)
        return EXIT_PROMISE
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as e:  # ParseError, ValidationError and other invalid input
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
