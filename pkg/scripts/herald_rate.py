"""How often does the local-basis finder herald an ambiguity?

Runs the finder on random planted gates L D B L'^dagger and on locally
dressed copies of the two exceptional gates, and prints a success / herald
table per support shape.

    python scripts/herald_rate.py --gates 40 --seed 3
"""
import argparse
import random
import time
from math import prod

from concordsim.circuit import Gate
from concordsim.exactnum import ExactMatrix
from concordsim.generate import exceptional_gate_1, exceptional_gate_2, random_local_unitary, random_planted_gate
from concordsim.lbf import Incompatible, LbfInput, LbfSuccess, run_lbf
from concordsim.oracle import lbf_relation_holds

SHAPES = [(2,), (3,), (2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 2, 3)]


def dressed(gate, rng):
    L = [random_local_unitary(2, rng) for _ in range(2)]
    Lp = [random_local_unitary(2, rng) for _ in range(2)]
    M = ExactMatrix.kron_all([u.matrix for u in L]) @ gate.matrix @ ExactMatrix.kron_all([u.matrix for u in Lp]).dagger()
    n = gate.radicand * prod(u.radicand for u in L + Lp)
    return Gate(gate.support, M, n), tuple(u.projectors() for u in Lp)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gates", type=int, default=20, help="planted gates per support shape")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    print(f"{'dims':<12}{'gates':>6}{'success':>9}{'herald':>8}{'relation':>10}{'s/gate':>9}")
    for dims in SHAPES:
        ok = herald = relation = 0
        t0 = time.perf_counter()
        for _ in range(args.gates):
            pg, _ = random_planted_gate(dims, rng)
            r = run_lbf(LbfInput.from_projectors(pg.gate, pg.prev_basis))
            if isinstance(r, LbfSuccess):
                ok += 1
                relation += lbf_relation_holds(pg.gate, pg.prev_basis, r)
            elif isinstance(r, Incompatible):
                herald += 1
        dt = (time.perf_counter() - t0) / args.gates
        print(f"{str(dims):<12}{args.gates:>6}{ok:>9}{herald:>8}{relation:>10}{dt:>9.3f}")

    for name, gate in [("G_exc.1", exceptional_gate_1()), ("G_exc.2", exceptional_gate_2())]:
        heralds = 0
        for _ in range(args.gates):
            g, prev = dressed(gate, rng)
            heralds += isinstance(run_lbf(LbfInput.from_projectors(g, prev)), Incompatible)
        print(f"{name:<12}{args.gates:>6}{args.gates - heralds:>9}{heralds:>8}")


if __name__ == "__main__":
    main()
