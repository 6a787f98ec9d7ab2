"""Acceptance criteria 1-8. Each test records one PASS/FAIL line, printed again in
the terminal summary of the pytest run."""
import random
import time
from fractions import Fraction
from itertools import product
from math import prod, sqrt

import mpmath
from exactness_guard import float_returns, source_offenders

from concordsim.circuit import Gate, LocalBasis, QuditRegister, conjugate_projector, dit_strings
from concordsim.cliffordsym import DiagonalProductState, PropagationCounter, ReversibleCircuit, symmetry_test
from concordsim.exactnum import AlgebraicNumber, ExactMatrix, GaussianRational, IntPolynomial, bareiss_eliminate, isolate_real_roots
from concordsim.frase import DenseState, frase_decompose, orthogonality_check, shuffled_decompose
from concordsim.generate import (
    DQC1_FIXTURES, anf_eval, dqc1_circuit, exceptional_gate_1, exceptional_gate_2, plus_minus_basis,
    random_concordant_circuit, random_local_unitary, random_planted_gate,
)
from concordsim.lbf import (
    CandidateProjector, Incompatible, LbfInput, LbfSuccess, run_lbf, solve_local_basis, xk_unique_basis,
)
from concordsim.measure import MeasurementSpec
from concordsim.oracle import check_concordant, dense_marginals, lbf_relation_holds, run_dense
from concordsim.simulator import SimulatorConfig, UpdateRule, build_update_rule, exact_marginals, run_shots

P0, P1 = ExactMatrix.diag([1, 0]), ExactMatrix.diag([0, 1])


def run_criterion(verdict, n, title, body):
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as e:  # a crash is a failed criterion, reported like any other
        verdict(n, title, False, f"{type(e).__name__}: {e}")
        raise
    detail = f"{detail}; {time.perf_counter() - t0:.1f} s"
    verdict(n, title, ok, detail)
    assert ok, detail


# 1. exact kernel ------------------------------------------------------------------


def _rank_fractions(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col, ncols = 0, 0, len(m[0])
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def _random_system(rng):
    r, c = rng.randint(1, 12), rng.randint(1, 12)
    k = rng.randint(1, min(r, c))  # planted rank bound: most systems have a null space
    left = [[rng.randint(-5, 5) for _ in range(k)] for _ in range(r)]
    right = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(k)]
    return [[sum(left[i][t] * right[t][j] for t in range(k)) for j in range(c)] for i in range(r)]


def _mp_distinct_real_roots(coeffs):
    """Floating oracle: real roots of an integer polynomial, clustered."""
    mpmath.mp.dps = 80
    roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=500, extraprec=400)
    real = sorted(mpmath.re(z) for z in roots if abs(mpmath.im(z)) < mpmath.mpf(10) ** -12)
    out = []
    for x in real:
        if not out or abs(x - out[-1]) > mpmath.mpf(10) ** -10:
            out.append(x)
    return out


def _random_poly(rng):
    """Coefficients, plus the polynomial handed to the floating oracle: a planted
    double root is given to the oracle once, which keeps its iteration convergent
    without changing the set of distinct real roots."""
    deg = rng.randint(1, 8)
    c = [rng.randint(-12, 12) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    if rng.random() < 0.3:
        p, q = rng.randint(-4, 4), rng.randint(1, 3)
        lin = IntPolynomial((-p, q))
        base = IntPolynomial(tuple(c[: max(1, deg - 2)] + [c[-1]]))
        return (base * lin * lin).coeffs, (base * lin).coeffs
    return tuple(c), tuple(c)


def _quadratic(rng, sqrts):
    n = rng.choice(sorted(sqrts))
    a = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
    b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 6))
    return AlgebraicNumber.rational(a) + AlgebraicNumber.rational(b) * sqrts[n], a + b * mpmath.sqrt(n)


def criterion_1():
    rng = random.Random(101)
    # Bareiss null spaces
    for _ in range(1000):
        A = _random_system(rng)
        res = bareiss_eliminate(A)
        for v in res.nullspace:
            if any(sum(a * x for a, x in zip(row, v)) for row in A):
                return False, "a null vector fails A v = 0"
        if res.rank != _rank_fractions(A) or len(res.nullspace) != len(A[0]) - res.rank:
            return False, "null space dimension disagrees with an independent rank"
    # real roots against a high-precision floating oracle
    for _ in range(500):
        coeffs, oracle_coeffs = _random_poly(rng)
        roots = isolate_real_roots(IntPolynomial(coeffs))
        ref = _mp_distinct_real_roots(oracle_coeffs)
        if len(roots) != len(ref):
            return False, f"root count {len(roots)} vs oracle {len(ref)} for {coeffs}"
        for r, x in zip(roots, ref):
            lo, hi = (r.exact, r.exact) if r.exact is not None else (r.lo, r.hi)
            if not (mpmath.mpf(lo.numerator) / lo.denominator - mpmath.mpf(10) ** -9 <= x
                    <= mpmath.mpf(hi.numerator) / hi.denominator + mpmath.mpf(10) ** -9):
                return False, f"isolating interval misses the oracle root for {coeffs}"
    # field laws on quadratic irrationals
    sqrts = {n: isolate_real_roots(IntPolynomial((-n, 0, 1)))[-1] for n in (2, 3, 5, 6, 7)}
    mpmath.mp.dps = 50
    for _ in range(1000):
        (a, fa), (b, fb), (c, fc) = (_quadratic(rng, sqrts) for _ in range(3))
        checks = [
            (a + b) + c == a + (b + c),
            a * (b * c) == (a * b) * c,
            a * (b + c) == a * b + a * c,
            a + b == b + a and a * b == b * a,
            (a - a) == AlgebraicNumber.rational(0),
            (a * b < c) == (fa * fb < fc),  # order agrees with the floating oracle
        ]
        if not all(checks):
            return False, "a field law failed"
    return True, "1000 systems, 500 polynomials, 1000 triples exact"


def test_criterion_1_exact_kernel(verdict):
    t0 = time.perf_counter()
    run_criterion(verdict, 1, "exact kernel", criterion_1)
    assert time.perf_counter() - t0 < 60


# 2. FRASE uniqueness -------------------------------------------------------------


def _concordant_state(rng):
    n = rng.randint(1, 4)
    dims = tuple(rng.choice([2, 3]) for _ in range(n))
    while len(dims) == 4 and dims.count(3) > 2:
        dims = tuple(rng.choice([2, 3]) for _ in range(n))
    basis = LocalBasis(tuple(random_local_unitary(d, rng).projectors() for d in dims))
    strings = dit_strings(dims)
    w = [rng.choice([0, 1, 1, 2, 3]) for _ in strings]
    if not any(w):
        w[0] = 1
    rho = ExactMatrix.zeros(len(strings))
    for s, x in zip(strings, w):
        if x:
            rho = rho + ExactMatrix.kron_all([basis.per_qudit[j][s[j]] for j in range(n)]).scale(Fraction(x, sum(w)))
    return DenseState(QuditRegister(dims), rho), basis


def criterion_2():
    rng = random.Random(202)
    pairs = 0
    for i in range(200):
        state, basis = _concordant_state(rng)
        n = len(state.dims)
        b = sorted(rng.sample(range(n), rng.randint(1, n)))
        sub = [basis.per_qudit[j] for j in b]
        ref = [f.key() for f in frase_decompose(state, b, sub)]
        for _ in range(3):
            got = shuffled_decompose(state, b, sub, rng)
            if [f.key() for f in got] != ref:
                return False, f"state {i}: decomposition depends on search order"
        fr = frase_decompose(state, b, sub)
        for x in range(len(fr)):
            for y in range(x):
                pairs += 1
                if not orthogonality_check(fr[x], fr[y]):
                    return False, f"state {i}: FRASEs with distinct SOVEs overlap"
    return True, f"200 states, {pairs} FRASE pairs orthogonal"


def test_criterion_2_frase_uniqueness(verdict):
    run_criterion(verdict, 2, "FRASE uniqueness", criterion_2)


# 3. LBF round trip ----------------------------------------------------------------


def _dressed(gate, rng):
    """L G L'^dagger for random single-qudit L, L' on a two-qubit fixture; L' is the input basis."""
    L = [random_local_unitary(2, rng) for _ in range(2)]
    Lp = [random_local_unitary(2, rng) for _ in range(2)]
    ML = ExactMatrix.kron_all([u.matrix for u in L])
    MLp = ExactMatrix.kron_all([u.matrix for u in Lp])
    n = gate.radicand * prod(u.radicand for u in L + Lp)
    return Gate(gate.support, ML @ gate.matrix @ MLp.dagger(), n), tuple(u.projectors() for u in Lp)


def criterion_3():
    rng = random.Random(303)
    sizes = {}
    for i in range(500):
        dims = tuple(rng.choice([2, 3]) for _ in range(rng.randint(1, 3)))
        pg, _ = random_planted_gate(dims, rng)
        r = run_lbf(LbfInput.from_projectors(pg.gate, pg.prev_basis), step=i)
        if not isinstance(r, LbfSuccess):
            return False, f"gate {i} on dims {dims}: {type(r).__name__}"
        if not lbf_relation_holds(pg.gate, pg.prev_basis, r):
            return False, f"gate {i} on dims {dims}: G L X L^dagger G^dagger differs from L' D X D^dagger L'^dagger"
        sizes[len(dims)] = sizes.get(len(dims), 0) + 1
    heralded = 0
    fixtures = [exceptional_gate_1(), exceptional_gate_2()]
    for g in fixtures:
        for k in range(5):
            gate, prev = (g, ((P0, P1), (P0, P1))) if k == 0 else _dressed(g, rng)
            r = run_lbf(LbfInput.from_projectors(gate, prev))
            if not isinstance(r, Incompatible):
                return False, f"exceptional fixture not heralded (variant {k})"
            heralded += 1
    by_size = ", ".join(f"{sizes[k]} on {k} qudit(s)" for k in sorted(sizes))
    return True, f"500 planted gates succeed ({by_size}); heralds only on the {heralded} exceptional fixtures"


def test_criterion_3_lbf_round_trip(verdict):
    run_criterion(verdict, 3, "LBF round trip", criterion_3)


# 4. exceptional-gate regression fixtures ------------------------------------------

PAULI = {
    "I": ExactMatrix.identity(2),
    "X": ExactMatrix.from_rows([[0, 1], [1, 0]]),
    "Y": ExactMatrix.from_rows([[0, GaussianRational(0, -1)], [GaussianRational(0, 1), 0]]),
    "Z": ExactMatrix.diag([1, -1]),
}

# printed expansions (times 4) of G |jk><jk| G^dagger in the two-qubit Pauli basis
EXC1_EXPANSIONS = {
    "00": "I+XX-YY+ZZ",
    "01": "I+XX+YY-ZZ",
    "10": "I-XX+YY+ZZ",
    "11": "I-XX-YY-ZZ",
}


def _expansion(text):
    """'I+XX-YY' -> {'II': 1, 'XX': 1, 'YY': -1}."""
    out = {}
    for tok in text.replace("-", "+-").split("+"):
        sign = -1 if tok.startswith("-") else 1
        name = tok.lstrip("-")
        out["II" if name == "I" else name] = sign
    return out


def _pauli_coefficients(rho):
    """4 rho = sum_P Tr(P rho) P over two-qubit Pauli products."""
    out = {}
    for a, b in product("IXYZ", repeat=2):
        c = (rho @ PAULI[a].kron(PAULI[b])).trace()
        assert c.is_real()
        if c.real:
            out[a + b] = c.real
    return out


def criterion_4():
    g = exceptional_gate_1()
    for label, printed in EXC1_EXPANSIONS.items():
        k = int(label, 2)
        proj = ExactMatrix.zeros(4)
        proj.re[k, k] = 1
        got = _pauli_coefficients(conjugate_projector(g, proj))
        if got != _expansion(printed):
            return False, f"|{label}>: got {got}, printed 1/4({printed})"
    if not isinstance(run_lbf(LbfInput.from_projectors(g, ((P0, P1), (P0, P1)))), Incompatible):
        return False, "G_exc.1 not heralded"
    g2 = exceptional_gate_2()
    inp = LbfInput.from_projectors(g2, ((P0, P1), (P0, P1)))
    if not isinstance(run_lbf(inp), Incompatible):
        return False, "G_exc.2 not heralded"
    rotated = ExactMatrix.from_rows([[9, 12], [12, 16]]).scale(Fraction(1, 25))
    rotated_c = ExactMatrix.identity(2) - rotated
    families = {
        "{00},{01},{1*}": ([{0}, {1}, {2, 3}], ((P0, P1), (P0, P1))),
        "{10},{11},{0*}": ([{2}, {3}, {0, 1}], ((P0, P1), tuple(sorted((rotated, rotated_c), key=lambda p: p.key(),
                                                                      reverse=True)))),
    }
    for name, (members, expected) in families.items():
        found = set()
        for subset in members:
            sol = solve_local_basis(inp, CandidateProjector(frozenset(subset), (2, 2)), random.Random(4))
            if not sol.complete:
                return False, f"family {name}: member {sorted(subset)} has no complete local basis"
            ub = xk_unique_basis(sol, random.Random(4))
            for j, projs in enumerate(ub):
                for p in projs:
                    if any(p @ q != q @ p for q in expected[j]):
                        return False, f"family {name}: member {sorted(subset)} disagrees on qubit {j + 1}"
            if all(len(projs) == 2 for projs in ub):
                found.add(ub)
        if found != {expected}:
            return False, f"family {name}: rank-one members give {len(found)} bases, expected the listed one"
    return True, "4 Pauli expansions as printed; both gates heralded; both FRASE families match"


def test_criterion_4_exceptional_fixtures(verdict):
    run_criterion(verdict, 4, "exceptional-gate fixtures", criterion_4)


# 5. symmetry test vs dense comparison ---------------------------------------------

Q_VALUES = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 3), Fraction(-1, 3), Fraction(1, 2), Fraction(-2, 5)]


def _reachable_maps(n, depth=6):
    """One shortest NOT/CNOT word for every distinct map reachable with at most ``depth`` gates."""
    gens = [("NOT", (j,)) for j in range(n)] + [("CNOT", (c, t)) for c in range(n) for t in range(n) if c != t]
    strings = list(product((0, 1), repeat=n))
    index = {s: i for i, s in enumerate(strings)}
    table = [[index[ReversibleCircuit((g,)).apply(s)] for s in strings] for g in gens]
    start = tuple(range(len(strings)))
    words = {start: ()}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for images in frontier:
            for g, act in zip(gens, table):
                m = tuple(act[y] for y in images)
                if m not in words:
                    words[m] = words[images] + (g,)
                    nxt.append(m)
        frontier = nxt
    return strings, words


def _dense_symmetric(state, circuit, n):
    """S rho S^dagger == rho with S the permutation matrix of the circuit, as explicit matrices."""
    strings = list(product((0, 1), repeat=n))
    index = {s: i for i, s in enumerate(strings)}
    rho = ExactMatrix.diag([state.probability(s) for s in strings])
    S = ExactMatrix.zeros(len(strings))
    for s in strings:
        S.re[index[circuit.apply(s)], index[s]] = 1
    return S @ rho @ S.dagger() == rho


def criterion_5():
    rng = random.Random(505)
    checked = symmetric = 0
    for n in range(1, 5):
        strings, words = _reachable_maps(n)
        for images, word in words.items():
            q = [rng.choice(Q_VALUES) for _ in range(n)]
            if rng.random() < 0.5:  # ties make symmetries common
                q = [q[0]] * n
            state = DiagonalProductState(tuple(q))
            circuit = ReversibleCircuit(word)
            counter = PropagationCounter()
            fast = symmetry_test(state, circuit, counter)
            if counter.count != 2 * n:
                return False, f"N={n}: {counter.count} propagations, expected {2 * n}"
            if n <= 3:
                dense = _dense_symmetric(state, circuit, n)
            else:  # S is a permutation: S rho S^dagger has diagonal p(S^-1 x)
                probs = [state.probability(s) for s in strings]
                dense = all(probs[images[x]] == probs[x] for x in range(len(strings)))
            if fast != dense:
                return False, f"N={n}, q={q}, word {word}: symmetry test {fast}, dense {dense}"
            checked += 1
            symmetric += dense
    return True, f"{checked} distinct maps for N<=4 ({symmetric} symmetric); 2N propagations each"


def test_criterion_5_symmetry_equivalence(verdict):
    run_criterion(verdict, 5, "symmetry test equivalence", criterion_5)


# 6. one-clean-qubit end to end ----------------------------------------------------

DQC1_SHOTS = 10**5


def criterion_6():
    n = 6
    spec = MeasurementSpec(((0, plus_minus_basis()),))
    parts = []
    for k, (name, anf) in enumerate(DQC1_FIXTURES.items()):
        circuit = dqc1_circuit(n, anf)
        probs = exact_marginals(circuit, spec)
        expect = probs["0"] - probs["1"]
        direct = sum(Fraction((-1) ** anf_eval(anf, x)) for x in product((0, 1), repeat=n)) / 2**n
        if expect != direct:
            return False, f"{name}: exact <X> = {expect}, direct sum {direct}"
        report = run_shots(circuit, spec, DQC1_SHOTS, seed=600 + k)
        estimate = (report.counts.get("0", 0) - report.counts.get("1", 0)) / DQC1_SHOTS
        stderr = sqrt((1 - float(direct) ** 2) / DQC1_SHOTS)
        z = abs(estimate - float(direct)) / stderr if stderr else (0.0 if estimate == direct else float("inf"))
        if z > 5:
            return False, f"{name}: sampled {estimate:.4f} vs exact {direct}, {z:.1f} standard errors"
        parts.append(f"{name} <X>={direct} (z={z:.2f})")
    return True, "; ".join(parts)


def test_criterion_6_dqc1(verdict):
    t0 = time.perf_counter()
    run_criterion(verdict, 6, "DQC1 end to end", criterion_6)
    assert time.perf_counter() - t0 < 30


# 7. dense oracle equivalence ------------------------------------------------------


def _random_spec(rng, dims):
    qs = sorted(rng.sample(range(len(dims)), rng.randint(1, len(dims))))
    targets = []
    for q in qs:
        projs = MeasurementSpec.computational([q], dims).targets[0][1]
        if rng.random() < 0.4:  # measure some qudits in a rotated basis
            projs = random_local_unitary(dims[q], rng).projectors()
        targets.append((q, projs))
    return MeasurementSpec(tuple(targets))


def criterion_7():
    rng = random.Random(707)
    steps = 0
    for i in range(100):
        n = rng.randint(1, 5)
        dims = tuple(rng.choice([2, 2, 3]) if n <= 4 else 2 for _ in range(n))
        circuit = random_concordant_circuit(dims, rng.randint(1, 12), rng, max_support=min(n, 3))
        rule = build_update_rule(circuit)
        if not isinstance(rule, UpdateRule):
            return False, f"circuit {i}: {rule.message}"
        states = run_dense(circuit)
        basis = circuit.initial.basis
        if not check_concordant(states[0], basis):
            return False, f"circuit {i}: initial state not diagonal in its basis"
        for step, ev in zip(rule.steps, states[1:]):
            basis = basis.replace({j: step.new_basis[k] for k, j in enumerate(step.support)})
            if not check_concordant(ev, basis):
                return False, f"circuit {i}: not diagonal in the simulator basis after gate {step.t}"
            steps += 1
        spec = _random_spec(rng, dims)
        if exact_marginals(circuit, spec, rule=rule) != dense_marginals(states[-1], spec):
            return False, f"circuit {i}: simulator and dense marginals differ"
    return True, f"100 circuits, {steps} gates, concordant after every gate, marginals identical"


def test_criterion_7_oracle_equivalence(verdict):
    run_criterion(verdict, 7, "dense oracle equivalence", criterion_7)


# 8. exactness guard ---------------------------------------------------------------


def _exact_pipeline():
    rng = random.Random(808)
    isolate_real_roots(IntPolynomial((-6, 0, 1, 0, 1)))
    r2, r3 = isolate_real_roots(IntPolynomial((-2, 0, 1)))[-1], isolate_real_roots(IntPolynomial((-3, 0, 1)))[-1]
    assert (r2 + r3) * (r2 - r3) == AlgebraicNumber.rational(-1)
    state, basis = _concordant_state(rng)
    frase_decompose(state, [0], [basis.per_qudit[0]])
    for gate in (exceptional_gate_1(), exceptional_gate_2()):
        run_lbf(LbfInput.from_projectors(gate, ((P0, P1), (P0, P1))))
    circuit = random_concordant_circuit((2, 3, 2), 6, rng, max_support=3)
    spec = _random_spec(rng, circuit.dims)
    for strategy in ("lbf", "auto"):
        rule = build_update_rule(circuit, SimulatorConfig(strategy=strategy))
        exact_marginals(circuit, spec, rule=rule)
        run_shots(circuit, spec, 500, seed=8, rule=rule)
    dense_marginals(run_dense(circuit)[-1], spec)
    dq = dqc1_circuit(3, (frozenset(), frozenset({1})))
    exact_marginals(dq, MeasurementSpec(((0, plus_minus_basis()),)), SimulatorConfig(strategy="clifford12"))
    symmetry_test(DiagonalProductState((Fraction(1, 3), Fraction(1, 3))), ReversibleCircuit((("SWAP", (0, 1)),)))


def criterion_8():
    offenders = source_offenders()
    if offenders:
        return False, f"float use in source: {offenders[:3]}"
    found = float_returns(_exact_pipeline)
    if found:
        return False, found[0]
    return True, "no float literal or conversion in the exact modules; no float returned along the pipeline"


def test_criterion_8_exactness_guard(verdict):
    run_criterion(verdict, 8, "exactness guard", criterion_8)
