"""Local-basis finder.

For a gate G on support b and the previous rank-1 local basis L on b, every
candidate set beta of dit strings gives the rank-|beta| projector

    C_beta = sum_{x in beta} G L|x><x|L^dag G^dag.

A Hermitian rho on qudit j is an admissible local-basis element for beta when
[1 (x) rho, C_beta] = 0, i.e. rho commutes with every qudit-j slice of C_beta.
These rho form a matrix algebra (the commutant). A candidate is *complete* when
a generic element of that algebra has d_j distinct eigenvalues on every qudit;
the uniquely determined projectors are then the minimal central projectors of
the algebra, found by joining the eigenprojector groups of two random elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Iterator, Sequence

import numpy as np

from .circuit import Gate, PermutationGate, dit_strings, format_dits
from .errors import PromiseViolation, ResourceLimit
from .exactnum import (
    ExactMatrix,
    GaussianRational,
    SpanBuilder,
    bareiss_eliminate,
    rational_gram_schmidt,
    spectral_groups,
    vec_inner,
)

__all__ = [
    "LbfConfig",
    "GateTooLarge",
    "CandidateProjector",
    "LbfInput",
    "LocalBasisSolution",
    "Incompatible",
    "LbfSuccess",
    "enumerate_candidates",
    "hermitian_basis",
    "build_linear_system",
    "solve_local_basis",
    "xk_unique_basis",
    "compatibility_check",
    "fine_grain",
    "find_permutation",
    "run_lbf",
    "herald_message",
]


class GateTooLarge(ResourceLimit):
    pass


@dataclass(frozen=True)
class LbfConfig:
    seed: int = 0
    max_dim: int = 64
    # budget of candidate projectors tried while grouping strings the rank-1 pass leaves open
    max_candidates: int = 20000
    max_instances: int = 5


@dataclass(frozen=True)
class CandidateProjector:
    subset: frozenset
    dims: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.subset)

    @property
    def matrix(self) -> ExactMatrix:
        d = prod(self.dims)
        m = ExactMatrix.zeros(d)
        for i in self.subset:
            m.re[i, i] = 1
        return m

    def complement(self) -> "CandidateProjector":
        return CandidateProjector(frozenset(range(prod(self.dims))) - self.subset, self.dims)

    def label(self) -> str:
        return "{" + ",".join(format_dits(dit_strings(self.dims)[i]) for i in sorted(self.subset)) + "}"


def enumerate_candidates(dims: Sequence[int], within: Sequence[int] | None = None, *, max_dim: int = 64,
                         min_rank: int = 1, include_identity: bool = True) -> Iterator[CandidateProjector]:
    """Subsets of ``within`` (default: all strings) in rank order, each followed by its
    complement inside ``within``; subsets of exactly half size appear once per pair."""
    dims = tuple(dims)
    d = prod(dims)
    if d > max_dim:
        raise GateTooLarge(f"gate dimension {d} exceeds cap {max_dim}")
    pool = list(range(d)) if within is None else sorted(within)
    n = len(pool)
    full = frozenset(pool)
    for r in range(min_rank, n // 2 + 1):
        for sub in combinations(pool, r):
            s = frozenset(sub)
            if 2 * r == n and pool[0] not in s:
                continue
            yield CandidateProjector(s, dims)
            yield CandidateProjector(full - s, dims)
    if include_identity:
        yield CandidateProjector(frozenset(range(d)), dims)


@dataclass(frozen=True, eq=False)
class LbfInput:
    gate: Gate
    prev_vectors: tuple[tuple[ExactMatrix, ...], ...]  # per support qudit, column vectors
    dims: tuple[int, ...]

    @classmethod
    def from_projectors(cls, gate: Gate, prev: Sequence[Sequence[ExactMatrix]]) -> "LbfInput":
        vecs = tuple(tuple(p.rank_one_vector() for p in projs) for projs in prev)
        dims = tuple(len(p) for p in prev)
        if prod(dims) != gate.dim:
            raise ValueError("previous basis does not match the gate dimension")
        return cls(gate, vecs, dims)

    @property
    def dim(self) -> int:
        return prod(self.dims)


class _Images:
    """u_x = M v_x for every dit string x, with norms, shared by all candidates."""

    def __init__(self, inp: LbfInput):
        mats = []
        for vs in inp.prev_vectors:
            rows = [[vs[k][i, 0] for k in range(len(vs))] for i in range(vs[0].rows)]
            mats.append(ExactMatrix.from_rows(rows))
        V = ExactMatrix.kron_all(mats)
        # clear denominators column-wise: projectors do not depend on column scale
        self.U = inp.gate.matrix @ ExactMatrix(V.re, V.im, 1, reduce_=False)
        d = inp.dim
        self.norms = []
        for x in range(d):
            col_re, col_im = self.U.re[:, x], self.U.im[:, x]
            self.norms.append(Fraction(int(np.dot(col_re, col_re) + np.dot(col_im, col_im)), self.U.den**2))
        self.dims = inp.dims
        self._probes: dict[int, list] = {}

    def _probe_parts(self, j: int):
        """Per string x, two fixed random combinations of the qudit-j slices of
        u_x u_x^dagger / |u_x|^2 (linear in the candidate, so candidates add them)."""
        if j in self._probes:
            return self._probes[j]
        dims = self.dims
        dj = dims[j]
        rest = prod(dims) // dj
        rng = random.Random(7919 * (j + 1))
        coeffs = [[[GaussianRational(rng.randrange(-2**20, 2**20), rng.randrange(-2**20, 2**20)) for _ in range(rest)]
                   for _ in range(rest)] for _ in range(2)]
        Rs = [ExactMatrix.from_rows(c) for c in coeffs]
        order = [a for a in range(len(dims)) if a != j] + [j]
        parts = []
        for x in range(self.U.cols):
            re = self.U.re[:, x].reshape(dims).transpose(order).reshape(rest, dj)
            im = self.U.im[:, x].reshape(dims).transpose(order).reshape(rest, dj)
            Ux = ExactMatrix(re.copy(), im.copy(), 1, reduce_=False)
            n = int(np.dot(self.U.re[:, x], self.U.re[:, x]) + np.dot(self.U.im[:, x], self.U.im[:, x]))
            left = Ux.transpose()
            right = Ux.conj()
            parts.append(tuple((left @ R @ right).scale(Fraction(1, n)) for R in Rs))
        self._probes[j] = parts
        return parts

    def surely_incomplete(self, subset, j: int) -> bool:
        """Exact certificate that the qudit-j slices of the candidate do not commute.

        Two random combinations A, B of the slices commute with each other and
        with B^dagger whenever the slices form a commuting normal family; a
        nonzero commutator therefore proves incompleteness. A zero result
        proves nothing and the full check still runs.
        """
        parts = self._probe_parts(j)
        A = B = None
        for x in subset:
            a, b = parts[x]
            A = a if A is None else A + a
            B = b if B is None else B + b
        return not (A @ B - B @ A).is_zero() or not (A @ B.dagger() - B.dagger() @ A).is_zero()

    def projector(self, subset) -> ExactMatrix:
        d = self.U.rows
        total = ExactMatrix.zeros(d)
        for x in sorted(subset):
            u = ExactMatrix(self.U.re[:, x:x + 1].copy(), self.U.im[:, x:x + 1].copy(), self.U.den)
            total = total + (u @ u.dagger()).scale(1 / self.norms[x])
        return total


def _slice_rows(C: ExactMatrix, dims: tuple[int, ...], j: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows are the flattened d_j x d_j blocks S_rs of C with respect to qudit j."""
    m = len(dims)
    shape = dims + dims
    rest = [a for a in range(m) if a != j]
    order = rest + [m + a for a in rest] + [j, m + j]
    dj = dims[j]
    r = prod(dims) // dj
    re = C.re.reshape(shape).transpose(order).reshape(r * r, dj * dj)
    im = C.im.reshape(shape).transpose(order).reshape(r * r, dj * dj)
    return re, im


def slice_basis(C: ExactMatrix, dims: tuple[int, ...], j: int) -> list[list[GaussianRational]]:
    """A basis (Gaussian-integer entries) of the span of the qudit-j slices of C."""
    re, im = _slice_rows(C, dims, j)
    dj = dims[j]
    span = SpanBuilder(dj * dj)
    for row_re, row_im in zip(re, im):
        if not (row_re.any() or row_im.any()):
            continue
        span.add([GaussianRational(int(a), int(b)) for a, b in zip(row_re, row_im)])
        if span.rank == dj * dj:
            break
    return span.originals


def hermitian_basis(d: int) -> list[ExactMatrix]:
    """Integer Hermitian basis: E_aa, E_ab + E_ba, i(E_ab - E_ba)."""
    out = []
    for a in range(d):
        m = ExactMatrix.zeros(d)
        m.re[a, a] = 1
        out.append(m)
    for a in range(d):
        for b in range(a + 1, d):
            m = ExactMatrix.zeros(d)
            m.re[a, b] = m.re[b, a] = 1
            out.append(m)
            m = ExactMatrix.zeros(d)
            m.im[a, b] = -1
            m.im[b, a] = 1
            out.append(m)
    return out


def _as_matrix(flat: Sequence[GaussianRational], d: int) -> ExactMatrix:
    return ExactMatrix.from_rows([list(flat[i * d:(i + 1) * d]) for i in range(d)])


def build_linear_system(slices: Sequence[Sequence[GaussianRational]], d: int) -> list[list[int]]:
    """Integer system Xi: rows are real and imaginary parts of the entries of
    sum_l c_l [sigma_l, S] for each slice-basis element S; columns index c_l."""
    sigma = hermitian_basis(d)
    rows: list[list[int]] = []
    for s in slices:
        S = _as_matrix(s, d)
        comms = [sig @ S - S @ sig for sig in sigma]
        den = 1
        for c in comms:
            den = den * c.den // np.gcd(den, c.den)
        for a in range(d):
            for b in range(d):
                re_row = [int(c.re[a, b]) * (den // c.den) for c in comms]
                im_row = [int(c.im[a, b]) * (den // c.den) for c in comms]
                if any(re_row):
                    rows.append(re_row)
                if any(im_row):
                    rows.append(im_row)
    return rows


def _commutant(slices, d: int) -> list[ExactMatrix]:
    sigma = hermitian_basis(d)
    rows = build_linear_system(slices, d)
    if not rows:
        return sigma
    out = []
    for c in bareiss_eliminate(rows).nullspace:
        A = ExactMatrix.zeros(d)
        for coef, sig in zip(c, sigma):
            if coef:
                A = A + sig.scale(coef)
        out.append(A)
    return out


@dataclass(frozen=True, eq=False)
class _QuditSolution:
    slices: tuple          # basis of slice span (flattened Gaussian-integer matrices)
    commutant: tuple       # Hermitian integer basis of the admissible rho
    instances: tuple       # per random instance: tuple of rational group projectors
    complete: bool


@dataclass(frozen=True, eq=False)
class LocalBasisSolution:
    candidate: CandidateProjector
    per_qudit: tuple[_QuditSolution, ...]

    @property
    def complete(self) -> bool:
        return all(q.complete for q in self.per_qudit)

    def projectors(self, j: int) -> tuple[ExactMatrix, ...]:
        """Eigenprojector groups of the first random instance on qudit j."""
        return self.per_qudit[j].instances[0]


def _random_instance(basis: Sequence[ExactMatrix], rng: random.Random) -> ExactMatrix:
    acc = ExactMatrix.zeros(basis[0].rows)
    for A in basis:
        acc = acc + A.scale(rng.randrange(-(2**63), 2**63))
    return acc


def _instance_groups(commutant, d, rng) -> tuple[tuple[ExactMatrix, ...], bool]:
    groups = spectral_groups(_random_instance(commutant, rng))
    n_roots = sum(len(g.roots) for g in groups)
    return tuple(g.projector for g in groups), n_roots == d


def _slices_commute(slices, d: int) -> bool:
    """Whether the slices and their adjoints form a commuting family."""
    mats = [_as_matrix(sl, d) for sl in slices]
    herm = []
    for R in mats:
        herm.append(R + R.dagger())
        herm.append((R - R.dagger()).scale(GaussianRational(0, 1)))
    return all((A @ B - B @ A).is_zero() for i, A in enumerate(herm) for B in herm[i + 1:])


def _solve_qudit(C: ExactMatrix, dims, j, rng, max_instances: int = 5) -> _QuditSolution:
    """Complete iff the slices commute: then the admissible rho^(j) include a full
    set of rank-one projectors. One random instance is kept; xk_unique_basis adds
    more until its blocks are central in the commutant."""
    d = dims[j]
    slices = slice_basis(C, dims, j)
    if not _slices_commute(slices, d):
        return _QuditSolution(tuple(slices), (), (), False)
    comm = _commutant(slices, d)
    for _ in range(max_instances):
        groups, distinct = _instance_groups(comm, d, rng)
        if distinct:
            return _QuditSolution(tuple(slices), tuple(comm), (groups,), True)
    raise ArithmeticError("random commutant elements kept degenerate eigenvalues")


def solve_local_basis(inp: LbfInput, cand: CandidateProjector, rng: random.Random, *,
                      _images: _Images | None = None) -> LocalBasisSolution:
    """Solve the commutation equations on every support qudit; stops at the first
    qudit without a complete solution."""
    images = _images or _Images(inp)
    for j in range(len(inp.dims)):
        if images.surely_incomplete(cand.subset, j):
            return LocalBasisSolution(cand, (_QuditSolution((), (), (), False),))
    C = images.projector(cand.subset)
    per = []
    for j in range(len(inp.dims)):
        q = _solve_qudit(C, inp.dims, j, rng)
        per.append(q)
        if not q.complete:
            break
    return LocalBasisSolution(cand, tuple(per))


def _join(P: Sequence[ExactMatrix], Q: Sequence[ExactMatrix]) -> list[ExactMatrix]:
    """Finest partition coarser than both projector decompositions."""
    parent = list(range(len(P) + len(Q)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, p in enumerate(P):
        for b, q in enumerate(Q):
            if not (p @ q).is_zero():
                parent[find(a)] = find(len(P) + b)
    blocks: dict[int, ExactMatrix] = {}
    for a, p in enumerate(P):
        r = find(a)
        blocks[r] = p if r not in blocks else blocks[r] + p
    return list(blocks.values())


def _is_central(blocks, commutant) -> bool:
    return all((Z @ A - A @ Z).is_zero() for Z in blocks for A in commutant)


def xk_unique_basis(sol: LocalBasisSolution, rng: random.Random | None = None,
                    max_instances: int = 5) -> tuple[tuple[ExactMatrix, ...], ...]:
    """Per qudit, the smallest projectors shared by every solution (central blocks)."""
    rng = rng or random.Random(0)
    out = []
    for j, q in enumerate(sol.per_qudit):
        d = q.commutant[0].rows
        blocks = list(q.instances[0])
        for inst in q.instances[1:]:
            blocks = _join(blocks, inst)
        extra = 0
        while not _is_central(blocks, q.commutant):
            if extra >= max_instances:
                raise ArithmeticError("could not isolate the central projectors of the commutant")
            inst, _ = _instance_groups(q.commutant, d, rng)
            blocks = _join(blocks, inst)
            extra += 1
        out.append(tuple(_canonical_order(blocks)))
    return tuple(out)


def _canonical_order(projs: Sequence[ExactMatrix]) -> list[ExactMatrix]:
    return sorted(projs, key=lambda p: p.key(), reverse=True)


@dataclass(frozen=True)
class Incompatible:
    step: int | None
    candidate: str
    other: str
    qudit: int
    projector: ExactMatrix

    @property
    def message(self) -> str:
        return herald_message(self.step)

    def describe(self) -> str:
        return (
            f"{self.message}: projector on support qudit {self.qudit} unique for candidate "
            f"{self.candidate} does not commute with the conjugated candidate {self.other}"
        )


def herald_message(step: int | None) -> str:
    return f"Local-basis ambiguity at time step {step if step is not None else '?'}"


def _commutes_with_slices(rho: ExactMatrix, slices, d: int) -> bool:
    for s in slices:
        S = _as_matrix(s, d)
        if not (rho @ S - S @ rho).is_zero():
            return False
    return True


def compatibility_check(chi: Sequence[LocalBasisSolution], bases: Sequence[tuple], step: int | None = None,
                        labels: Sequence[str] | None = None):
    """None when every unique projector of every candidate commutes with every other
    candidate's conjugated projector; otherwise the first failure as Incompatible."""
    if labels is None:
        labels = [sol.candidate.label() for sol in chi]
    for j in range(len(chi[0].per_qudit)):
        seen = {}
        for k, lb in enumerate(bases):
            for rho in lb[j]:
                seen.setdefault(rho.key(), (k, rho))
        for key, (k, rho) in seen.items():
            d = rho.rows
            for kp, sol in enumerate(chi):
                if not _commutes_with_slices(rho, sol.per_qudit[j].slices, d):
                    return Incompatible(step, labels[k], labels[kp], j, rho)
    return None


def fine_grain(bases: Sequence[tuple], dims: Sequence[int]) -> tuple[tuple[ExactMatrix, ...], ...]:
    """Common refinement of all unique bases, split into canonical rank-1 projectors."""
    out = []
    for j, d in enumerate(dims):
        parts = [ExactMatrix.identity(d)]
        for lb in bases:
            nxt = []
            for p in parts:
                for q in lb[j]:
                    r = p @ q
                    if not r.is_zero():
                        nxt.append(r)
            parts = nxt
        rank1 = []
        for p in parts:
            rk = p.trace().real
            if rk == 1:
                rank1.append(p)
                continue
            cols = [[p[i, c] for i in range(d)] for c in range(d)]
            for w in rational_gram_schmidt(cols):
                col = ExactMatrix.column(w)
                rank1.append((col @ col.dagger()).scale(1 / vec_inner(w, w)))
        if len(rank1) != d:
            raise PromiseViolation(f"fine-grained basis on support qudit {j} has {len(rank1)} elements, expected {d}")
        out.append(tuple(_canonical_order(rank1)))
    return tuple(out)


def _overlaps(images: _Images, new_basis: Sequence[Sequence[ExactMatrix]]) -> list[list[Fraction]]:
    """T[x][y] = tr(C_x Pi'_y)."""
    mats, norms = [], []
    for projs in new_basis:
        vecs = [p.rank_one_vector() for p in projs]
        rows = [[v[i, 0] for v in vecs] for i in range(vecs[0].rows)]
        mats.append(ExactMatrix.from_rows(rows))
        norms.append([vec_inner([v[i, 0] for i in range(v.rows)], [v[i, 0] for i in range(v.rows)]).real for v in vecs])
    W = ExactMatrix.kron_all(mats)
    G = images.U.dagger() @ W
    dims = images.dims
    ys = dit_strings(dims)
    wn = [prod(norms[j][y[j]] for j in range(len(dims))) for y in ys]
    d = len(ys)
    T = []
    for x in range(d):
        row = []
        for y in range(d):
            a, b = G.re[x, y], G.im[x, y]
            if a == 0 and b == 0:
                row.append(Fraction(0))
            else:
                row.append(Fraction(int(a * a + b * b), G.den**2) / (images.norms[x] * wn[y]))
        T.append(row)
    return T


def find_permutation(T: Sequence[Sequence[Fraction]], chi_subsets: Sequence[frozenset], dims: Sequence[int],
                     support: Sequence[int]):
    """Atoms of x (classes by membership in every candidate) and the lexicographically
    least bijection D mapping each atom onto the matching new-basis strings."""
    d = len(T)
    x_sig = {}
    for x in range(d):
        x_sig.setdefault(tuple(x in s for s in chi_subsets), []).append(x)
    y_sig = {}
    for y in range(d):
        sig = []
        for s in chi_subsets:
            w = sum((T[x][y] for x in s), Fraction(0))
            if w not in (0, 1):
                raise PromiseViolation("new basis does not diagonalize a conjugated candidate")
            sig.append(w == 1)
        y_sig.setdefault(tuple(sig), []).append(y)
    strings = dit_strings(dims)
    mapping = {}
    atoms = []
    for sig, xs in x_sig.items():
        ys = y_sig.get(sig, [])
        if len(ys) != len(xs):
            raise PromiseViolation("no permutation matches the conjugated candidate blocks")
        for x, y in zip(sorted(xs), sorted(ys)):
            mapping[strings[x]] = strings[y]
        atoms.append(frozenset(xs))
        # soundness: the image of the block equals the span of its new-basis strings
        if sum((T[x][y] for x in xs for y in ys), Fraction(0)) != len(xs):
            raise PromiseViolation("conjugated block and permuted new-basis block differ")
    atoms.sort(key=min)
    return PermutationGate(tuple(support), mapping), atoms


def _group_unresolved(unresolved: Sequence[int], consider, dims, budget: int) -> None:
    """Search blocks of the strings left open by the rank-one pass, smallest first.

    At size k only strings not yet covered by a complete block of smaller size
    are used, so every block found is minimal; overlapping blocks of the same
    size are all kept, which is where incompatible alternatives show up.
    """
    open_ = sorted(unresolved)
    tried = 0
    k = 2
    while len(open_) >= 2 * k - 1 and k <= len(open_):
        covered: set[int] = set()
        for sub in combinations(open_, k):
            tried += 1
            if tried > budget:
                raise ResourceLimit(f"more than {budget} candidate projectors needed to group {len(unresolved)} strings")
            cand = CandidateProjector(frozenset(sub), tuple(dims))
            if consider(cand):
                consider(cand.complement())
                covered.update(sub)
        open_ = [x for x in open_ if x not in covered]
        k += 1
    if open_ and len(open_) < len(unresolved):
        # whatever is left is the complement of the blocks found
        cand = CandidateProjector(frozenset(open_), tuple(dims))
        if consider(cand):
            consider(cand.complement())


@dataclass(frozen=True, eq=False)
class LbfSuccess:
    step: int | None
    basis: tuple[tuple[ExactMatrix, ...], ...]
    permutation: PermutationGate
    partition: tuple[frozenset, ...]
    chi: tuple[str, ...]
    unique_bases: tuple = field(default=(), repr=False)

    def is_success(self) -> bool:
        return True

    def partition_strings(self) -> list[list[tuple]]:
        """The partition blocks as dit strings of the support."""
        dims = [len(p) for p in self.basis]
        strings = dit_strings(dims)
        return [[strings[x] for x in sorted(blk)] for blk in self.partition]


def run_lbf(inp: LbfInput, config: LbfConfig = LbfConfig(), *, step: int | None = None,
            candidates: Sequence[frozenset] | None = None):
    """Success (new basis, permutation, partition) or Incompatible; raises
    PromiseViolation when no nontrivial candidate has a complete solution."""
    d = inp.dim
    if d > config.max_dim:
        raise GateTooLarge(f"gate dimension {d} exceeds cap {config.max_dim}")
    rng = random.Random(hash((config.seed, -1 if step is None else step)) & ((1 << 64) - 1))
    images = _Images(inp)
    solved: dict[frozenset, LocalBasisSolution] = {}
    chi: list[tuple[frozenset, LocalBasisSolution]] = []
    full = frozenset(range(d))

    def consider(cand: CandidateProjector) -> bool:
        comp = full - cand.subset
        sol = solved.get(cand.subset) or solved.get(comp)
        if sol is None:
            sol = solve_local_basis(inp, cand, rng, _images=images)
            solved[cand.subset] = sol
        if sol.complete:
            chi.append((cand.subset, sol))
        return sol.complete

    if candidates is not None:
        for s in candidates:
            cand = CandidateProjector(frozenset(s), inp.dims)
            consider(cand)
            if cand.subset != full:
                consider(cand.complement())
    else:
        # rank-one pass; complements share the solution of their partner
        unresolved = []
        for x in range(d):
            cand = CandidateProjector(frozenset([x]), inp.dims)
            if consider(cand):
                consider(cand.complement())
            else:
                unresolved.append(x)
        _group_unresolved(unresolved, consider, inp.dims, config.max_candidates)
    nontrivial = [(s, sol) for s, sol in chi if 0 < len(s) < d]
    if not nontrivial:
        raise PromiseViolation(f"no candidate projector admits a complete local basis at step {step}", step)
    # deduplicate candidates (order of discovery kept)
    seen = set()
    uniq = []
    for s, sol in nontrivial:
        if s not in seen:
            seen.add(s)
            uniq.append((s, sol))
    sols = [sol for _, sol in uniq]
    bases = [xk_unique_basis(sol, rng, config.max_instances) for sol in sols]
    bad = compatibility_check(sols, bases, step, [CandidateProjector(s, inp.dims).label() for s, _ in uniq])
    if bad is not None:
        return bad
    new_basis = fine_grain(bases, inp.dims)
    T = _overlaps(images, new_basis)
    perm, atoms = find_permutation(T, [s for s, _ in uniq], inp.dims, inp.gate.support)
    return LbfSuccess(step, new_basis, perm, tuple(atoms), tuple(CandidateProjector(s, inp.dims).label() for s, _ in uniq),
                      tuple(bases))
