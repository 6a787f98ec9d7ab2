"""Exact elimination: fraction-free Bareiss over Z, Gauss-Jordan over exact fields,
incremental span bases and a surd-free Gram-Schmidt.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .gaussian import GaussianRational, ZERO

__all__ = [
    "BareissResult",
    "bareiss_eliminate",
    "integer_nullspace",
    "gaussian_integer_nullspace",
    "field_rref",
    "field_nullspace",
    "field_rank",
    "SpanBuilder",
    "rational_gram_schmidt",
    "vec_inner",
]


@dataclass(frozen=True)
class BareissResult:
    echelon: list[list[int]]
    pivots: list[int]
    nullspace: list[list[int]]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _primitive(v: list[int]) -> list[int]:
    g = reduce(gcd, v, 0)
    if g == 0:
        return v
    # first nonzero entry positive, for a canonical representative
    lead = next(x for x in v if x)
    if lead < 0:
        g = -g
    return [x // g for x in v]


def bareiss_eliminate(system: Sequence[Sequence[int]]) -> BareissResult:
    """Fraction-free row echelon form and an integer null-space basis.

    Every intermediate entry is a minor of the input, so the division by the
    previous pivot is exact and bit-lengths stay bounded by Hadamard's bound.
    """
    M = [[int(x) for x in row] for row in system]
    m = len(M)
    n = len(M[0]) if m else 0
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        Mr = M[r]
        for i in range(r + 1, m):
            Mi = M[i]
            a = Mi[c]
            if a:
                for j in range(c + 1, n):
                    Mi[j] = (piv * Mi[j] - a * Mr[j]) // prev
            else:
                for j in range(c + 1, n):
                    if Mi[j]:
                        Mi[j] = (piv * Mi[j]) // prev
            Mi[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    echelon = M[:r]
    return BareissResult(echelon, pivots, _echelon_nullspace(echelon, pivots, n))


def _echelon_nullspace(U: list[list[int]], pivots: list[int], n: int) -> list[list[int]]:
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            row = U[k]
            c = pivots[k]
            s = sum((row[j] * x[j] for j in range(c + 1, n) if row[j] and x[j]), Fraction(0))
            x[c] = -s / row[c]
        den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in x), 1)
        basis.append(_primitive([int(v * den) for v in x]))
    return basis


def integer_nullspace(system: Sequence[Sequence[int]]) -> list[list[int]]:
    return bareiss_eliminate(system).nullspace


def gaussian_integer_nullspace(re_rows, im_rows) -> list[list[int]]:
    """Real solutions x of (A_re + i A_im) x = 0: stacks the real and imaginary rows."""
    return integer_nullspace([list(r) for r in re_rows] + [list(r) for r in im_rows])


# generic exact fields ----------------------------------------------------------------


def field_rref(rows: Sequence[Sequence], zero=ZERO) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over an exact field (GaussianRational, Fraction, ...)."""
    M = [list(r) for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv if v != 0 else v for v in M[r]]
        Mr = M[r]
        for i in range(m):
            if i != r and M[i][c] != 0:
                a = M[i][c]
                M[i] = [vi - a * vr if vr != 0 else vi for vi, vr in zip(M[i], Mr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def field_nullspace(rows: Sequence[Sequence], zero=ZERO, one=None) -> list[list]:
    if one is None:
        one = zero + 1
    n = len(rows[0])
    R, pivots = field_rref(rows, zero)
    pset = set(pivots)
    basis = []
    for f in range(n):
        if f in pset:
            continue
        x = [zero] * n
        x[f] = one
        for k, c in enumerate(pivots):
            x[c] = -R[k][f]
        basis.append(x)
    return basis


def field_rank(rows: Sequence[Sequence], zero=ZERO) -> int:
    return len(field_rref(rows, zero)[1])


class SpanBuilder:
    """Incrementally grown basis of a span over an exact field.

    Stored rows are kept reduced (pivot 1, zero in other pivot columns) so that
    membership tests cost one pass per stored row.
    """

    def __init__(self, length: int):
        self.length = length
        self.rows: list[list] = []
        self.pivots: list[int] = []
        self.originals: list[list] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def residual(self, v: Sequence) -> list:
        w = list(v)
        for row, c in zip(self.rows, self.pivots):
            a = w[c]
            if a != 0:
                w = [wi - a * ri if ri != 0 else wi for wi, ri in zip(w, row)]
        return w

    def add(self, v: Sequence) -> bool:
        """Add ``v`` if independent; returns whether the span grew."""
        w = self.residual(v)
        c = next((j for j, x in enumerate(w) if x != 0), None)
        if c is None:
            return False
        inv = 1 / w[c]
        w = [x * inv if x != 0 else x for x in w]
        for k, row in enumerate(self.rows):
            a = row[c]
            if a != 0:
                self.rows[k] = [ri - a * wi if wi != 0 else ri for ri, wi in zip(row, w)]
        self.rows.append(w)
        self.pivots.append(c)
        self.originals.append(list(v))
        return True

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.residual(v))


# Gram-Schmidt without square roots -------------------------------------------------------


def vec_inner(u: Sequence, v: Sequence):
    """<u|v> = sum conj(u_i) v_i."""
    acc = ZERO
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            acc = acc + GaussianRational.coerce(a).conj() * b
    return acc


def rational_gram_schmidt(vectors: Sequence[Sequence]) -> list[list[GaussianRational]]:
    """Pairwise orthogonal vectors with the same span, using only field operations.

    With kept vectors w_1..w_{k-1} and N_i = <w_i|w_i>, the next vector is

        w_k = (prod_i N_i) v_k - sum_i <w_i|v_k> (prod_{m != i} N_m) w_i,

    which is the classical projection scaled by the positive rational prod_i N_i.
    Vectors that reduce to zero are dropped; survivors are divided by a positive
    rational so their entries have coprime integer numerators.
    """
    kept: list[list[GaussianRational]] = []
    norms: list[Fraction] = []
    for v in vectors:
        v = [GaussianRational.coerce(x) for x in v]
        total = reduce(lambda a, b: a * b, norms, Fraction(1))
        w = [x * total for x in v]
        for i, wi in enumerate(kept):
            c = vec_inner(wi, v)
            if c == 0:
                continue
            others = reduce(lambda a, b: a * b, (nm for j, nm in enumerate(norms) if j != i), Fraction(1))
            f = c * others
            w = [a - f * b for a, b in zip(w, wi)]
        if all(x == 0 for x in w):
            continue
        w = _positive_normalise(w)
        kept.append(w)
        norms.append(vec_inner(w, w).real)
    return kept


def _positive_normalise(w: list[GaussianRational]) -> list[GaussianRational]:
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.den for x in w), 1)
    ints = []
    for x in w:
        s = den // x.den
        ints += [x.a * s, x.b * s]
    g = reduce(gcd, ints, 0)
    return [GaussianRational(x.a * (den // x.den), x.b * (den // x.den), g) for x in w]
