"""Exact spectral decomposition of Hermitian matrices with Gaussian-rational entries.

Eigenvalues are grouped by the irreducible rational factor of the characteristic
polynomial they belong to. The sum of eigenprojectors over such a group is a
rational matrix; it is obtained twice, independently:

* as the orthogonal projector onto ker h(A) for the factor h, and
* from eigenvectors computed over Q(i)(lambda), mapped down by the trace.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .field import FieldElement
from .gaussian import GaussianRational, ONE
from .linalg import field_nullspace, rational_gram_schmidt, vec_inner
from .matrix import ExactMatrix
from .poly import IntPolynomial, charpoly, squarefree_part
from .roots import AlgebraicNumber, isolate_real_roots

__all__ = [
    "SpectralGroup",
    "hermitian_charpoly",
    "rational_factors",
    "spectral_groups",
    "projector_onto",
    "group_projector_via_field",
]


@dataclass(frozen=True)
class SpectralGroup:
    factor: IntPolynomial
    roots: tuple[AlgebraicNumber, ...]
    projector: ExactMatrix

    @property
    def rank(self) -> int:
        return int(self.projector.trace().real)

    def is_rational(self) -> bool:
        return self.factor.degree == 1


def hermitian_charpoly(A: ExactMatrix) -> IntPolynomial:
    """Characteristic polynomial of a Hermitian matrix, cleared to integer coefficients."""
    # scale to a Gaussian-integer matrix: charpoly(A)(x) ~ charpoly(den*A)(den*x)
    rows = [[GaussianRational(A.re[i, j], A.im[i, j]) for j in range(A.cols)] for i in range(A.rows)]
    coeffs = charpoly(rows, ONE)
    if any(not c.is_real() for c in coeffs):
        raise ValueError("matrix is not Hermitian: characteristic polynomial is not real")
    p = IntPolynomial(tuple(c.a for c in coeffs))
    return p.compose_linear(Fraction(A.den), Fraction(0))


def _interval_poly(intervals: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Coefficient enclosures of prod (x - r_k) for r_k in [lo_k, hi_k] (lowest degree first)."""
    poly = [(Fraction(1), Fraction(1))]
    for lo, hi in intervals:
        out = [(Fraction(0), Fraction(0))] * (len(poly) + 1)
        for i, (a, b) in enumerate(poly):
            # times x
            c, d = out[i + 1]
            out[i + 1] = (c + a, d + b)
            # times -r
            prods = [a * -lo, a * -hi, b * -lo, b * -hi]
            c, d = out[i]
            out[i] = (c + min(prods), d + max(prods))
        poly = out
    return poly


def rational_factors(f: IntPolynomial, roots: Sequence[AlgebraicNumber]) -> list[tuple[IntPolynomial, tuple]]:
    """Split a square-free, totally real ``f`` into irreducible factors over Q.

    Candidate factors are subsets of roots whose elementary symmetric functions
    are rational. Their values are pinned down by interval arithmetic to the
    precision at which a rational with denominator at most lc(f) is unique, and
    every candidate is confirmed by exact division.
    """
    remaining = list(roots)
    g = f.primitive()
    out = []
    while remaining:
        if len(remaining) <= 3 or g.degree <= 3:
            out.append((g, tuple(remaining)))
            break
        found = False
        for size in range(1, len(remaining) // 2 + 1):
            for idx in combinations(range(len(remaining)), size):
                cand = _try_factor(g, [remaining[i] for i in idx])
                if cand is not None:
                    out.append((cand, tuple(remaining[i] for i in idx)))
                    g = g.exact_div(cand).primitive()
                    remaining = [r for i, r in enumerate(remaining) if i not in idx]
                    found = True
                    break
            if found:
                break
        if not found:
            out.append((g, tuple(remaining)))
            break
    return out


def _try_factor(g: IntPolynomial, subset: list[AlgebraicNumber]) -> IntPolynomial | None:
    lc = abs(g.lc)
    target = Fraction(1, 2 * lc * lc)
    rs = list(subset)
    while True:
        enc = _interval_poly([(r.lo, r.hi) if r.exact is None else (r.exact, r.exact) for r in rs])
        if max(b - a for a, b in enc) < target:
            break
        rs = [r.bisect() for r in rs]
    coeffs = []
    for a, b in enc:
        c = ((a + b) / 2).limit_denominator(lc)
        if not a <= c <= b:
            return None
        coeffs.append(c)
    h = IntPolynomial.from_rational(coeffs).primitive()
    _, rem = g.divmod_rational(h)
    if any(rem):
        return None
    return h


def _poly_at_matrix(h: IntPolynomial, A: ExactMatrix) -> ExactMatrix:
    n = A.rows
    acc = ExactMatrix.zeros(n)
    for c in reversed(h.coeffs):
        acc = acc @ A
        if c:
            acc = acc + ExactMatrix.identity(n).scale(c)
    return acc


def projector_onto(vectors: Sequence[Sequence]) -> ExactMatrix:
    """Orthogonal projector onto the span of Gaussian-rational vectors."""
    ws = rational_gram_schmidt(vectors)
    n = len(vectors[0])
    P = ExactMatrix.zeros(n)
    for w in ws:
        col = ExactMatrix.column(w)
        P = P + (col @ col.dagger()).scale(1 / vec_inner(w, w))
    return P


def _kernel(M: ExactMatrix) -> list[list[GaussianRational]]:
    return field_nullspace(M.to_rows())


def spectral_groups(A: ExactMatrix, *, cross_check: bool = False) -> list[SpectralGroup]:
    """Eigenprojector groups of a Hermitian matrix, in increasing eigenvalue order of
    each group's least root."""
    p = hermitian_charpoly(A)
    f = squarefree_part(p)
    roots = isolate_real_roots(f)
    rational = [r for r in roots if r.exact is not None]
    irr = [r for r in roots if r.exact is None]
    factors: list[tuple[IntPolynomial, tuple]] = [(IntPolynomial.from_roots_linear(r.exact), (r,)) for r in rational]
    if irr:
        h = f
        for r in rational:
            h = h.exact_div(IntPolynomial.from_roots_linear(r.exact))
        factors += rational_factors(h, irr)
    groups = []
    for fac, rs in factors:
        kernel = _kernel(_poly_at_matrix(fac, A))
        P = projector_onto(kernel)
        if cross_check and fac.degree > 1:
            Q = group_projector_via_field(A, rs[0], fac)
            if Q != P:
                raise ArithmeticError("eigenprojector routes disagree")
        groups.append(SpectralGroup(fac, tuple(rs), P))
    groups.sort(key=lambda g: g.roots[0])
    return groups


def group_projector_via_field(A: ExactMatrix, root: AlgebraicNumber, factor: IntPolynomial) -> ExactMatrix:
    """Sum of eigenprojectors over the conjugates of ``root``, via Q(i)(root)."""
    gen = AlgebraicNumber(factor.primitive(), root.lo, root.hi)
    lam = FieldElement.generator_element(gen)
    n = A.rows
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = FieldElement(gen, [A[i, j]], lam._mod)
            row.append(e - lam if i == j else e)
        rows.append(row)
    zero = FieldElement(gen, [], lam._mod)
    one = FieldElement(gen, [ONE], lam._mod)
    vecs = field_nullspace(rows, zero, one)
    # Gram-Schmidt over the field, then sum w w^dagger / <w, w>
    kept = []
    for v in vecs:
        w = list(v)
        for u in kept:
            c = sum((a.conj() * b for a, b in zip(u, v)), zero) / sum((a.conj() * a for a in u), zero)
            w = [x - c * y for x, y in zip(w, u)]
        kept.append(w)
    entries = [[zero] * n for _ in range(n)]
    for w in kept:
        nrm = sum((a.conj() * a for a in w), zero).inverse()
        for i in range(n):
            for j in range(n):
                entries[i][j] = entries[i][j] + w[i] * w[j].conj() * nrm
    return ExactMatrix.from_rows([[e.trace() for e in row] for row in entries])
