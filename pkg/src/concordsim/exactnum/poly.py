"""Univariate integer polynomials, Sturm chains and characteristic polynomials.

Coefficient lists are lowest degree first. Integer polynomials are kept
primitive where the sign and content do not matter (square-free parts, gcds).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

__all__ = [
    "IntPolynomial",
    "SturmChain",
    "sturm_chain",
    "poly_gcd",
    "squarefree_part",
    "charpoly",
    "cauchy_bound",
]


def _strip(c: list) -> list:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = _strip([int(v) for v in self.coeffs] or [0])
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_rational(cls, coeffs: Sequence) -> "IntPolynomial":
        """Clear denominators of a rational coefficient list (positive scaling)."""
        fr = [Fraction(c) for c in coeffs]
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        return cls(tuple(int(f * den) for f in fr))

    @classmethod
    def from_roots_linear(cls, r: Fraction) -> "IntPolynomial":
        return cls((-r.numerator, r.denominator))

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @property
    def lc(self) -> int:
        return self.coeffs[-1]

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def primitive(self) -> "IntPolynomial":
        """Divide by the content and make the leading coefficient positive."""
        if self.is_zero():
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def derivative(self) -> "IntPolynomial":
        if len(self.coeffs) == 1:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Fraction) -> int:
        """Sign of p(x) for rational x, using homogeneous integer evaluation."""
        p, q = x.numerator, x.denominator
        # Horner on sum c_i p^i q^(n-i), which has the sign of p(p/q) since q > 0
        acc = 0
        qp = 1
        for c in reversed(self.coeffs):
            acc = acc * p + c * qp
            qp *= q
        return (acc > 0) - (acc < 0)

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __add__(self, other: "IntPolynomial"):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "IntPolynomial"):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def compose_linear(self, a: Fraction, b: Fraction) -> "IntPolynomial":
        """Integer polynomial with the roots of p(a*x + b), up to positive scaling."""
        a, b = Fraction(a), Fraction(b)
        if b == 0 and a != 0:
            # q^n p(p'/q x) = sum c_i p'^i q^(n-i) x^i stays integral
            num, den, n = a.numerator, a.denominator, len(self.coeffs) - 1
            return IntPolynomial.from_rational([c * num**i * den ** (n - i) for i, c in enumerate(self.coeffs)])
        acc = [Fraction(0)]
        for c in reversed(self.coeffs):
            nxt = [Fraction(0)] * (len(acc) + 1)
            for i, v in enumerate(acc):
                nxt[i] += v * b
                nxt[i + 1] += v * a
            nxt[0] += c
            acc = nxt
        return IntPolynomial.from_rational(acc)

    def reversed(self) -> "IntPolynomial":
        """x^n p(1/x): roots are the reciprocals of the nonzero roots."""
        c = list(self.coeffs)
        while c and c[0] == 0:
            c.pop(0)
        return IntPolynomial(tuple(reversed(c)))

    def divmod_rational(self, other: "IntPolynomial") -> tuple[list[Fraction], list[Fraction]]:
        return _divmod_q([Fraction(c) for c in self.coeffs], [Fraction(c) for c in other.coeffs])

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        q, r = self.divmod_rational(other)
        if any(r):
            raise ArithmeticError("polynomial division is not exact")
        return IntPolynomial.from_rational(q)

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0 and len(self.coeffs) > 1:
                continue
            terms.append(f"{c}" + ("" if i == 0 else ("*x" if i == 1 else f"*x^{i}")))
        return " + ".join(terms) if terms else "0"


def _divmod_q(a: list, b: list):
    a = list(a)
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lb = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1] / lb
        q[k] = coef
        if coef:
            for j, bj in enumerate(b):
                a[k + j] -= coef * bj
    r = a[: len(b) - 1] or [Fraction(0)]
    while len(r) > 1 and r[-1] == 0:
        r.pop()
    return q, r


def _prem(a: tuple, b: tuple) -> tuple[list[int], int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, with the power used."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    delta = len(a) - len(b) + 1
    e = delta
    while len(r) - 1 >= db and any(r):
        dr = len(r) - 1
        c = r[-1]
        r = [lb * x for x in r]
        for j, bj in enumerate(b):
            r[dr - db + j] -= c * bj
        r.pop()
        e -= 1
        while len(r) > 1 and r[-1] == 0:
            r.pop()
            if len(r) - 1 < db:
                break
    if e > 0:
        f = lb ** e
        r = [f * x for x in r]
    return _strip(r or [0]), delta


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z[x] (primitive PRS)."""
    a, b = p.primitive(), q.primitive()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r, _ = _prem(a.coeffs, b.coeffs)
        a, b = b, IntPolynomial(tuple(r)).primitive()
    return a.primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero():
        raise ValueError("zero polynomial has no square-free part")
    if p.degree <= 0:
        return IntPolynomial((1,))
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return p.primitive()
    return p.exact_div(g).primitive()


@dataclass(frozen=True)
class SturmChain:
    polynomials: tuple[IntPolynomial, ...]

    def variations(self, x: Fraction) -> int:
        signs = [s for s in (p.sign_at(x) for p in self.polynomials) if s != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct real roots in (lo, hi]."""
        return self.variations(lo) - self.variations(hi)

    def __len__(self):
        return len(self.polynomials)


def sturm_chain(p: IntPolynomial) -> SturmChain:
    """Sturm sequence of the square-free part of ``p``.

    Each term is minus the remainder of the previous two, scaled by a positive
    integer (pseudo-remainder sign corrected, then content removed), so sign
    variations are those of the classical sequence.
    """
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    f = p if p.degree <= 0 or poly_gcd(p, p.derivative()).degree == 0 else squarefree_part(p)
    chain = [f]
    if f.degree == 0:
        return SturmChain(tuple(chain))
    a, b = f, f.derivative()
    chain.append(b)
    while b.degree > 0:
        r, delta = _prem(a.coeffs, b.coeffs)
        nxt = IntPolynomial(tuple(r))
        if nxt.is_zero():
            break
        flip = -1 if (b.lc < 0 and delta % 2 == 1) else 1
        g = nxt.content()
        nxt = IntPolynomial(tuple(-flip * c // g for c in nxt.coeffs))
        chain.append(nxt)
        a, b = b, nxt
    return SturmChain(tuple(chain))


def cauchy_bound(p: IntPolynomial) -> Fraction:
    """Power of two strictly exceeding every root's absolute value (Cauchy's bound)."""
    lc = abs(p.lc)
    m = max((abs(c) for c in p.coeffs[:-1]), default=0)
    bound = 1 + Fraction(m, lc)
    k = 0
    while Fraction(2) ** k <= bound:
        k += 1
    return Fraction(2) ** k


def charpoly(matrix: Sequence[Sequence], one=1) -> list:
    """Characteristic polynomial det(xI - A), lowest degree first (Faddeev-LeVerrier).

    Works over any exact ring of characteristic zero whose elements support
    ``+ - *`` and exact division by ints (ints with exact ``//``, Fractions,
    Gaussian rationals).
    """
    n = len(matrix)
    A = [list(r) for r in matrix]
    zero = one - one
    integral = isinstance(one, int)
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    Mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = _matmul(A, Mk, zero)
        for i in range(n):
            prod[i][i] = prod[i][i] + coeffs[n - k + 1]
        Mk = prod
        AM = _matmul(A, Mk, zero)
        tr = zero
        for i in range(n):
            tr = tr + AM[i][i]
        if integral:
            if tr % k:
                raise ArithmeticError("non-integral Faddeev-LeVerrier step")
            coeffs[n - k] = -(tr // k)
        else:
            coeffs[n - k] = -tr / k
    return coeffs


def _matmul(A, B, zero):
    n, m, p = len(A), len(B), len(B[0])
    out = [[zero] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for k in range(m):
            a = Ai[k]
            if a == 0:
                continue
            Bk = B[k]
            for j in range(p):
                if Bk[j] != 0:
                    row[j] = row[j] + a * Bk[j]
    return out
