"""Real root isolation and arithmetic on real algebraic numbers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional

from .poly import IntPolynomial, SturmChain, cauchy_bound, charpoly, poly_gcd, squarefree_part, sturm_chain

__all__ = [
    "AlgebraicNumber",
    "isolate_real_roots",
    "refine_interval",
    "algebraic_add",
    "algebraic_mul",
    "algebraic_neg",
    "algebraic_recip",
    "algebraic_compare",
]

@dataclass(frozen=True)
class AlgebraicNumber:
    """A real root of a square-free integer polynomial, located by (lo, hi].

    Irrational roots keep both endpoints away from every root of the defining
    polynomial, so the open interval (lo, hi) isolates them as well.
    Rational roots carry ``exact`` and use the defining polynomial q*x - p.
    """

    defining: IntPolynomial
    lo: Fraction
    hi: Fraction
    exact: Optional[Fraction] = None
    _chain: SturmChain | None = field(default=None, compare=False, repr=False)

    @classmethod
    def rational(cls, r) -> "AlgebraicNumber":
        r = Fraction(r)
        return cls(IntPolynomial((-r.numerator, r.denominator)), r - 1, r, r)

    @property
    def chain(self) -> SturmChain:
        if self._chain is None:
            object.__setattr__(self, "_chain", sturm_chain(self.defining))
        return self._chain

    @property
    def degree(self) -> int:
        return self.defining.degree

    def is_rational(self) -> bool:
        return self.exact is not None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def sign(self) -> int:
        if self.exact is not None:
            return (self.exact > 0) - (self.exact < 0)
        a = self
        while a.lo < 0 < a.hi:
            a = a.bisect()
        return 1 if a.lo >= 0 else -1

    def bisect(self) -> "AlgebraicNumber":
        """Halve the interval (no-op for rationals)."""
        if self.exact is not None:
            return self
        mid = (self.lo + self.hi) / 2
        s_hi = self.defining.sign_at(self.hi)
        if self.defining.sign_at(mid) == s_hi:
            return AlgebraicNumber(self.defining, self.lo, mid, None, self._chain)
        return AlgebraicNumber(self.defining, mid, self.hi, None, self._chain)

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        a = refine_interval(self, Fraction(1, 2**60))
        return float((a.lo + a.hi) / 2)

    def to_json(self) -> dict:
        from .gaussian import format_rational

        return {
            "defining": [str(c) for c in self.defining.coeffs],
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
        }

    def __repr__(self):
        if self.exact is not None:
            return f"AlgebraicNumber({self.exact})"
        return f"AlgebraicNumber(root of {self.defining} in ({self.lo}, {self.hi}])"

    # operators delegate to the module functions
    def __add__(self, other):
        return algebraic_add(self, _lift(other))

    __radd__ = __add__

    def __neg__(self):
        return algebraic_neg(self)

    def __sub__(self, other):
        return algebraic_add(self, algebraic_neg(_lift(other)))

    def __rsub__(self, other):
        return algebraic_add(_lift(other), algebraic_neg(self))

    def __mul__(self, other):
        return algebraic_mul(self, _lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return algebraic_mul(self, algebraic_recip(_lift(other)))

    def __rtruediv__(self, other):
        return algebraic_mul(_lift(other), algebraic_recip(self))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return algebraic_compare(self, _lift(other)) == 0
        return NotImplemented

    def __hash__(self):
        if self.exact is not None:
            return hash(self.exact)
        a = self
        while floor(a.lo) != floor(a.hi) or a.hi == floor(a.hi):
            a = a.bisect()
        return hash(("algebraic", floor(a.lo)))

    def __lt__(self, other):
        return algebraic_compare(self, _lift(other)) < 0

    def __le__(self, other):
        return algebraic_compare(self, _lift(other)) <= 0

    def __gt__(self, other):
        return algebraic_compare(self, _lift(other)) > 0

    def __ge__(self, other):
        return algebraic_compare(self, _lift(other)) >= 0


def _lift(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicNumber.rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an algebraic number")


def _roots_in_open(chain: SturmChain, f: IntPolynomial, lo: Fraction, hi: Fraction) -> int:
    n = chain.count(lo, hi)
    if f.sign_at(hi) == 0:
        n -= 1
    return n


def _finish(f: IntPolynomial, chain: SturmChain, lo: Fraction, hi: Fraction) -> AlgebraicNumber:
    """The unique root of square-free ``f`` in the open interval (lo, hi).

    While an endpoint is itself a root, halves with Sturm counts; after that the
    root is simple with a sign change across the interval, so bisection needs a
    single sign evaluation per step. Narrows until the rational-root test applies
    (a rational root p/q has q dividing the leading coefficient).
    """
    lc = abs(f.lc)
    target = Fraction(1, 2 * lc * lc)
    s_lo, s_hi = f.sign_at(lo), f.sign_at(hi)
    while s_lo == 0 or s_hi == 0:
        mid = (lo + hi) / 2
        s_mid = f.sign_at(mid)
        if s_mid == 0:
            return AlgebraicNumber.rational(mid)
        if chain.count(lo, mid) == 1:
            hi, s_hi = mid, s_mid
        else:
            lo, s_lo = mid, s_mid
    while hi - lo >= target:
        mid = (lo + hi) / 2
        s_mid = f.sign_at(mid)
        if s_mid == 0:
            return AlgebraicNumber.rational(mid)
        if s_mid == s_hi:
            hi = mid
        else:
            lo = mid
    cand = ((lo + hi) / 2).limit_denominator(lc)
    if lo < cand < hi and f.sign_at(cand) == 0:
        return AlgebraicNumber.rational(cand)
    return AlgebraicNumber(f, lo, hi, None, chain)


def isolate_real_roots(p: IntPolynomial) -> list[AlgebraicNumber]:
    """Every distinct real root of ``p``, increasing, each exactly once."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if p.degree <= 0:
        return []
    f = squarefree_part(p)
    chain = sturm_chain(f)
    bound = cauchy_bound(f)
    found: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = chain.count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            found.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    found.sort()
    roots = []
    for lo, hi in found:
        if f.sign_at(hi) == 0:
            roots.append(AlgebraicNumber.rational(hi))
        else:
            roots.append(_finish(f, chain, lo, hi))
    return roots


def refine_interval(a: AlgebraicNumber, width) -> AlgebraicNumber:
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if a.exact is not None:
        return a
    while a.width > width:
        a = a.bisect()
    return a


def algebraic_neg(a: AlgebraicNumber) -> AlgebraicNumber:
    if a.exact is not None:
        return AlgebraicNumber.rational(-a.exact)
    f = IntPolynomial(tuple(c if i % 2 == 0 else -c for i, c in enumerate(a.defining.coeffs)))
    return AlgebraicNumber(f, -a.hi, -a.lo)


def algebraic_recip(a: AlgebraicNumber) -> AlgebraicNumber:
    if a.exact is not None:
        if a.exact == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return AlgebraicNumber.rational(1 / a.exact)
    while a.lo <= 0 <= a.hi:
        a = a.bisect()
    f = a.defining.reversed()
    return AlgebraicNumber(f, 1 / a.hi, 1 / a.lo)


def _monic_companion(f: IntPolynomial) -> tuple[list[list[int]], int]:
    """Companion matrix of the monic integer polynomial with roots c*alpha, and c = lc."""
    c = f.lc
    n = f.degree
    # F(y) = c^(n-1) f(y/c) = y^n + sum_{k<n} a_k c^(n-1-k) y^k
    coeffs = [f.coeffs[k] * c ** (n - 1 - k) for k in range(n)]
    C = [[0] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = 1
    for i in range(n):
        C[i][n - 1] = -coeffs[i]
    return C, c


def _combine(a: AlgebraicNumber, b: AlgebraicNumber, op: str) -> AlgebraicNumber:
    Ca, ca = _monic_companion(a.defining)
    Cb, cb = _monic_companion(b.defining)
    n, m = len(Ca), len(Cb)
    N = n * m
    K = [[0] * N for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    v = 0
                    if op == "add":
                        if k == l:
                            v += cb * Ca[i][j]
                        if i == j:
                            v += ca * Cb[k][l]
                    else:
                        v = Ca[i][j] * Cb[k][l]
                    if v:
                        K[i * m + k][j * m + l] = v
    h = IntPolynomial(tuple(charpoly(K)))
    # eigenvalues are ca*cb*(a+b) for "add" and ca*cb*(a*b) for "mul"
    h = squarefree_part(h.compose_linear(Fraction(ca * cb), Fraction(0)))
    chain = sturm_chain(h)
    while True:
        if op == "add":
            lo, hi = a.lo + b.lo, a.hi + b.hi
        else:
            prods = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
            lo, hi = min(prods), max(prods)
        if lo < hi and _roots_in_open(chain, h, lo, hi) == 1:
            return _finish(h, chain, lo, hi)
        a, b = a.bisect(), b.bisect()


def algebraic_add(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    if a.exact is not None and b.exact is not None:
        return AlgebraicNumber.rational(a.exact + b.exact)
    if b.exact is not None:
        a, b = b, a
    if a.exact is not None:
        r = a.exact
        if r == 0:
            return b
        return AlgebraicNumber(b.defining.compose_linear(Fraction(1), -r), b.lo + r, b.hi + r)
    return _combine(a, b, "add")


def algebraic_mul(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    if a.exact is not None and b.exact is not None:
        return AlgebraicNumber.rational(a.exact * b.exact)
    if b.exact is not None:
        a, b = b, a
    if a.exact is not None:
        r = a.exact
        if r == 0:
            return AlgebraicNumber.rational(0)
        f = b.defining.compose_linear(1 / r, Fraction(0))
        lo, hi = sorted((b.lo * r, b.hi * r))
        return AlgebraicNumber(f, lo, hi)
    return _combine(a, b, "mul")


def _compare_rational(a: AlgebraicNumber, r: Fraction) -> int:
    if a.exact is not None:
        return (a.exact > r) - (a.exact < r)
    # irrational: never equal to r, refine until r leaves (lo, hi)
    while a.lo < r < a.hi:
        a = a.bisect()
    return 1 if r <= a.lo else -1


def algebraic_compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """-1, 0 or 1 as a <, =, > b; exact."""
    if b.exact is not None:
        return _compare_rational(a, b.exact)
    if a.exact is not None:
        return -_compare_rational(b, a.exact)
    g = poly_gcd(a.defining, b.defining)
    if g.degree >= 1:
        gc = sturm_chain(g)
        if _roots_in_open(gc, g, a.lo, a.hi) == 1:
            # a is a root of g, hence of b's polynomial; equal iff a lies in b's interval
            if _compare_rational(a, b.lo) > 0 and _compare_rational(a, b.hi) < 0:
                return 0
    while not (a.hi <= b.lo or b.hi <= a.lo):
        a, b = a.bisect(), b.bisect()
    return -1 if a.hi <= b.lo else 1
