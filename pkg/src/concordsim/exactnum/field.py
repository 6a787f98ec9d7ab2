"""Elements of Q(i)(lambda) for a real algebraic lambda, as residues modulo its polynomial."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .gaussian import GaussianRational, ZERO, ONE
from .poly import IntPolynomial
from .roots import AlgebraicNumber

__all__ = ["FieldElement", "ReducibleModulus", "power_sums"]


class ReducibleModulus(ArithmeticError):
    """Raised when inversion exposes a proper factor of the modulus."""

    def __init__(self, factor: list):
        super().__init__("modulus is reducible")
        self.factor = factor


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [ZERO] * (n - len(a))
    b = b + [ZERO] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    if len(a) < len(b):
        return [], _trim(a)
    q = [ZERO] * (len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv
        q[k] = c
        if c != 0:
            for j, y in enumerate(b):
                a[k + j] = a[k + j] - c * y
    return _trim(q), _trim(a[: len(b) - 1])


def power_sums(g: IntPolynomial, count: int) -> list[Fraction]:
    """p_k = sum of k-th powers of the roots of g, for k < count (Newton's identities)."""
    n = g.degree
    lc = Fraction(g.lc)
    # monic: x^n + e'_1 x^(n-1) + ... with a_j = coeff of x^(n-j)
    a = [Fraction(g.coeffs[n - j]) / lc for j in range(n + 1)]
    p = [Fraction(n)]
    for k in range(1, count):
        s = Fraction(0)
        for j in range(1, min(k, n) + 1):
            if j < k:
                s += a[j] * p[k - j]
        if k <= n:
            s += k * a[k]
        p.append(-s)
    return p


class FieldElement:
    """Polynomial in lambda with Gaussian-rational coefficients, reduced mod the generator."""

    __slots__ = ("generator", "poly", "_mod")

    def __init__(self, generator: AlgebraicNumber, poly: Sequence = (), _mod: list | None = None):
        self.generator = generator
        self._mod = _mod if _mod is not None else [GaussianRational.coerce(c) for c in generator.defining.coeffs]
        p = _trim([GaussianRational.coerce(c) for c in poly])
        if len(p) >= len(self._mod):
            p = _pdivmod(p, self._mod)[1]
        self.poly = p

    def _new(self, poly) -> "FieldElement":
        return FieldElement(self.generator, poly, self._mod)

    @classmethod
    def generator_element(cls, generator: AlgebraicNumber) -> "FieldElement":
        return cls(generator, [ZERO, ONE])

    def lift(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        return self._new([GaussianRational.coerce(x)])

    def is_zero(self) -> bool:
        return not self.poly

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.poly == other.poly
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if other == 0:
            return not self.poly
        return self.poly == [other]

    def __hash__(self):
        return hash(tuple(self.poly))

    def __bool__(self):
        return bool(self.poly)

    def __add__(self, other):
        other = self.lift(other)
        n = max(len(self.poly), len(other.poly))
        a = self.poly + [ZERO] * (n - len(self.poly))
        b = other.poly + [ZERO] * (n - len(other.poly))
        return self._new([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([-x for x in self.poly])

    def __sub__(self, other):
        return self + (-self.lift(other))

    def __rsub__(self, other):
        return self.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            z = GaussianRational.coerce(other)
            return self._new([x * z for x in self.poly])
        return self._new(_pmul(self.poly, other.poly))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.poly:
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid: s*a + t*m = gcd
        r0, r1 = list(self._mod), list(self.poly)
        s0, s1 = [], [ONE]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if len(r0) > 1:
            raise ReducibleModulus(r0)
        c = 1 / r0[0]
        return self._new([x * c for x in s0])

    def __truediv__(self, other):
        return self * self.lift(other).inverse()

    def __rtruediv__(self, other):
        return self.lift(other) * self.inverse()

    def conj(self) -> "FieldElement":
        """Complex conjugate; lambda is real so only coefficients conjugate."""
        return self._new([x.conj() for x in self.poly])

    def trace(self) -> GaussianRational:
        """Sum of the images under every embedding lambda -> lambda' (roots of the modulus)."""
        ps = power_sums(self.generator.defining, max(len(self.poly), 1))
        acc = ZERO
        for c, p in zip(self.poly, ps):
            acc = acc + c * p
        return acc

    def __repr__(self):
        terms = " + ".join(f"({c})*L^{k}" for k, c in enumerate(self.poly)) or "0"
        return f"FieldElement({terms})"
