"""Dense exact matrices over the Gaussian rationals.

An :class:`ExactMatrix` is a Gaussian-integer matrix ``(re + i*im)`` together
with one positive common denominator. Entries are Python ints held in numpy
``object`` arrays, so numpy does the looping while Python does the bignum
arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .gaussian import GaussianRational, ZERO

__all__ = ["ExactMatrix"]


def _int_array(rows) -> np.ndarray:
    arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            arr[i, j] = v
    return arr


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class ExactMatrix:
    __slots__ = ("re", "im", "den")

    def __init__(self, re: np.ndarray, im: np.ndarray | None = None, den: int = 1, *, reduce_: bool = True):
        if im is None:
            im = np.zeros(re.shape, dtype=object)
            im.fill(0)
        if den <= 0:
            raise ValueError("denominator must be positive")
        if reduce_:
            g = den
            for v in re.flat:
                if g == 1:
                    break
                g = gcd(g, v)
            for v in im.flat:
                if g == 1:
                    break
                g = gcd(g, v)
            if g > 1:
                re = re // g
                im = im // g
                den //= g
        self.re = re
        self.im = im
        self.den = den

    # construction -----------------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        entries = [[GaussianRational.coerce(v) for v in row] for row in rows]
        if not entries or any(len(r) != len(entries[0]) for r in entries):
            raise ValueError("matrix must be rectangular and non-empty")
        den = 1
        for row in entries:
            for z in row:
                den = _lcm(den, z.den)
        re = _int_array([[z.a * (den // z.den) for z in row] for row in entries])
        im = _int_array([[z.b * (den // z.den) for z in row] for row in entries])
        return cls(re, im, den)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        z = np.empty((rows, cols), dtype=object)
        z.fill(0)
        return cls(z, z.copy(), 1, reduce_=False)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        m = cls.zeros(n)
        for i in range(n):
            m.re[i, i] = 1
        return m

    @classmethod
    def diag(cls, values: Iterable) -> "ExactMatrix":
        vals = [GaussianRational.coerce(v) for v in values]
        rows = [[vals[i] if i == j else ZERO for j in range(len(vals))] for i in range(len(vals))]
        return cls.from_rows(rows)

    @classmethod
    def column(cls, values: Iterable) -> "ExactMatrix":
        return cls.from_rows([[v] for v in values])

    # access --------------------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.re.shape

    @property
    def rows(self) -> int:
        return self.re.shape[0]

    @property
    def cols(self) -> int:
        return self.re.shape[1]

    def __getitem__(self, idx) -> GaussianRational:
        i, j = idx
        return GaussianRational(self.re[i, j], self.im[i, j], self.den)

    def to_rows(self) -> list[list[GaussianRational]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_real(self) -> bool:
        return all(v == 0 for v in self.im.flat)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.re.flat) and all(v == 0 for v in self.im.flat)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape or self.den != other.den:
            return False
        return bool(np.all(self.re == other.re)) and bool(np.all(self.im == other.im))

    def __hash__(self):
        return hash((self.den, tuple(self.re.flat), tuple(self.im.flat)))

    def key(self) -> tuple:
        """Hashable, totally ordered canonical key (row-major (re, im) entries)."""
        out = []
        for a, b in zip(self.re.flat, self.im.flat):
            out.append(Fraction(a, self.den))
            out.append(Fraction(b, self.den))
        return tuple(out)

    def __repr__(self):
        body = "; ".join(", ".join(str(self[i, j]) for j in range(self.cols)) for i in range(self.rows))
        return f"ExactMatrix([{body}])"

    # arithmetic -------------------------------------------------------------------

    def _aligned(self, other: "ExactMatrix"):
        if self.den == other.den:
            return self.re, self.im, other.re, other.im, self.den
        den = _lcm(self.den, other.den)
        s, t = den // self.den, den // other.den
        return self.re * s, self.im * s, other.re * t, other.im * t, den

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b, c, d, den = self._aligned(other)
        return ExactMatrix(a + c, b + d, den)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b, c, d, den = self._aligned(other)
        return ExactMatrix(a - c, b - d, den)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(-self.re, -self.im, self.den, reduce_=False)

    def scale(self, z) -> "ExactMatrix":
        z = GaussianRational.coerce(z)
        return ExactMatrix(self.re * z.a - self.im * z.b, self.re * z.b + self.im * z.a, self.den * z.den)

    def __mul__(self, z):
        if isinstance(z, ExactMatrix):
            return NotImplemented
        return self.scale(z)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, b, c, d = self.re, self.im, other.re, other.im
        if not other.im.any():
            re, im = a.dot(c), b.dot(c)
        elif not self.im.any():
            re, im = a.dot(c), a.dot(d)
        else:
            ac, bd = a.dot(c), b.dot(d)
            re = ac - bd
            im = (a + b).dot(c + d) - ac - bd
        return ExactMatrix(re, im, self.den * other.den)

    def dagger(self) -> "ExactMatrix":
        return ExactMatrix(self.re.T.copy(), -self.im.T, self.den, reduce_=False)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.re.T.copy(), self.im.T.copy(), self.den, reduce_=False)

    def conj(self) -> "ExactMatrix":
        return ExactMatrix(self.re.copy(), -self.im, self.den, reduce_=False)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b, c, d = self.re, self.im, other.re, other.im
        return ExactMatrix(np.kron(a, c) - np.kron(b, d), np.kron(a, d) + np.kron(b, c), self.den * other.den)

    def trace(self) -> GaussianRational:
        n = min(self.shape)
        return GaussianRational(sum(self.re[i, i] for i in range(n)), sum(self.im[i, i] for i in range(n)), self.den)

    def commutator(self, other: "ExactMatrix") -> "ExactMatrix":
        return self @ other - other @ self

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and bool(np.all(self.re == self.re.T)) and bool(np.all(self.im == -self.im.T))

    def is_projector(self) -> bool:
        return self.is_hermitian() and self @ self == self

    def rank_one_vector(self) -> "ExactMatrix":
        """A nonzero column of a rank-one matrix, as a column vector."""
        for j in range(self.cols):
            if self.re[:, j].any() or self.im[:, j].any():
                return ExactMatrix(self.re[:, j:j + 1].copy(), self.im[:, j:j + 1].copy(), self.den)
        raise ValueError("zero matrix has no column space")

    def submatrix(self, rows, cols) -> "ExactMatrix":
        ix = np.ix_(list(rows), list(cols))
        return ExactMatrix(self.re[ix].copy(), self.im[ix].copy(), self.den)

    @classmethod
    def kron_all(cls, mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        return reduce(lambda x, y: x.kron(y), mats)


def outer(u: ExactMatrix, v: ExactMatrix) -> ExactMatrix:
    """|u><v| for column vectors."""
    return u @ v.dagger()


def inner(u: ExactMatrix, v: ExactMatrix) -> GaussianRational:
    """<u|v> for column vectors (conjugate-linear in the first slot)."""
    return (u.dagger() @ v)[0, 0]
