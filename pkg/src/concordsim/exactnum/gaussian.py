"""Exact rationals and Gaussian rationals.

Rationals are ``fractions.Fraction``. A :class:`GaussianRational` stores
``(a + b i) / den`` with integers ``a, b`` and ``den > 0`` in lowest terms,
which keeps every arithmetic operation down to a handful of integer
multiplications and one gcd.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

__all__ = [
    "GaussianRational",
    "format_rational",
    "parse_rational",
    "as_fraction",
    "ZERO",
    "ONE",
    "I",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


_RAT = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    m = _RAT.match(text.strip())
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_GAUSS = re.compile(r"^([+-]?\d+(?:/\d+)?)(?:([+-])(\d+(?:/\d+)?) i)?$")


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("a", "b", "den")

    def __init__(self, a: int = 0, b: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            a, b, den = -a, -b, -den
        g = gcd(a, b, den)
        if g > 1:
            a //= g
            b //= g
            den //= g
        self.a = a
        self.b = b
        self.den = den

    @classmethod
    def _raw(cls, a: int, b: int, den: int) -> "GaussianRational":
        # caller guarantees lowest terms and den > 0
        obj = object.__new__(cls)
        obj.a = a
        obj.b = b
        obj.den = den
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, x.denominator)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    @classmethod
    def from_parts(cls, re_part, im_part=0) -> "GaussianRational":
        r = as_fraction(re_part)
        s = as_fraction(im_part)
        den = r.denominator * s.denominator // gcd(r.denominator, s.denominator)
        return cls(r.numerator * (den // r.denominator), s.numerator * (den // s.denominator), den)

    @property
    def real(self) -> Fraction:
        return Fraction(self.a, self.den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.b, self.den)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_real(self) -> bool:
        return self.b == 0

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self.a, -self.b, self.den)

    def norm2(self) -> Fraction:
        """|z|^2 as a rational."""
        return Fraction(self.a * self.a + self.b * self.b, self.den * self.den)

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        if self.den == other.den:
            return GaussianRational(self.a + other.a, self.b + other.b, self.den)
        return GaussianRational(
            self.a * other.den + other.a * self.den,
            self.b * other.den + other.b * self.den,
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.a, -self.b, self.den)

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational(
            self.a * other.a - self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.den * other.den,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1/((a+bi)/d) = d (a - bi) / (a^2 + b^2)
        return GaussianRational(self.den * self.a, -self.den * self.b, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.a == other.a and self.b == other.b and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and Fraction(self.a, self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.den))
        return hash((self.a, self.b, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return self.format()

    def format(self) -> str:
        """Canonical text: ``p/q`` or ``p/q+r/s i`` (explicit sign on the imaginary part)."""
        re_s = format_rational(self.real)
        if self.b == 0:
            return re_s
        im = self.imag
        sign = "+" if im > 0 else "-"
        return f"{re_s}{sign}{format_rational(abs(im))} i"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        m = _GAUSS.match(text.strip())
        if not m:
            raise ValueError(f"malformed Gaussian rational {text!r}")
        re_part = parse_rational(m.group(1))
        im_part = Fraction(0)
        if m.group(2):
            im_part = parse_rational(m.group(3))
            if m.group(2) == "-":
                im_part = -im_part
        return cls.from_parts(re_part, im_part)


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)
