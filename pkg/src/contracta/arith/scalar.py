"""Gaussian rationals: exact numbers ``re + im*i`` with ``re, im`` in Q."""

from __future__ import annotations

import re as _re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

_MPQ = type(mpq(0))
_ZERO = mpq(0)

_TERM = _re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(\*?\s*i)?")


def to_mpq(value) -> mpq:
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Rational):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip())
    raise TypeError(f"cannot convert {value!r} to a rational")


def _fmt(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Element of Q(i); immutable, hashable, exact."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_mpq(re))
        object.__setattr__(self, "im", to_mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls._raw(to_mpq(value), _ZERO)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"p/q"``, ``"p/q+r/s*i"``, ``"i"``, ``"-3/2*i"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar literal")
        re_part = _ZERO
        im_part = _ZERO
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"bad scalar literal {text!r}")
            sign, num, imag = m.groups()
            if num is None and imag is None:
                raise ValueError(f"bad scalar literal {text!r}")
            val = mpq(num) if num is not None else mpq(1)
            if sign == "-":
                val = -val
            if imag:
                im_part += val
            else:
                re_part += val
            pos = m.end()
        return cls._raw(re_part, im_part)

    # -- predicates -----------------------------------------------------
    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    # -- arithmetic -----------------------------------------------------
    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction, _MPQ)):
            return Scalar._raw(self.re + to_mpq(other), self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction, _MPQ)):
            return Scalar._raw(self.re - to_mpq(other), self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction, _MPQ)):
            return Scalar._raw(to_mpq(other) - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return Scalar._raw(a * c, _ZERO)
            return Scalar._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction, _MPQ)):
            q = to_mpq(other)
            return Scalar._raw(self.re * q, self.im * q)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    def norm2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "Scalar":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * other.inverse()
        if isinstance(other, (int, Fraction, _MPQ)):
            q = to_mpq(other)
            if not q:
                raise ZeroDivisionError("division by zero")
            return Scalar._raw(self.re / q, self.im / q)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, _MPQ)):
            return Scalar.coerce(other) * self.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __abs__(self):
        if self.im:
            raise ValueError("abs of non-real Scalar is not rational")
        return Scalar._raw(abs(self.re), _ZERO)

    def to_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"{self} is not real")
        return Fraction(int(self.re.numerator), int(self.re.denominator))

    def __float__(self):
        if self.im:
            raise ValueError(f"{self} is not real")
        return float(self.re)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return _fmt(self.re)
        if not self.re:
            return f"{_fmt(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{_fmt(self.re)}{sign}{_fmt(abs(self.im))}*i"

    def __repr__(self):
        return f"Scalar('{self}')"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
