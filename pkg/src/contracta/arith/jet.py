"""Truncated two-variable Taylor expansions with exact Q(i) coefficients.

A :class:`Jet2` of order ``N`` at base point ``(x0, y0)`` stores the
coefficients ``c[i, j]`` of ``(x - x0)^i (y - y0)^j`` for ``i + j <= N``.
Real and imaginary parts are kept in two flat ``mpq`` lists (the imaginary
list is ``None`` for real jets), indexed by total degree then ``j``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from gmpy2 import mpq

from ..errors import DimensionMismatch, InsufficientJetOrder, PoleAtBasePoint
from .poly import Poly
from .scalar import Scalar

_Z = mpq(0)
_ONE = mpq(1)


def size(order: int) -> int:
    return (order + 1) * (order + 2) // 2


def index(i: int, j: int) -> int:
    d = i + j
    return d * (d + 1) // 2 + j


@lru_cache(maxsize=None)
def monomials(order: int) -> tuple:
    return tuple((d - j, j) for d in range(order + 1) for j in range(d + 1))


@lru_cache(maxsize=None)
def _mul_table(order: int) -> tuple:
    mons = monomials(order)
    table = []
    for i1, j1 in mons:
        row = []
        for b, (i2, j2) in enumerate(mons):
            if i1 + j1 + i2 + j2 <= order:
                row.append((b, index(i1 + i2, j1 + j2)))
        table.append(tuple(row))
    return tuple(table)


@lru_cache(maxsize=None)
def _deriv_table(order: int, axis: int) -> tuple:
    """For each output index at order-1, the (input index, factor) pair."""
    out = []
    for i, j in monomials(order - 1):
        if axis == 0:
            out.append((index(i + 1, j), i + 1))
        else:
            out.append((index(i, j + 1), j + 1))
    return tuple(out)


def _conv(a, b, order):
    n = size(order)
    out = [_Z] * n
    nza = [k for k in range(n) if a[k]]
    nzb = [k for k in range(n) if b[k]]
    if not nza or not nzb:
        return out
    if len(nzb) < len(nza):
        a, b, nza = b, a, nzb
    table = _mul_table(order)
    for ia in nza:
        ca = a[ia]
        for ib, k in table[ia]:
            cb = b[ib]
            if cb:
                out[k] += ca * cb
    return out


def _add(a, b):
    return [x + y for x, y in zip(a, b)]


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


class Jet2:
    __slots__ = ("base", "order", "re", "im")

    def __init__(self, base, order, re, im=None):
        self.base = base
        self.order = order
        self.re = re
        if im is not None and not any(im):
            im = None
        self.im = im

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, base, order):
        return cls(base, order, [_Z] * size(order))

    @classmethod
    def constant(cls, c, base, order):
        c = Scalar.coerce(c)
        re = [_Z] * size(order)
        re[0] = c.re
        im = None
        if c.im:
            im = [_Z] * size(order)
            im[0] = c.im
        return cls(base, order, re, im)

    @classmethod
    def probe(cls, i, j, base, order):
        """Jet of ``(x - x0)^i (y - y0)^j``."""
        if i + j > order:
            raise InsufficientJetOrder(f"probe degree {i + j} exceeds order {order}")
        re = [_Z] * size(order)
        re[index(i, j)] = _ONE
        return cls(base, order, re)

    @classmethod
    def from_poly(cls, poly: Poly, base, order, xname="x", yname="y"):
        """Exact Taylor expansion of a polynomial in ``xname, yname`` at ``base``."""
        x0, y0 = (Scalar.coerce(v) for v in base)
        n = size(order)
        re = [_Z] * n
        im = [_Z] * n
        for mono, c in poly.terms.items():
            d = dict(mono)
            a = d.pop(xname, 0)
            b = d.pop(yname, 0)
            if d:
                raise ValueError(f"unbound symbols {sorted(d)} in coefficient {poly}")
            if a < 0 or b < 0:
                raise ValueError("negative exponents need from_rational")
            for i in range(min(a, order) + 1):
                cx = c * comb(a, i) * x0 ** (a - i)
                if not cx:
                    continue
                for j in range(min(b, order - i) + 1):
                    v = cx * comb(b, j) * y0 ** (b - j)
                    k = index(i, j)
                    re[k] += v.re
                    im[k] += v.im
        return cls(tuple(base), order, re, im)

    @classmethod
    def from_rational(cls, num: Poly, den: Poly, base, order, xname="x", yname="y"):
        d = cls.from_poly(den, base, order, xname, yname)
        if not d.value():
            raise PoleAtBasePoint(f"denominator {den} vanishes at {tuple(str(b) for b in base)}")
        return cls.from_poly(num, base, order, xname, yname) * d.reciprocal()

    # -- inspection -----------------------------------------------------
    def coefficient(self, i, j) -> Scalar:
        k = index(i, j)
        return Scalar._raw(self.re[k], self.im[k] if self.im is not None else _Z)

    def value(self) -> Scalar:
        return self.coefficient(0, 0)

    def is_zero(self) -> bool:
        return not any(self.re) and self.im is None

    def coefficients(self) -> dict:
        return {m: self.coefficient(*m) for m in monomials(self.order) if self.coefficient(*m)}

    def truncate(self, order) -> "Jet2":
        if order > self.order:
            raise InsufficientJetOrder(f"cannot raise order {self.order} to {order}")
        if order == self.order:
            return self
        n = size(order)
        return Jet2(self.base, order, self.re[:n], None if self.im is None else self.im[:n])

    def _align(self, other):
        if self.base != other.base:
            raise DimensionMismatch("jets at different base points")
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n), n

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Jet2):
            return self + Jet2.constant(other, self.base, self.order)
        a, b, n = self._align(other)
        re = _add(a.re, b.re)
        if a.im is None and b.im is None:
            return Jet2(a.base, n, re)
        z = [_Z] * size(n)
        return Jet2(a.base, n, re, _add(a.im or z, b.im or z))

    __radd__ = __add__

    def __neg__(self):
        return Jet2(self.base, self.order, [-x for x in self.re], None if self.im is None else [-x for x in self.im])

    def __sub__(self, other):
        if not isinstance(other, Jet2):
            return self - Jet2.constant(other, self.base, self.order)
        a, b, n = self._align(other)
        re = _sub(a.re, b.re)
        if a.im is None and b.im is None:
            return Jet2(a.base, n, re)
        z = [_Z] * size(n)
        return Jet2(a.base, n, re, _sub(a.im or z, b.im or z))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Jet2":
        c = Scalar.coerce(c)
        cr, ci = c.re, c.im
        if not ci:
            return Jet2(self.base, self.order, [cr * x for x in self.re],
                        None if self.im is None else [cr * x for x in self.im])
        if self.im is None:
            return Jet2(self.base, self.order, [cr * x for x in self.re], [ci * x for x in self.re])
        re = [cr * x - ci * y for x, y in zip(self.re, self.im)]
        im = [cr * y + ci * x for x, y in zip(self.re, self.im)]
        return Jet2(self.base, self.order, re, im)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return self.scale(other)
        a, b, n = self._align(other)
        rr = _conv(a.re, b.re, n)
        if a.im is None and b.im is None:
            return Jet2(a.base, n, rr)
        if a.im is None:
            return Jet2(a.base, n, rr, _conv(a.re, b.im, n))
        if b.im is None:
            return Jet2(a.base, n, rr, _conv(a.im, b.re, n))
        re = _sub(rr, _conv(a.im, b.im, n))
        im = _add(_conv(a.re, b.im, n), _conv(a.im, b.re, n))
        return Jet2(a.base, n, re, im)

    def __rmul__(self, other):
        return self.scale(other)

    def conjugate(self) -> "Jet2":
        """Conjugate coefficients: the jet of the complex-conjugate function."""
        return Jet2(self.base, self.order, list(self.re), None if self.im is None else [-x for x in self.im])

    def reciprocal(self) -> "Jet2":
        if self.im is not None:
            # 1/f = conj(f) / |f|^2 and |f|^2 has a real jet
            norm = self * self.conjugate()
            return self.conjugate() * Jet2(self.base, self.order, norm.re).reciprocal()
        a = self.re
        if not a[0]:
            raise PoleAtBasePoint("reciprocal of a jet vanishing at the base point")
        n = size(self.order)
        inv0 = 1 / a[0]
        g = [_Z] * n
        g[0] = inv0
        mons = monomials(self.order)
        nza = [k for k in range(1, n) if a[k]]
        for k in range(1, n):
            i, j = mons[k]
            acc = _Z
            for ka in nza:
                ia, ja = mons[ka]
                if ia <= i and ja <= j:
                    acc += a[ka] * g[index(i - ia, j - ja)]
            g[k] = -acc * inv0
        return Jet2(self.base, self.order, g)

    def partial(self, axis: int) -> "Jet2":
        if self.order < 1:
            raise InsufficientJetOrder("cannot differentiate an order-0 jet")
        table = _deriv_table(self.order, axis)
        re = [self.re[k] * f for k, f in table]
        im = None if self.im is None else [self.im[k] * f for k, f in table]
        return Jet2(self.base, self.order - 1, re, im)

    def dx(self):
        return self.partial(0)

    def dy(self):
        return self.partial(1)

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        if self.base != other.base or self.order != other.order:
            return False
        return self.re == other.re and (self.im or None) == (other.im or None)

    def __repr__(self):
        body = ", ".join(f"c{i}{j}={v}" for (i, j), v in self.coefficients().items())
        return f"Jet2(order={self.order}, {{{body}}})"


def jet_of(expr, base, order, xname="x", yname="y") -> Jet2:
    """Jet of a polynomial given as ``Poly`` or a ``(num, den)`` pair."""
    if isinstance(expr, tuple):
        return Jet2.from_rational(expr[0], expr[1], base, order, xname, yname)
    return Jet2.from_poly(Poly.coerce(expr), base, order, xname, yname)
