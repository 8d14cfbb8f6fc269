"""Laurent polynomials in the contraction parameter and their eps -> 0 limits."""

from __future__ import annotations

from ..errors import DivergentLimit, NotInvertible
from .poly import Poly, _NUMBER
from .scalar import Scalar

EPS = "eps"


class EpsSeries:
    """Finite sum ``sum_k c_k eps^k`` with Poly coefficients (negative k allowed)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Poly.coerce(c)
            if c:
                clean[int(k)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("EpsSeries is immutable")

    @classmethod
    def from_poly(cls, p, symbol: str = EPS) -> "EpsSeries":
        return cls(Poly.coerce(p).by_power(symbol))

    @classmethod
    def eps(cls, power: int = 1) -> "EpsSeries":
        return cls({power: 1})

    @classmethod
    def coerce(cls, value) -> "EpsSeries":
        if isinstance(value, EpsSeries):
            return value
        if isinstance(value, Poly):
            return cls.from_poly(value)
        if isinstance(value, _NUMBER):
            return cls({0: value})
        raise TypeError(f"cannot coerce {value!r} to EpsSeries")

    def to_poly(self, symbol: str = EPS) -> Poly:
        out = Poly.const(0)
        for k, c in self.terms.items():
            out = out + c * Poly.var(symbol, k)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        """Lowest exponent present; raises on the zero series."""
        if not self.terms:
            raise ValueError("order of zero series")
        return min(self.terms)

    def coefficient(self, k: int) -> Poly:
        return self.terms.get(k, Poly.const(0))

    def __neg__(self):
        return EpsSeries({k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        try:
            other = EpsSeries.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return EpsSeries(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = EpsSeries.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return EpsSeries.coerce(other) - self

    def __mul__(self, other):
        try:
            other = EpsSeries.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return EpsSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Exact division by a single-term series (c * eps^k, c a nonzero scalar)."""
        other = EpsSeries.coerce(other)
        if len(other.terms) != 1:
            raise NotInvertible(f"cannot divide exactly by {other}")
        (k, c), = other.terms.items()
        if not c.is_constant():
            raise NotInvertible(f"coefficient {c} is not a scalar")
        inv = c.as_scalar().inverse()
        return EpsSeries({j - k: v * inv for j, v in self.terms.items()})

    def __pow__(self, n: int):
        result = EpsSeries({0: 1})
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            other = EpsSeries.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return str(self.to_poly())

    def __repr__(self):
        return f"EpsSeries('{self}')"


def _as_series(s) -> EpsSeries:
    return EpsSeries.coerce(s)


def eps_limit(s, where=None) -> Poly:
    """The eps -> 0 limit: the constant coefficient, if no negative power survives."""
    s = _as_series(s)
    neg = [k for k in s.terms if k < 0]
    if neg:
        raise DivergentLimit(min(neg), where)
    return s.coefficient(0)


def ratio_limit(num, den, where=None) -> Poly:
    """Limit of ``num/den`` as eps -> 0 for Laurent polynomials ``num``, ``den``.

    The leading (lowest-order) coefficient of ``den`` must be a nonzero scalar.
    """
    num = _as_series(num)
    den = _as_series(den)
    if not den:
        raise NotInvertible("denominator is identically zero")
    k = den.order()
    lead = den.coefficient(k)
    if not lead.is_constant():
        raise NotInvertible(f"leading coefficient {lead} is not a scalar")
    if not num:
        return Poly.const(0)
    j = num.order()
    if j < k:
        # num/den ~ eps^(j-k); higher terms of den cannot cancel this
        raise DivergentLimit(j - k, where)
    if j > k:
        return Poly.const(0)
    return num.coefficient(k) / lead.as_scalar()


def leading_scalar(s) -> Scalar:
    s = _as_series(s)
    return s.coefficient(s.order()).as_scalar()
