"""Sparse multivariate (Laurent) polynomials over Q(i) in named symbols.

A monomial is a tuple of ``(symbol, exponent)`` pairs sorted by symbol with
nonzero integer exponents; negative exponents are allowed so the same type
carries Laurent polynomials in the contraction parameter ``eps``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

from .scalar import ONE, ZERO, Scalar

_MPQ = type(mpq(0))
_NUMBER = (int, Fraction, _MPQ, Scalar)

Monomial = tuple


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        n = d.get(s, 0) + e
        if n:
            d[s] = n
        else:
            d.pop(s, None)
    return tuple(sorted(d.items()))


def _mono_str(m: Monomial) -> str:
    parts = []
    for s, e in m:
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def _mono_key(m: Monomial):
    return (-sum(e for _, e in m), m)


class Poly:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = object.__new__(cls)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        c = Scalar.coerce(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        if power == 0:
            return cls.const(1)
        return cls._raw({((name, power),): ONE})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, _NUMBER):
            return cls.const(value)
        raise TypeError(f"cannot coerce {value!r} to Poly")

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant(self) -> Scalar:
        return self.terms.get((), ZERO)

    def as_scalar(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.constant()

    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self, symbol: str | None = None) -> int:
        if not self.terms:
            return -1
        if symbol is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max(dict(m).get(symbol, 0) for m in self.terms)

    def min_degree(self, symbol: str) -> int:
        return min(dict(m).get(symbol, 0) for m in self.terms)

    def coefficient(self, symbol: str, k: int) -> "Poly":
        """Coefficient of ``symbol**k`` (as a Poly in the other symbols)."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(symbol, 0) == k:
                d.pop(symbol, None)
                out[tuple(sorted(d.items()))] = c
        return Poly._raw(out)

    def by_power(self, symbol: str) -> dict:
        """Split into ``{k: coefficient Poly}`` by exponent of ``symbol``."""
        groups: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            k = d.pop(symbol, 0)
            groups.setdefault(k, {})[tuple(sorted(d.items()))] = c
        return {k: Poly._raw(v) for k, v in groups.items()}

    # -- arithmetic -----------------------------------------------------
    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, _NUMBER):
                other = Poly.const(other)
            else:
                return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (Poly,) + _NUMBER):
            return NotImplemented
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, _NUMBER):
            return NotImplemented
        return Poly.const(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, _NUMBER):
            c = Scalar.coerce(other)
            if not c:
                return Poly._raw({})
            return Poly._raw({m: v * c for m, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Exact division by a nonzero scalar or by a single-term Poly."""
        if isinstance(other, _NUMBER):
            return self * Scalar.coerce(other).inverse()
        if isinstance(other, Poly):
            if not other.is_monomial():
                raise ZeroDivisionError(f"division by non-monomial {other}")
            (m, c), = other.terms.items()
            inv_m = tuple((s, -e) for s, e in m)
            ic = c.inverse()
            return Poly._raw({_mono_mul(mm, inv_m): v * ic for mm, v in self.terms.items()})
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ZeroDivisionError("negative power of non-monomial")
            return Poly.const(1) / (self ** (-n))
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Poly":
        """Conjugate the coefficients (symbols treated as real)."""
        return Poly._raw({m: c.conjugate() for m, c in self.terms.items()})

    # -- calculus and substitution --------------------------------------
    def diff(self, symbol: str) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(symbol, 0)
            if not e:
                continue
            if e == 1:
                del d[symbol]
            else:
                d[symbol] = e - 1
            key = tuple(sorted(d.items()))
            v = out.get(key)
            out[key] = c * e if v is None else v + c * e
        return Poly._raw({m: c for m, c in out.items() if c})

    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute symbols by Polys or numbers (negative powers need monomials)."""
        mapping = {k: Poly.coerce(v) for k, v in mapping.items()}
        result = Poly._raw({})
        cache: dict = {}
        for m, c in self.terms.items():
            term = Poly.const(c)
            keep = []
            for s, e in m:
                if s in mapping:
                    key = (s, e)
                    if key not in cache:
                        cache[key] = mapping[s] ** e
                    term = term * cache[key]
                else:
                    keep.append((s, e))
            if keep:
                term = term * Poly._raw({tuple(keep): ONE})
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]) -> Scalar:
        """Full evaluation to a Scalar; every symbol must be bound."""
        total = ZERO
        for m, c in self.terms.items():
            v = c
            for s, e in m:
                v = v * Scalar.coerce(values[s]) ** e
            total = total + v
        return total

    # -- comparison / printing ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, _NUMBER):
            return self.terms == Poly.const(other).terms
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            cs = str(c)
            if not m:
                piece = cs if c.is_real() else f"({cs})"
            elif c == 1:
                piece = _mono_str(m)
            elif c == -1:
                piece = "-" + _mono_str(m)
            elif c.is_real():
                piece = f"{cs}*{_mono_str(m)}"
            else:
                piece = f"({cs})*{_mono_str(m)}"
            out.append(piece)
        s = " + ".join(out)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"Poly('{self}')"


def symbols(names: str | Iterable[str]) -> tuple:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return tuple(Poly.var(n) for n in names)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9']*)|(\*\*|[-+*/^()]))")


def parse_poly(text: str) -> Poly:
    """Parse an ASCII polynomial such as ``"2*a1*b2 - 3/4*eps^-1 + i*x"``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
        num, name, op = m.groups()
        tokens.append(("num", num) if num else ("name", name) if name else ("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        t = tokens[idx]
        idx += 1
        return t

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        val = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            val = val + t if op == "+" else val - t
        return val

    def term():
        val = power()
        while True:
            t = peek()
            if t == ("op", "*"):
                take()
                val = val * power()
            elif t == ("op", "/"):
                take()
                val = val / power()
            elif t[0] in ("num", "name") or t == ("op", "("):
                val = val * power()
            else:
                return val

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, v = take()
            if kind != "num" or "/" in v:
                raise ValueError("exponent must be an integer")
            return base ** (sign * int(v))
        return base

    def atom():
        kind, v = take()
        if kind == "num":
            return Poly.const(Fraction(v))
        if kind == "name":
            if v == "i":
                return Poly.const(Scalar(0, 1))
            return Poly.var(v)
        if (kind, v) == ("op", "("):
            val = expr()
            if take() != ("op", ")"):
                raise ValueError("missing ')'")
            return val
        if (kind, v) == ("op", "-"):
            return -power()
        raise ValueError(f"unexpected token {v!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result
