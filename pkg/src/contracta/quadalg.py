"""Quadratic-algebra structure equations as evaluatable templates.

Equations are written in a small ASCII language over the generator slots:
``{A,B}`` is the anticommutator, ``{A,B,C}`` the six-term symmetrizer,
``[A,B]`` the commutator, juxtaposition or ``*`` is the (noncommutative)
product and ``^n`` a power.  Every other name is a parameter.  ``w`` stands
for omega throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .arith import EpsSeries, Matrix, Poly, Scalar, eps_limit, ratio_limit
from .errors import DimensionMismatch, InvalidParameters, MissingSlot, ParseError

NONE, SYM2, SYM3, COMM = "NONE", "SYM2", "SYM3", "COMM"


# -- noncommutative polynomials over parameter polynomials ---------------------

@dataclass(frozen=True)
class Factor:
    """One factor of a word: a plain generator, or a bracket of sub-expressions."""

    marker: str
    slots: tuple  # NONE: (name,); brackets: tuple of NCPoly

    def __str__(self):
        if self.marker == NONE:
            return self.slots[0]
        inner = ",".join(s.to_text() for s in self.slots)
        return f"[{inner}]" if self.marker == COMM else "{" + inner + "}"


class NCPoly:
    """Finite sum of coefficient * (product of Factors), coefficients ``Poly``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, c in (terms or {}).items():
            c = Poly.coerce(c)
            if c:
                clean[tuple(w)] = clean.get(tuple(w), Poly.const(0)) + c
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def scalar(cls, c):
        return cls({(): Poly.coerce(c)})

    @classmethod
    def gen(cls, name):
        return cls({(Factor(NONE, (name,)),): Poly.const(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(out)

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly.scalar(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out[w] + c1 * c2 if w in out else c1 * c2
        return NCPoly(out)

    def is_scalar(self) -> bool:
        return all(not w for w in self.terms)

    def as_coefficient(self) -> Poly:
        return self.terms.get((), Poly.const(0))

    def is_zero(self) -> bool:
        return not self.terms

    def expand(self) -> dict:
        """Plain words (tuples of generator names) -> coefficient, brackets expanded."""
        out: dict = {}
        for word, c in self.terms.items():
            for plain, k in _expand_word(word):
                out[plain] = out[plain] + c * k if plain in out else c * k
        return {w: c for w, c in out.items() if c}

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms.items():
            word = "*".join(str(f) for f in w)
            if not w:
                parts.append(f"({c})")
            elif c == 1:
                parts.append(word)
            else:
                parts.append(f"({c})*{word}")
        return " + ".join(parts)


def _expand_factor(f: Factor) -> list:
    if f.marker == NONE:
        return [((f.slots[0],), 1)]
    subs = [list(s.expand().items()) for s in f.slots]
    out = []
    if f.marker == COMM:
        a, b = subs
        for wa, ca in a:
            for wb, cb in b:
                out.append((wa + wb, ca * cb))
                out.append((wb + wa, -(ca * cb)))
        return out
    for perm in permutations(range(len(subs))):
        acc = [((), Poly.const(1))]
        for idx in perm:
            acc = [(w + ws, c * cs) for w, c in acc for ws, cs in subs[idx]]
        out.extend(acc)
    return out


def _expand_word(word) -> list:
    acc = [((), Poly.const(1))]
    for f in word:
        pieces = _expand_factor(f)
        acc = [(w + pw, c * pc) for w, c in acc for pw, pc in pieces]
    return [(w, c) for w, c in acc]


# -- parser -------------------------------------------------------------------

_TOK = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9']*)|([-+*/^(){}\[\],]))")


def parse_nc(text: str, generators) -> NCPoly:
    """Parse an equation side over the given generator names."""
    gens = set(generators)
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize {text!r} at {pos}")
        toks.append(m.groups())
        pos = m.end()
    toks.append((None, None, "$"))
    i = 0

    def peek():
        return toks[i]

    def op(t, c):
        return t[2] == c

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        sign = 1
        if op(peek(), "-"):
            take()
            sign = -1
        elif op(peek(), "+"):
            take()
        val = term() * sign
        while op(peek(), "+") or op(peek(), "-"):
            s = take()[2]
            t = term()
            val = val + t if s == "+" else val - t
        return val

    def term():
        val = power()
        while True:
            t = peek()
            if op(t, "*"):
                take()
                val = val * power()
            elif op(t, "/"):
                take()
                d = power()
                if not d.is_scalar():
                    raise ParseError("division by a generator expression")
                coeff = d.as_coefficient()
                if not coeff.is_monomial():
                    raise ParseError("division by a non-monomial coefficient")
                val = NCPoly({w: c / coeff for w, c in val.terms.items()})
            elif t[0] or t[1] or op(t, "(") or op(t, "{") or op(t, "["):
                val = val * power()
            else:
                return val

    def power():
        base = atom()
        if op(peek(), "^"):
            take()
            t = take()
            if not t[0] or "/" in t[0]:
                raise ParseError("exponent must be a nonnegative integer")
            n = int(t[0])
            out = NCPoly.scalar(1)
            for _ in range(n):
                out = out * base
            return out
        return base

    def atom():
        t = take()
        num, name, sym = t
        if num:
            return NCPoly.scalar(Fraction(num))
        if name:
            if name in gens:
                return NCPoly.gen(name)
            if name == "i":
                return NCPoly.scalar(Scalar(0, 1))
            return NCPoly.scalar(Poly.var(name))
        if sym == "(":
            v = expr()
            if not op(take(), ")"):
                raise ParseError("missing ')'")
            return v
        if sym in "{[":
            close = "}" if sym == "{" else "]"
            items = [expr()]
            while op(peek(), ","):
                take()
                items.append(expr())
            if not op(take(), close):
                raise ParseError(f"missing {close!r}")
            if sym == "[":
                if len(items) != 2:
                    raise ParseError("commutator needs two entries")
                marker = COMM
            else:
                if len(items) not in (2, 3):
                    raise ParseError("symmetrizer needs two or three entries")
                marker = SYM2 if len(items) == 2 else SYM3
            return NCPoly({(Factor(marker, tuple(items)),): Poly.const(1)})
        raise ParseError(f"unexpected token {t!r} in {text!r}")

    result = expr()
    if not op(peek(), "$"):
        raise ParseError(f"trailing input in {text!r}")
    return result


# -- structure data -----------------------------------------------------------

@dataclass(frozen=True)
class Equation:
    lhs: str
    rhs: str = "0"
    label: str = ""
    note: str = ""


@dataclass(frozen=True)
class StructureData:
    system_id: str
    kind: str                     # "nondegenerate" | "degenerate"
    generators: tuple             # realized slots, e.g. ("H", "L1", "L2")
    r_definition: tuple | None    # R = [a, b]
    equations: tuple
    parameters: tuple
    notes: str = ""
    corrections: tuple = ()       # equations that hold where a transcribed one does not

    @property
    def slots(self) -> tuple:
        return self.generators + (("R",) if self.r_definition else ())

    def parsed(self, eq: Equation) -> NCPoly:
        return parse_nc(eq.lhs, self.slots) - parse_nc(eq.rhs, self.slots)

    def expanded(self, eq: Equation) -> dict:
        """Residual ``lhs - rhs`` as plain words over the realized generators."""
        words = self.parsed(eq).expand()
        if not self.r_definition:
            return words
        a, b = self.r_definition
        out: dict = {}
        for w, c in words.items():
            pieces = [((), 1)]
            for g in w:
                if g == "R":
                    pieces = [(p + (a, b), k) for p, k in pieces] + [(p + (b, a), -k) for p, k in pieces]
                else:
                    pieces = [(p + (g,), k) for p, k in pieces]
            for p, k in pieces:
                out[p] = out[p] + c * k if p in out else c * k
        return {w: c for w, c in out.items() if c}

    def to_json(self) -> dict:
        eqs = []
        for e in self.equations:
            terms = []
            for side, text in (("lhs", e.lhs), ("rhs", e.rhs)):
                for w, c in parse_nc(text, self.slots).terms.items():
                    terms.append({
                        "side": side,
                        "coeff": str(c),
                        "word": [str(f) for f in w],
                        "marker": [f.marker for f in w],
                    })
            eqs.append({"label": e.label, "lhs": e.lhs, "rhs": e.rhs, "terms": terms, "note": e.note})
        return {
            "system": self.system_id,
            "kind": self.kind,
            "generators": list(self.slots),
            "R": f"[{self.r_definition[0]},{self.r_definition[1]}]" if self.r_definition else None,
            "parameters": list(self.parameters),
            "equations": eqs,
            "corrections": [{"label": e.label, "lhs": e.lhs, "rhs": e.rhs, "note": e.note} for e in self.corrections],
            "notes": self.notes,
        }


_S9_R2 = ("8/3*{L1,L2,L3} - (16*a1+12)*L1^2 - (16*a2+12)*L2^2 - (16*a3+12)*L3^2"
          " + 52/3*({L1,L2}+{L2,L3}+{L3,L1}) + 1/3*(16+176*a1)*L1 + 1/3*(16+176*a2)*L2"
          " + 1/3*(16+176*a3)*L3 + 32/3*(a1+a2+a3) + 48*(a1*a2+a2*a3+a3*a1) + 64*a1*a2*a3")


def _s9_comm(i, j, k):
    return Equation(f"[L{i},R]",
                    f"4*{{L{i},L{k}}} - 4*{{L{i},L{j}}} - (8+16*a{j})*L{j} + (8+16*a{k})*L{k} + 8*(a{j}-a{k})",
                    f"[L{i},R] ({i},{j},{k})")


def catalog_structures() -> list:
    S = StructureData
    E = Equation
    return [
        S("S9", "nondegenerate", ("H", "L1", "L2", "L3"), ("L1", "L2"),
          (_s9_comm(1, 2, 3), _s9_comm(2, 3, 1), _s9_comm(3, 1, 2),
           E("R^2", _S9_R2, "R^2"),
           E("H", "L1 + L2 + L3 + a1 + a2 + a3", "H in terms of the generators")),
          ("a1", "a2", "a3"),
          "the [L_i,R] template is instantiated for the cyclic triples (i,j,k)"),
        S("E1", "nondegenerate", ("H", "L1", "L3"), ("L1", "L3"),
          (E("[R,L1]", "8*L1^2 - 8*H*L1 - 16*w^2*L3 + 8*w^2", "[R,L1]"),
           E("[R,L3]", "8*H*L3 - 8*{L1,L3} + (16*b1+8)*H - 16*(b1+b2+1)*L1", "[R,L3]"),
           E("R^2 + 8/3*{L1,L1,L3} - 8*H*{L1,L3} + (16*b1+16*b2+176/3)*L1^2 - 16*w^2*L3^2"
             " - (32*b1+176/3)*H*L1 + (16*b1+12)*H^2 + 176/3*w^2*L3"
             " + 16*w^2*(3*b1+3*b2+4*b1*b2+2/3)", "0", "R^2")),
          ("w", "b1", "b2"), "R = [L1,L3]"),
        S("E2", "nondegenerate", ("H", "L1", "L2", "L3"), ("L1", "L3"),
          (E("[L1,R] + 2*b*L2 - 16*w^2*L3", "0", "[L1,R]", "w read as omega"),
           E("[L3,R] + 2*L2^2 - 4*L1*L2 + 2*b*L3 + w^2*(8*c+6)", "0", "[L3,R]"),
           E("R^2", "4*L1*L2^2 + 16*w^2*L3^2 - 2*b*{L2,L3} + (12+16*c)*w^2*L1 - 32*w^2*L2"
             " - b^2*(c+3/4)", "R^2", "w read as omega"),
           E("H", "L1 + L2", "H in terms of the generators")),
          ("w", "b", "c"), "algebra generated by H, L1, L3 and R = [L1,L3]; L2 = H - L1"),
        S("E3'", "nondegenerate", ("H", "L1", "L2", "L3"), ("L1", "L3"),
          (E("[L1,R]", "4*w^2*L3 - c1*c2", "[L1,R]"),
           E("[L3,R]", "-2*w^2*L1 + 2*w^2*L2 + 1/2*(c1^2-c2^2)", "[L3,R]"),
           E("R^2", "4*w^2*(L3^2 - L1*L2) - 2*c1*c2*L3 + c2^2*L1 + c1^2*L2 + 4*w^4", "R^2"),
           E("H", "L1 + L2", "H in terms of the generators")),
          ("w", "c1", "c2"), "algebra generated by H, L1, L3 and R = [L1,L3]; L2 = H - L1"),
        S("E10", "nondegenerate", ("H", "L1", "L2"), ("L1", "L2"),
          (E("[R,L1] + 32*gamma*L1 + 32*beta^2", "0", "[R,L1]"),
           E("[R,L2] - 96*L1^2 - 64*beta*H + 128*alpha*L1 - 32*gamma*L2 - 32*alpha^2", "0", "[R,L2]",
             "the missing '= 0' is supplied"),
           E("R^2", "64*L1^3 - 64*gamma*H^2 - 128*alpha*L1^2 + 128*beta*H*L1 + 32*gamma*{L1,L2}"
             " - 128*alpha*beta*H + 64*alpha^2*L1 + 64*beta^2*L2 - 256*gamma^2", "R^2")),
          ("alpha", "beta", "gamma")),
        S("E8", "nondegenerate", ("H", "L1", "L2"), ("L1", "L2"),
          (E("[R,L1]", "8*L1^2 + 32*c1*c3", "[R,L1]"),
           E("[R,L2]", "-8*{L1,L2} + 8*c2*H - 16*L1", "[R,L2]"),
           E("R^2", "-16/3*{L1^2,L2} - 16/3*L1*L2*L1 - 176/3*L1^2 + 16*c1*H^2 + 16*c2*L1*H - 64*c1*c3*L2"
             " + 16*c3*(4/3*c1 - c2^2)", "R^2")),
          ("c1", "c2", "c3")),
        S("S3", "degenerate", ("H", "L1", "L2", "X"), None,
          (E("[L1,X]", "2*L2", "[L1,X]"),
           E("[L2,X]", "-X^2 - 2*L1 + H - a", "[L2,X]"),
           E("[L1,L2]", "-(L1*X + X*L1) - (1/2 + 2*a)*X", "[L1,L2]"),
           E("1/3*(X^2*L1 + X*L1*X + L1*X^2) + L1^2 + L2^2 - H*L1 + (a + 11/12)*X^2 - 1/6*H"
             " + (a - 2/3)*L1 - 5*a/6", "0", "4th order identity")),
          ("a",)),
        S("E3", "degenerate", ("H", "L1", "L2", "L3", "X"), None,
          (E("L2", "H - L1", "L2 definition"),
           E("[L1,X]", "2*L3", "[L1,X]"),
           E("[L3,X]", "H - 2*L1", "[L3,X]"),
           E("[L1,L3]", "2*w^2*X", "[L1,L3]"),
           E("L1^2 + L3^2 - L1*H - w^2*X^2 + w^2", "0", "4th order identity")),
          ("w",), "L2 = H - L1 is not an independent generator"),
        S("E4", "degenerate", ("H", "L1", "L2", "X"), None,
          (E("[L1,X]", "a", "[L1,X]"),
           E("[L2,X]", "X^2", "[L2,X]"),
           E("[L1,L2]", "X^3 + H*X - {L1,X}", "[L1,L2]"),
           E("X^4 - 2*{L1,X^2} + 2*H*X^2 + H^2 + 4*a*L2", "0", "4th order identity")),
          ("a",), "",
          (E("[L1,X]", "-a", "[L1,X] corrected", "the transcribed sign is reversed"),
           E("[L2,X]", "-X^2", "[L2,X] corrected", "the transcribed sign is reversed"))),
        S("E5", "degenerate", ("H", "L1", "L2", "X"), None,
          (E("[L1,L2]", "2*X^3 - H*X", "[L1,L2]"),
           E("[L1,X]", "-a/2", "[L1,X]"),
           E("[L2,X]", "L1", "[L2,X]"),
           E("X^4 - H*X^2 + L1^2 + a*L2", "0", "4th order identity")),
          ("a",)),
        S("E6", "degenerate", ("H", "L1", "L2", "X"), None,
          (E("[L1,L2]", "{X,L2} + (2*a + 1/2)*X", "[L1,L2]"),
           E("[L1,X]", "H - X^2", "[L1,X]"),
           E("[L2,X]", "2*L1", "[L2,X]"),
           E("L1^2 + 1/4*{L2,X^2} + 1/2*X*L2*X - L2*H + (a + 3/4)*X^2", "0", "4th order identity")),
          ("a",)),
        S("E14", "degenerate", ("H", "L1", "L2", "X"), None,
          (E("[L1,L2]", "-{X,L2} - 1/2*X", "[L1,L2]"),
           E("[X,L1]", "-X^2", "[X,L1]"),
           E("[X,L2]", "2*L1", "[X,L2]"),
           E("L1^2 + X*L2*X - b*H - 1/4*X^2", "0", "4th order identity")),
          ("b",), "",
          (E("L1^2 + X*L2*X - b*H + 1/4*X^2", "0", "4th order identity corrected",
             "the X^2 term enters with a plus sign"),)),
    ]


def structure(system_id: str) -> StructureData:
    for d in catalog_structures():
        if d.system_id == system_id:
            return d
    raise KeyError(system_id)


# -- evaluation against a concrete representation --------------------------------

@dataclass
class Realization:
    """Concrete ring elements for the generator slots and concrete parameter values."""

    elements: dict
    params: dict
    identity: object = None

    def element(self, name):
        if name not in self.elements:
            raise MissingSlot(f"generator {name} is not assigned")
        return self.elements[name]


def _coeff_value(c: Poly, params: dict) -> Scalar:
    missing = c.symbols() - set(params)
    if missing:
        raise MissingSlot(f"parameters {sorted(missing)} are not assigned")
    return c.evaluate(params)


def eval_matrix_words(words: dict, r: Realization) -> Matrix:
    """Sum of coefficient * product over plain words for matrix realizations."""
    shapes = {m.shape for m in r.elements.values()}
    if len(shapes) != 1:
        raise DimensionMismatch(f"generator matrices have shapes {sorted(shapes)}")
    n, m = shapes.pop()
    if n != m:
        raise DimensionMismatch("generator matrices must be square")
    ident = r.identity if r.identity is not None else Matrix.identity(n)
    total = Matrix.zeros(n)
    cache = {(): ident}

    def prod(w):
        if w not in cache:
            cache[w] = r.element(w[0]) * prod(w[1:])
        return cache[w]

    for w, c in words.items():
        total = total + prod(w) * _coeff_value(c, r.params)
    return total


def eval_structure_residual(d: StructureData, r: Realization) -> list:
    """``lhs - rhs`` for every equation, as matrices (for matrix realizations)."""
    for g in d.generators:
        r.element(g)
    return [eval_matrix_words(d.expanded(eq), r) for eq in d.equations]


def _entry_limit(x, where):
    if isinstance(x, tuple):
        lim = ratio_limit(EpsSeries.coerce(x[0]), EpsSeries.coerce(x[1]), where=where)
    else:
        lim = eps_limit(EpsSeries.coerce(x), where=where)
    return lim.as_scalar() if lim.is_constant() else lim


def contract_representation(family: Realization, where: str = "") -> Realization:
    """Entrywise eps -> 0 limit of eps-dependent generators and parameters.

    Entries may be eps-polynomials or ``(numerator, denominator)`` pairs.
    """
    elements = {}
    for name, m in family.elements.items():
        elements[name] = Matrix([[_entry_limit(x, f"{where}{name}[{i},{j}]") for j, x in enumerate(row)]
                                 for i, row in enumerate(m.rows)])
    params = {k: _entry_limit(v, f"{where}parameter {k}") for k, v in family.params.items()}
    return Realization(elements, params)


# -- parameter validity ---------------------------------------------------------

def validity_violations(system_id: str, params: dict) -> list:
    """Reasons a parameter sample is excluded (empty when valid)."""
    structure(system_id)
    bad = []
    if system_id in ("E1", "E2", "E3'", "E3") and not Scalar.coerce(params.get("w", 1)):
        bad.append("omega must be nonzero")
    return bad


def require_valid(system_id: str, params: dict):
    bad = validity_violations(system_id, params)
    if bad:
        raise InvalidParameters(f"{system_id}: " + "; ".join(bad))
