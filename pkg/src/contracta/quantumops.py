"""Differential-operator realizations checked exactly on Taylor jets.

Operators are expression trees over second-order atoms.  An identity
``D = 0`` of order at most ``d`` is certified at a point by applying ``D``
to every probe monomial ``(x - x0)^i (y - y0)^j`` with ``i + j <= d`` and
reading the value at the point: ``D[(x-x0)^i (y-y0)^j](x0) = i! j! c_ij(x0)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .arith import Jet2, Poly, Scalar
from .errors import InsufficientJetOrder, InvalidParameters, PoleAtBasePoint
from .quadalg import StructureData, structure


# -- rational functions ----------------------------------------------------------

@dataclass(frozen=True)
class RatFunc:
    """``num / den`` with polynomial numerator and denominator (never reduced)."""

    num: Poly
    den: Poly = Poly.const(1)

    @classmethod
    def coerce(cls, v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        return cls(Poly.coerce(v))

    def __add__(self, other):
        o = RatFunc.coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.den ** -n, self.num ** -n)
        return RatFunc(self.num ** n, self.den ** n)

    def diff(self, var: str) -> "RatFunc":
        return RatFunc(self.num.diff(var) * self.den - self.num * self.den.diff(var), self.den * self.den)

    def compose(self, mapping: dict) -> "RatFunc":
        """Substitute rational functions for variables."""
        return _compose_poly(self.num, mapping) / _compose_poly(self.den, mapping)

    def evaluate(self, values: dict) -> Scalar:
        d = self.den.evaluate(values)
        if not d:
            raise PoleAtBasePoint(f"{self.den} vanishes")
        return self.num.evaluate(values) / d

    def is_zero(self) -> bool:
        return not self.num

    def __str__(self):
        return str(self.num) if self.den == 1 else f"({self.num})/({self.den})"


def _compose_poly(p: Poly, mapping: dict) -> RatFunc:
    top: dict = {}
    for mono in p.terms:
        for name, k in mono:
            if name in mapping:
                top[name] = max(top.get(name, 0), k)
    den = Poly.const(1)
    for name, k in top.items():
        den = den * mapping[name].den ** k
    num = Poly.const(0)
    for mono, c in p.terms.items():
        term = Poly.const(c)
        for name, k in mono:
            if name in mapping:
                r = mapping[name]
                term = term * r.num ** k * r.den ** (top[name] - k)
            else:
                term = term * Poly.var(name, k)
        for name, k in top.items():
            if name not in dict(mono):
                term = term * mapping[name].den ** k
        num = num + term
    return RatFunc(num, den)


def rf(text_or_poly) -> RatFunc:
    from .arith import parse_poly
    if isinstance(text_or_poly, str):
        return RatFunc(parse_poly(text_or_poly))
    return RatFunc.coerce(text_or_poly)


# -- charts ------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartSpec:
    name: str
    coords: tuple
    conformal_factor: RatFunc
    embedding: tuple | None = None   # sphere: s1, s2, s3 as functions of the coordinates
    description: str = ""

    def to_json(self) -> dict:
        return {
            "chart": self.name,
            "coordinates": list(self.coords),
            "conformal_factor": str(self.conformal_factor),
            "embedding": None if self.embedding is None else [str(s) for s in self.embedding],
            "description": self.description,
        }


FLAT = ChartSpec("flat", ("x", "y"), RatFunc(Poly.const(1)), None, "Cartesian coordinates on the plane")


def _sphere_chart() -> ChartSpec:
    u, v = Poly.var("x"), Poly.var("y")
    r2 = u * u + v * v
    den = 1 + r2
    emb = (RatFunc(2 * u, den), RatFunc(2 * v, den), RatFunc(1 - r2, den))
    lam = RatFunc(Poly.const(4), den * den)
    return ChartSpec("stereographic", ("x", "y"), lam, emb,
                     "s = (2x, 2y, 1 - x^2 - y^2) / (1 + x^2 + y^2)")


SPHERE = _sphere_chart()


def rotation_field(chart: ChartSpec, j: int, k: int):
    """Chart components of ``s_j d/ds_k - s_k d/ds_j`` (1-based indices), by chain rule.

    The chart coordinates are recovered from the embedding as
    ``x = s1 / (1 + s3)``, ``y = s2 / (1 + s3)``.
    """
    s = [Poly.var(f"s{n}") for n in (1, 2, 3)]
    inverse = (RatFunc(s[0], 1 + s[2]), RatFunc(s[1], 1 + s[2]))
    mapping = {f"s{n + 1}": chart.embedding[n] for n in range(3)}
    comps = []
    for coord in inverse:
        val = RatFunc(s[j - 1]) * coord.diff(f"s{k}") - RatFunc(s[k - 1]) * coord.diff(f"s{j}")
        comps.append(val.compose(mapping))
    return tuple(comps)


# -- operator expressions ---------------------------------------------------------

class DiffOpExpr:
    order: int

    def __add__(self, other):
        return Sum(((Scalar(1), self), (Scalar(1), as_op(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return Sum(((Scalar(1), self), (Scalar(-1), as_op(other))))

    def __rsub__(self, other):
        return as_op(other) - self

    def __neg__(self):
        return Sum(((Scalar(-1), self),))

    def __mul__(self, other):
        if isinstance(other, DiffOpExpr):
            return Compose((self, other))
        return Sum(((Scalar.coerce(other), self),))

    def __rmul__(self, other):
        return Sum(((Scalar.coerce(other), self),))


@dataclass(frozen=True, eq=False)
class Atom(DiffOpExpr):
    """Sum of ``coefficient * dx^i dy^j`` with ``i + j <= 2``."""

    terms: tuple  # ((i, j), RatFunc)

    @property
    def order(self):
        return max((i + j for (i, j), _ in self.terms), default=0)

    def __str__(self):
        parts = []
        for (i, j), c in self.terms:
            d = "".join(["dx"] * i + ["dy"] * j)
            parts.append(f"({c}){'*' + d if d else ''}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True, eq=False)
class Sum(DiffOpExpr):
    parts: tuple  # ((Scalar, DiffOpExpr), ...)

    @property
    def order(self):
        return max((e.order for _, e in self.parts), default=0)

    def __str__(self):
        return " + ".join(f"{c}*({e})" if c != 1 else f"({e})" for c, e in self.parts)


@dataclass(frozen=True, eq=False)
class Compose(DiffOpExpr):
    factors: tuple  # applied right to left

    @property
    def order(self):
        return sum(f.order for f in self.factors)

    def __str__(self):
        return " . ".join(f"({f})" for f in self.factors)


def as_op(v) -> DiffOpExpr:
    if isinstance(v, DiffOpExpr):
        return v
    return mult(v)


def mult(f) -> Atom:
    return Atom((((0, 0), RatFunc.coerce(f) if not isinstance(f, str) else rf(f)),))


def vector(a, b) -> Atom:
    """``a dx + b dy``."""
    return Atom(tuple(((ij, RatFunc.coerce(c)) for ij, c in (((1, 0), a), ((0, 1), b)) if not RatFunc.coerce(c).is_zero())))


def partial(i: int, j: int, coeff=1) -> Atom:
    return Atom((((i, j), RatFunc.coerce(coeff)),))


def anti(a: DiffOpExpr, b: DiffOpExpr) -> DiffOpExpr:
    return a * b + b * a


def comm(a: DiffOpExpr, b: DiffOpExpr) -> DiffOpExpr:
    return a * b - b * a


# -- application to jets ------------------------------------------------------------

@lru_cache(maxsize=200_000)
def _coeff_jet(c: RatFunc, base: tuple, order: int) -> Jet2:
    if c.den == 1:
        return Jet2.from_poly(c.num, base, order)
    return Jet2.from_rational(c.num, c.den, base, order)


def _derivative(f: Jet2, i: int, j: int) -> Jet2:
    for _ in range(i):
        f = f.dx()
    for _ in range(j):
        f = f.dy()
    return f


def apply_to_jet(op: DiffOpExpr, f: Jet2) -> Jet2:
    """Exact jet of ``op f``; the order drops by the formal operator order."""
    if isinstance(op, Atom):
        out_order = f.order - op.order
        if out_order < 0:
            raise InsufficientJetOrder(f"jet order {f.order} below operator order {op.order}")
        acc = Jet2.zero(f.base, out_order)
        for (i, j), c in op.terms:
            d = _derivative(f, i, j).truncate(out_order)
            acc = acc + _coeff_jet(c, f.base, out_order) * d
        return acc
    if isinstance(op, Sum):
        out_order = f.order - op.order
        if out_order < 0:
            raise InsufficientJetOrder(f"jet order {f.order} below operator order {op.order}")
        acc = Jet2.zero(f.base, out_order)
        for c, e in op.parts:
            acc = acc + apply_to_jet(e, f).truncate(out_order).scale(c)
        return acc
    if isinstance(op, Compose):
        for factor in reversed(op.factors):
            f = apply_to_jet(factor, f)
        return f
    raise TypeError(f"not an operator: {op!r}")


def coefficient_denominators(op: DiffOpExpr) -> list:
    if isinstance(op, Atom):
        return [c.den for _, c in op.terms if c.den != 1]
    if isinstance(op, Sum):
        return [d for _, e in op.parts for d in coefficient_denominators(e)]
    return [d for e in op.factors for d in coefficient_denominators(e)]


# -- identity certification -------------------------------------------------------

@dataclass
class IdentityCheck:
    label: str
    probe_degree: int
    points: int
    probes: int
    nonzero: list = field(default_factory=list)  # (point, probe, value) with value != 0

    @property
    def ok(self) -> bool:
        return not self.nonzero

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "ok": self.ok,
            "probe_degree": self.probe_degree,
            "points": self.points,
            "probes": self.probes,
            "nonzero": [
                {"point": [str(c) for c in p], "probe": list(m), "value": str(v)} for p, m, v in self.nonzero[:5]
            ],
        }


def word_residual(terms, points, probe_degree: int, label: str = "") -> IdentityCheck:
    """Certify ``sum c * (G1 . G2 . ... )`` vanishes at each point.

    ``terms`` is a list of ``(Scalar, tuple of DiffOpExpr)``; products share
    suffix evaluations.
    """
    terms = [(Scalar.coerce(c), tuple(w)) for c, w in terms if Scalar.coerce(c)]
    top = max((sum(g.order for g in w) for _, w in terms), default=0)
    order = max(top, probe_degree)
    check = IdentityCheck(label, probe_degree, len(points), 0)
    for pt in points:
        base = tuple(Scalar.coerce(v) for v in pt)
        for d in range(probe_degree + 1):
            for i in range(d, -1, -1):
                j = d - i
                probe = Jet2.probe(i, j, base, order)
                memo = {(): probe}

                def run(w):
                    if w not in memo:
                        memo[w] = apply_to_jet(w[0], run(w[1:]))
                    return memo[w]

                total = Scalar(0)
                for c, w in terms:
                    total = total + c * run(w).value()
                check.probes += 1
                if total:
                    check.nonzero.append((base, (i, j), total))
    return check


def operator_identity_residual(lhs: DiffOpExpr, rhs: DiffOpExpr, points, probe_degree=None,
                               label: str = "") -> IdentityCheck:
    """Certify ``lhs == rhs`` at the given points with the full probe basis."""
    deg = max(lhs.order, rhs.order) if probe_degree is None else probe_degree
    return word_residual([(1, (lhs,)), (-1, (rhs,))], points, deg, label)


# -- system realizations -----------------------------------------------------------

@dataclass
class SystemRealization2:
    system_id: str
    chart: ChartSpec
    params: dict
    ops: dict        # slot name -> DiffOpExpr (H, L1, ..., X)

    def generator_order(self, name: str) -> int:
        return self.ops[name].order

    def to_json(self) -> dict:
        return {
            "system": self.system_id,
            "chart": self.chart.to_json(),
            "parameters": {k: str(v) for k, v in self.params.items()},
            "operators": {k: str(v) for k, v in self.ops.items()},
        }


def _flat_ops():
    x, y = rf("x"), rf("y")
    dx, dy = partial(1, 0), partial(0, 1)
    m = vector(-y, x)  # x dy - y dx
    lap = Atom((((2, 0), rf(1)), ((0, 2), rf(1))))
    return x, y, dx, dy, m, lap


def _sphere_ops():
    js = tuple(vector(*rotation_field(SPHERE, j, k)) for j, k in ((2, 3), (3, 1), (1, 2)))
    return js, SPHERE.embedding


def _s9(p):
    (j1, j2, j3), (s1, s2, s3) = _sphere_ops()
    a1, a2, a3 = (Scalar.coerce(p[k]) for k in ("a1", "a2", "a3"))
    l1 = j1 * j1 + mult(a3 * (s2 / s3) ** 2 + a2 * (s3 / s2) ** 2)
    l2 = j2 * j2 + mult(a1 * (s3 / s1) ** 2 + a3 * (s1 / s3) ** 2)
    l3 = j3 * j3 + mult(a2 * (s1 / s2) ** 2 + a1 * (s2 / s1) ** 2)
    h = j1 * j1 + j2 * j2 + j3 * j3 + mult(a1 / s1 ** 2 + a2 / s2 ** 2 + a3 / s3 ** 2)
    return SPHERE, {"H": h, "L1": l1, "L2": l2, "L3": l3}


def _s3(p):
    (j1, j2, j3), (s1, s2, s3) = _sphere_ops()
    a = Scalar.coerce(p["a"])
    h = j1 * j1 + j2 * j2 + j3 * j3 + mult(a / s3 ** 2)
    l1 = j1 * j1 + mult(a * (s2 / s3) ** 2)
    l2 = Scalar(1, 0) / 2 * anti(j1, j2) - mult(a * s1 * s2 / s3 ** 2)
    return SPHERE, {"H": h, "L1": l1, "L2": l2, "X": j3}


def _e1(p):
    x, y, dx, dy, m, lap = _flat_ops()
    w, b1, b2 = (Scalar.coerce(p[k]) for k in ("w", "b1", "b2"))
    l1 = partial(2, 0) + mult(-(w * w) * x * x + b1 / x ** 2)
    l2 = partial(0, 2) + mult(-(w * w) * y * y + b2 / y ** 2)
    l3 = m * m + mult(y * y * b1 / x ** 2 + x * x * b2 / y ** 2)
    h = lap + mult(-(w * w) * (x * x + y * y) + b1 / x ** 2 + b2 / y ** 2)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "L3": l3}


def _e2(p):
    x, y, dx, dy, m, lap = _flat_ops()
    w, b, c = (Scalar.coerce(p[k]) for k in ("w", "b", "c"))
    w2 = w * w
    h = lap + mult(-w2 * (4 * x * x + y * y) + b * x + c / y ** 2)
    l1 = partial(2, 0) + mult(-4 * w2 * x * x + b * x)
    l2 = partial(0, 2) + mult(-w2 * y * y + c / y ** 2)
    l3 = Scalar(1) / 2 * anti(m, dy) + mult(y * y * (w2 * x - b / 4) + c * x / y ** 2)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "L3": l3}


def _e3p(p):
    x, y, dx, dy, m, lap = _flat_ops()
    w, c1, c2 = (Scalar.coerce(p[k]) for k in ("w", "c1", "c2"))
    w2 = w * w
    h = lap + mult(-w2 * (x * x + y * y) + c1 * x + c2 * y)
    l1 = partial(2, 0) + mult(-w2 * x * x + c1 * x)
    l2 = partial(0, 2) + mult(-w2 * y * y + c2 * y)
    l3 = partial(1, 1) + mult(-w2 * x * y + (c2 * x + c1 * y) / 2)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "L3": l3}


def _zzb():
    return rf("x + i*y"), rf("x - i*y")


def _e10(p):
    x, y, dx, dy, m, lap = _flat_ops()
    z, zb = _zzb()
    al, be, ga = (Scalar.coerce(p[k]) for k in ("alpha", "beta", "gamma"))
    i = Scalar(0, 1)
    dbar = Atom((((1, 0), rf(1)), ((0, 1), rf(-i))))      # dx - i dy
    dz = Atom((((1, 0), rf(1)), ((0, 1), rf(i))))         # dx + i dy
    h = lap + mult(al * zb + be * (z - Scalar(3) / 2 * zb ** 2) + ga * (z * zb - Scalar(1) / 2 * zb ** 3))
    l1 = dbar * dbar + mult(ga * zb ** 2 + 2 * be * zb)
    l2 = (2 * i) * anti(m, dbar) + dz * dz + mult(
        -4 * be * z * zb - ga * z * zb ** 2 - 2 * be * zb ** 3 - Scalar(3, 0) / 4 * ga * zb ** 4
        + ga * z ** 2 + al * zb ** 2 + 2 * al * z)
    return FLAT, {"H": h, "L1": l1, "L2": l2}


def _e8(p):
    x, y, dx, dy, m, lap = _flat_ops()
    z, zb = _zzb()
    c1, c2, c3 = (Scalar.coerce(p[k]) for k in ("c1", "c2", "c3"))
    i = Scalar(0, 1)
    dbar = Atom((((1, 0), rf(1)), ((0, 1), rf(-i))))
    h = lap + mult(c1 * z / zb ** 3 + c2 / zb ** 2 + c3 * z * zb)
    l1 = dbar * dbar + mult(-c1 / zb ** 2 + c3 * zb ** 2)
    l2 = m * m + mult(c1 * z ** 2 / zb ** 2 + c2 * z / zb)
    return FLAT, {"H": h, "L1": l1, "L2": l2}


def _e3(p):
    x, y, dx, dy, m, lap = _flat_ops()
    w2 = Scalar.coerce(p["w"]) ** 2
    h = lap + mult(-w2 * (x * x + y * y))
    l1 = partial(2, 0) + mult(-w2 * x * x)
    l2 = partial(0, 2) + mult(-w2 * y * y)
    l3 = partial(1, 1) + mult(-w2 * x * y)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "L3": l3, "X": m}


def _e4(p):
    x, y, dx, dy, m, lap = _flat_ops()
    a = Scalar.coerce(p["a"])
    i = Scalar(0, 1)
    X = Atom((((1, 0), rf(1)), ((0, 1), rf(i))))
    h = lap + mult(a * (x + i * y))
    l1 = partial(2, 0) + mult(a * x)
    l2 = (i / 2) * anti(m, X) - mult(a / 4 * (x + i * y) ** 2)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "X": X}


def _e5(p):
    x, y, dx, dy, m, lap = _flat_ops()
    a = Scalar.coerce(p["a"])
    h = lap + mult(a * x)
    l1 = partial(1, 1) + mult(a / 2 * y)
    l2 = Scalar(1) / 2 * anti(m, dy) - mult(a / 4 * y * y)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "X": dy}


def _e6(p):
    x, y, dx, dy, m, lap = _flat_ops()
    a = Scalar.coerce(p["a"])
    h = lap + mult(a / x ** 2)
    l1 = Scalar(1) / 2 * anti(m, dx) - mult(a * y / x ** 2)
    l2 = m * m + mult(a * y * y / x ** 2)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "X": dy}


def _e14(p):
    x, y, dx, dy, m, lap = _flat_ops()
    z, zb = _zzb()
    b = Scalar.coerce(p["b"])
    i = Scalar(0, 1)
    X = Atom((((1, 0), rf(1)), ((0, 1), rf(-i))))
    h = lap + mult(b / zb ** 2)
    l1 = (i / 2) * anti(m, X) + mult(b / zb)
    l2 = m * m + mult(b * z / zb)
    return FLAT, {"H": h, "L1": l1, "L2": l2, "X": X}


_BUILDERS = {
    "S9": _s9, "E1": _e1, "E2": _e2, "E3'": _e3p, "E10": _e10, "E8": _e8,
    "S3": _s3, "E3": _e3, "E4": _e4, "E5": _e5, "E6": _e6, "E14": _e14,
}

SYSTEM_IDS = tuple(_BUILDERS)


def realize(system_id: str, params: dict) -> SystemRealization2:
    if system_id not in _BUILDERS:
        raise KeyError(system_id)
    d = structure(system_id)
    missing = set(d.parameters) - set(params)
    if missing:
        raise InvalidParameters(f"{system_id}: parameters {sorted(missing)} are not assigned")
    from .quadalg import require_valid
    require_valid(system_id, params)
    chart, ops = _BUILDERS[system_id](params)
    return SystemRealization2(system_id, chart, {k: Scalar.coerce(params[k]) for k in d.parameters}, ops)


# -- sampling --------------------------------------------------------------------

def _small_rational(rng: random.Random) -> Scalar:
    from fractions import Fraction
    num = rng.choice([n for n in range(-9, 10) if n])
    den = rng.randint(1, 7)
    return Scalar(Fraction(num, den))


def sample_parameters(system_id: str, rng: random.Random) -> dict:
    from .quadalg import validity_violations
    d = structure(system_id)
    while True:
        params = {k: _small_rational(rng) for k in d.parameters}
        if not validity_violations(system_id, params):
            return params


def sample_points(real: SystemRealization2, rng: random.Random, count: int = 2) -> list:
    """Distinct rational base points avoiding every coefficient pole."""
    dens = [den for op in real.ops.values() for den in coefficient_denominators(op)]
    pts = []
    while len(pts) < count:
        pt = (_small_rational(rng), _small_rational(rng))
        vals = dict(zip(real.chart.coords, pt))
        if pt in pts or any(not den.evaluate(vals) for den in dens):
            continue
        pts.append(pt)
    return pts


# -- verification ------------------------------------------------------------------

def _nc_order(nc, orders: dict) -> int:
    """Rigorous order bound of a parsed equation side (commutators drop one order)."""
    from .quadalg import COMM, NONE
    best = 0
    for word, _ in nc.terms.items():
        total = 0
        for f in word:
            if f.marker == NONE:
                total += orders[f.slots[0]]
            else:
                inner = [_nc_order(s, orders) for s in f.slots]
                total += sum(inner) - (1 if f.marker == COMM else 0)
        best = max(best, total)
    return best


@dataclass
class SystemReport:
    system_id: str
    params: dict
    points: list
    checks: list
    corrections: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "system": self.system_id,
            "ok": self.ok,
            "parameters": {k: str(v) for k, v in self.params.items()},
            "points": [[str(c) for c in p] for p in self.points],
            "verification": "exact values at sampled base points on the full probe basis up to the order bound",
            "checks": [c.to_json() for c in self.checks],
            "corrections": [c.to_json() for c in self.corrections],
        }


def verify_system(system_id: str, params: dict, points=None, rng=None) -> SystemReport:
    """Check [H, G] = 0 for every generator and every structure equation."""
    real = realize(system_id, params)
    if points is None:
        points = sample_points(real, rng or random.Random(f"points:{system_id}"))
    d: StructureData = structure(system_id)
    ops = real.ops
    orders = _orders(d, real)
    checks = []
    h = ops["H"]
    for name, g in ops.items():
        if name == "H":
            continue
        terms = [(1, (h, g)), (-1, (g, h))]
        checks.append(word_residual(terms, points, h.order + g.order - 1, f"[H,{name}]"))
    checks.extend(_check_equation(d, real, eq, points, orders) for eq in d.equations)
    corrections = [_check_equation(d, real, eq, points, orders) for eq in d.corrections]
    return SystemReport(system_id, real.params, list(points), checks, corrections)


def _orders(d: StructureData, real: SystemRealization2) -> dict:
    orders = {k: v.order for k, v in real.ops.items()}
    if d.r_definition:
        a, b = d.r_definition
        orders["R"] = orders[a] + orders[b] - 1
    return orders


def _check_equation(d, real, eq, points, orders) -> IdentityCheck:
    deg = _nc_order(d.parsed(eq), orders)
    terms = [(c.evaluate(real.params), tuple(real.ops[g] for g in w)) for w, c in d.expanded(eq).items()]
    return word_residual(terms, points, deg, eq.label)


def equation_check(real: SystemRealization2, lhs: str, rhs: str = "0", points=None, rng=None) -> IdentityCheck:
    """Check one equation, written in the structure mini-language, on a realization."""
    from .quadalg import Equation
    d = structure(real.system_id)
    if points is None:
        points = sample_points(real, rng or random.Random(f"points:{real.system_id}"))
    return _check_equation(d, real, Equation(lhs, rhs, f"{lhs} = {rhs}"), points, _orders(d, real))
