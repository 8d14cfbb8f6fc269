"""Canonical potential equations and the S9 -> E1 potential contraction, in mpmath floats.

The equations are
    V22 = V11 + A22 V1 + B22 V2,    V12 = A12 V1 + B12 V2
with subscripts denoting partial derivatives in the chart coordinates.
Derivatives come from second-order two-variable jets over ``mpmath.mpf``.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import EvaluationDomainError, LimitMismatch


@dataclass(frozen=True)
class PrecisionPolicy:
    bits: int = 128
    tolerance: float = 1e-25

    def __post_init__(self):
        if self.tolerance < 2.0 ** (-self.bits + 24):
            raise ValueError("tolerance is finer than the working precision allows")


class FJet:
    """Value and partials up to order 2 of a function of two variables."""

    __slots__ = ("v", "d1", "d2", "d11", "d12", "d22")

    def __init__(self, v, d1=0, d2=0, d11=0, d12=0, d22=0):
        mpf = mpmath.mpf
        self.v, self.d1, self.d2 = mpf(v), mpf(d1), mpf(d2)
        self.d11, self.d12, self.d22 = mpf(d11), mpf(d12), mpf(d22)

    @classmethod
    def var(cls, value, axis: int) -> "FJet":
        return cls(value, 1, 0) if axis == 0 else cls(value, 0, 1)

    @staticmethod
    def lift(x) -> "FJet":
        return x if isinstance(x, FJet) else FJet(x)

    def __add__(self, o):
        o = FJet.lift(o)
        return FJet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2,
                    self.d11 + o.d11, self.d12 + o.d12, self.d22 + o.d22)

    __radd__ = __add__

    def __neg__(self):
        return FJet(-self.v, -self.d1, -self.d2, -self.d11, -self.d12, -self.d22)

    def __sub__(self, o):
        return self + (-FJet.lift(o))

    def __rsub__(self, o):
        return FJet.lift(o) - self

    def __mul__(self, o):
        o = FJet.lift(o)
        return FJet(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + self.v * o.d2,
            self.d11 * o.v + 2 * self.d1 * o.d1 + self.v * o.d11,
            self.d12 * o.v + self.d1 * o.d2 + self.d2 * o.d1 + self.v * o.d12,
            self.d22 * o.v + 2 * self.d2 * o.d2 + self.v * o.d22,
        )

    __rmul__ = __mul__

    def compose(self, f0, f1, f2) -> "FJet":
        """Apply a scalar function with value f0 and derivatives f1, f2 at self.v."""
        return FJet(
            f0,
            f1 * self.d1,
            f1 * self.d2,
            f2 * self.d1 * self.d1 + f1 * self.d11,
            f2 * self.d1 * self.d2 + f1 * self.d12,
            f2 * self.d2 * self.d2 + f1 * self.d22,
        )

    def reciprocal(self) -> "FJet":
        if not self.v:
            raise EvaluationDomainError("division by a function vanishing at the point")
        r = 1 / self.v
        return self.compose(r, -r * r, 2 * r * r * r)

    def __truediv__(self, o):
        return self * FJet.lift(o).reciprocal()

    def __rtruediv__(self, o):
        return FJet.lift(o) * self.reciprocal()

    def __pow__(self, n: int):
        out = FJet(1)
        for _ in range(n):
            out = out * self
        return out


def sin(j: FJet) -> FJet:
    s, c = mpmath.sin(j.v), mpmath.cos(j.v)
    return j.compose(s, c, -s)


def cos(j: FJet) -> FJet:
    s, c = mpmath.sin(j.v), mpmath.cos(j.v)
    return j.compose(c, -s, -c)


def sinh(j: FJet) -> FJet:
    s, c = mpmath.sinh(j.v), mpmath.cosh(j.v)
    return j.compose(s, c, s)


def cosh(j: FJet) -> FJet:
    s, c = mpmath.sinh(j.v), mpmath.cosh(j.v)
    return j.compose(c, s, c)


def exp(j: FJet) -> FJet:
    e = mpmath.exp(j.v)
    return j.compose(e, e, e)


# -- canonical data ----------------------------------------------------------------

@dataclass
class CanonicalData:
    name: str
    coords: tuple
    a12: object
    a22: object
    b12: object
    b22: object
    basis: dict                  # label -> function of two FJets
    domain: object = None        # predicate on float coordinates
    notes: str = ""


def _check_trig(phi):
    if abs(mpmath.sin(phi)) < mpmath.mpf(10) ** -6 or abs(mpmath.cos(phi)) < mpmath.mpf(10) ** -6:
        raise EvaluationDomainError("sin(phi) or cos(phi) vanishes")


def s9_data() -> CanonicalData:
    def a22(psi, phi):
        c, s = mpmath.cosh(psi), mpmath.sinh(psi)
        return (3 * c * c - s * s) / (s * c)

    def b22(psi, phi):
        c, s = mpmath.cos(phi), mpmath.sin(phi)
        return -3 * (c * c - s * s) / (s * c)

    return CanonicalData(
        "S9", ("psi", "phi"),
        a12=lambda psi, phi: mpmath.mpf(0),
        a22=a22,
        b12=lambda psi, phi: 2 * mpmath.tanh(psi),
        b22=b22,
        basis={
            "cosh^2(psi)/cos^2(phi)": lambda psi, phi: cosh(psi) ** 2 / cos(phi) ** 2,
            "cosh^2(psi)/sin^2(phi)": lambda psi, phi: cosh(psi) ** 2 / sin(phi) ** 2,
            "cosh^2(psi)/sinh^2(psi)": lambda psi, phi: cosh(psi) ** 2 / sinh(psi) ** 2,
            "1": lambda psi, phi: FJet(1),
        },
        domain=lambda psi, phi: (psi != 0 and _check_trig(phi)),
    )


def e1_data() -> CanonicalData:
    return CanonicalData(
        "E1", ("R", "phi"),
        a12=lambda r, phi: mpmath.mpf(0),
        a22=lambda r, phi: mpmath.mpf(-2),
        b12=lambda r, phi: mpmath.mpf(-2),
        b22=lambda r, phi: -3 * (mpmath.cos(phi) ** 2 - mpmath.sin(phi) ** 2) / (mpmath.sin(phi) * mpmath.cos(phi)),
        basis={
            "exp(2R)": lambda r, phi: exp(2 * r),
            "exp(-2R)/cos^2(phi)": lambda r, phi: exp(-2 * r) / cos(phi) ** 2,
            "exp(-2R)/sin^2(phi)": lambda r, phi: exp(-2 * r) / sin(phi) ** 2,
            "1": lambda r, phi: FJet(1),
        },
        domain=lambda r, phi: _check_trig(phi),
    )


def canonical_residual(d: CanonicalData, potential, point, policy: PrecisionPolicy = PrecisionPolicy()):
    """(r1, r2) for a potential given as a function of two FJets."""
    with mpmath.workprec(policy.bits):
        x1, x2 = (_mpf(c) for c in point)
        if d.domain:
            d.domain(x1, x2)
        try:
            v = potential(FJet.var(x1, 0), FJet.var(x2, 1))
        except ZeroDivisionError as exc:
            raise EvaluationDomainError(str(exc)) from exc
        v = FJet.lift(v)
        r1 = v.d22 - v.d11 - d.a22(x1, x2) * v.d1 - d.b22(x1, x2) * v.d2
        r2 = v.d12 - d.a12(x1, x2) * v.d1 - d.b12(x1, x2) * v.d2
        return r1, r2


def _mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def sample_points(rng: random.Random, count: int, d: CanonicalData | None = None) -> list:
    """Rational points in (1/10, 2) x (1/10, 13/10)."""
    pts = []
    while len(pts) < count:
        p = (Fraction(rng.randint(11, 199), 100), Fraction(rng.randint(11, 129), 100))
        if d and d.domain:
            try:
                d.domain(_mpf(p[0]), _mpf(p[1]))
            except EvaluationDomainError:
                continue
        pts.append(p)
    return pts


@dataclass
class BasisCheck:
    system: str
    label: str
    max_residual: object
    points: int
    ok: bool

    def to_json(self) -> dict:
        return {"system": self.system, "basis": self.label, "points": self.points,
                "max_residual": mpmath.nstr(self.max_residual, 6), "ok": self.ok}


def check_basis(d: CanonicalData, points, policy: PrecisionPolicy = PrecisionPolicy()) -> list:
    out = []
    for label, fn in d.basis.items():
        worst = mpmath.mpf(0)
        for p in points:
            r1, r2 = canonical_residual(d, fn, p, policy)
            worst = max(worst, abs(r1), abs(r2))
        out.append(BasisCheck(d.name, label, worst, len(points), worst < policy.tolerance))
    return out


# -- the contraction of the worked example -----------------------------------------------

# y1 = R corresponds to -x1 = -psi, y2 = phi to x2 = phi; first-derivative
# coefficients of V_1 flip sign, so A22 and B12 flip while A12 and B22 do not.
ORIENTATION = {"A12": 1, "A22": -1, "B12": -1, "B22": 1}


def psi_of(eps, r):
    return mpmath.log(1 / eps) / 2 - r


def _coefficient_claims():
    """name -> (S9 coefficient, claimed raw limit, E1 coefficient)."""
    s9, e1 = s9_data(), e1_data()
    return {
        "A12": (s9.a12, lambda r, p: mpmath.mpf(0), e1.a12),
        "A22": (s9.a22, lambda r, p: mpmath.mpf(2), e1.a22),
        "B12": (s9.b12, lambda r, p: mpmath.mpf(2), e1.b12),
        "B22": (s9.b22, e1.b22, e1.b22),
    }


def _basis_claims():
    """Rescaled S9 basis and the stated limits, as plain float functions of (eps, R, phi)."""
    ch = lambda e, r: mpmath.cosh(psi_of(e, r))
    sh = lambda e, r: mpmath.sinh(psi_of(e, r))
    return {
        "V1": (lambda e, r, p: (ch(e, r) ** 2 / sh(e, r) ** 2 - 1) / (4 * e), lambda r, p: mpmath.exp(2 * r)),
        "V2": (lambda e, r, p: e * ch(e, r) ** 2 / mpmath.cos(p) ** 2, lambda r, p: mpmath.exp(-2 * r) / mpmath.cos(p) ** 2),
        "V3": (lambda e, r, p: e * ch(e, r) ** 2 / mpmath.sin(p) ** 2, lambda r, p: mpmath.exp(-2 * r) / mpmath.sin(p) ** 2),
        "V4": (lambda e, r, p: mpmath.mpf(1), lambda r, p: mpmath.mpf(1)),
    }


@dataclass
class LimitRow:
    quantity: str
    errors: list           # per eps, against the claimed raw limit
    value: object          # value at the smallest eps, before orientation
    claimed: object        # claimed raw limit
    ok: bool
    adjusted: object = None    # orientation-adjusted value at the smallest eps
    target: object = None      # the E1 coefficient it should match after adjustment

    def to_json(self) -> dict:
        out = {"quantity": self.quantity, "ok": self.ok,
               "errors": [mpmath.nstr(e, 6) for e in self.errors],
               "value_at_smallest_eps": mpmath.nstr(self.value, 12),
               "claimed_limit": mpmath.nstr(self.claimed, 12)}
        if self.target is not None:
            out["orientation_adjusted"] = mpmath.nstr(self.adjusted, 12)
            out["e1_coefficient"] = mpmath.nstr(self.target, 12)
        return out


def _decreasing(errs) -> bool:
    if all(e == 0 for e in errs):
        return True
    return all(b < a for a, b in zip(errs, errs[1:]))


@dataclass
class ContractionReport:
    schedule: list
    point: tuple
    rows: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list:
        return [r.quantity for r in self.rows if not r.ok]

    def to_json(self) -> dict:
        return {"schedule": [mpmath.nstr(e, 3) for e in self.schedule],
                "point": {"R": str(self.point[0]), "phi": str(self.point[1])},
                "orientation": ORIENTATION, "ok": self.ok,
                "rows": [r.to_json() for r in self.rows]}


def potential_contraction_check(schedule=(Fraction(1, 100), Fraction(1, 10 ** 4), Fraction(1, 10 ** 6)),
                                point=(Fraction(1, 3), Fraction(1, 5)), policy: PrecisionPolicy = PrecisionPolicy(),
                                strict: bool = False) -> ContractionReport:
    """Errors of the coefficient and basis limits along psi = ln(1/eps)/2 - R, phi' = phi."""
    rows = []
    with mpmath.workprec(policy.bits):
        eps = [_mpf(e) for e in schedule]
        r, p = (_mpf(c) for c in point)
        for name, (src, claim, tgt) in _coefficient_claims().items():
            limit, target = claim(r, p), tgt(r, p)
            vals = [src(psi_of(e, r), p) for e in eps]
            errs = [abs(v - limit) for v in vals]
            adjusted = ORIENTATION[name] * vals[-1]
            consistent = abs(ORIENTATION[name] * limit - target) < policy.tolerance
            rows.append(LimitRow(name, errs, vals[-1], limit, _decreasing(errs) and consistent, adjusted, target))
        for name, (fam, lim) in _basis_claims().items():
            target = lim(r, p)
            vals = [fam(e, r, p) for e in eps]
            errs = [abs(v - target) for v in vals]
            ok = _decreasing(errs) and errs[-1] < mpmath.mpf(10) * eps[-1] * (1 + abs(target))
            rows.append(LimitRow(name, errs, vals[-1], target, ok))
    report = ContractionReport([_mpf(e) for e in schedule], point, rows)
    if strict and not report.ok:
        raise LimitMismatch(f"limits not reached: {report.failures()}")
    return report


def residual_csv(checks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["system", "basis", "points", "max_residual"])
    for c in checks:
        w.writerow([c.system, c.label, c.points, mpmath.nstr(c.max_residual, 6)])
    return buf.getvalue()
