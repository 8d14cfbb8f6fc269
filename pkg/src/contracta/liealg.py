"""Lie algebras by structure constants and the e(2,C)/o(3,C) contraction catalog."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import EPS, Matrix, Poly, Scalar, parse_poly, ratio_limit
from .errors import ContractaError, DimensionMismatch, NotInvertible


def _zero_like(x):
    return x * 0


@dataclass(frozen=True)
class LieAlgebraSC:
    """``[X_i, X_j] = sum_k c[i][j][k] X_k`` over Q(i)."""

    name: str
    basis_names: tuple
    c: tuple

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    @classmethod
    def from_brackets(cls, name, basis_names, brackets):
        """Build from ``{(a, b): {name: coeff}}``; antisymmetric partners are implied."""
        basis_names = tuple(basis_names)
        pos = {n: k for k, n in enumerate(basis_names)}
        n = len(basis_names)
        c = [[[Scalar(0)] * n for _ in range(n)] for _ in range(n)]
        for (a, b), rhs in brackets.items():
            i, j = pos[a], pos[b]
            for gen, coeff in rhs.items():
                v = Scalar.coerce(coeff) if not isinstance(coeff, str) else Scalar.parse(coeff)
                c[i][j][pos[gen]] = c[i][j][pos[gen]] + v
                c[j][i][pos[gen]] = c[j][i][pos[gen]] - v
        return cls(name, basis_names, tuple(tuple(tuple(v) for v in row) for row in c))

    def bracket(self, v, w):
        if len(v) != self.dim or len(w) != self.dim:
            raise DimensionMismatch(f"vectors must have length {self.dim}")
        out = [_zero_like(v[0]) for _ in range(self.dim)]
        for i, vi in enumerate(v):
            if not vi:
                continue
            for j, wj in enumerate(w):
                if not wj:
                    continue
                f = vi * wj
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] = out[k] + f * ck
        return out

    def basis_vector(self, name):
        return [Scalar(1) if n == name else Scalar(0) for n in self.basis_names]

    def bracket_named(self, a, b) -> dict:
        vec = self.bracket(self.basis_vector(a), self.basis_vector(b))
        return {n: x for n, x in zip(self.basis_names, vec) if x}

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(self.c[i][j][k] == -self.c[j][i][k] for i in range(n) for j in range(n) for k in range(n))

    def jacobi_violations(self) -> list:
        """Triples (i, j, k) with nonzero [X_i,[X_j,X_k]] + cyclic."""
        bad = []
        n = self.dim
        e = [self.basis_vector(x) for x in self.basis_names]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    t1 = self.bracket(e[i], self.bracket(e[j], e[k]))
                    t2 = self.bracket(e[j], self.bracket(e[k], e[i]))
                    t3 = self.bracket(e[k], self.bracket(e[i], e[j]))
                    if any(a + b + d for a, b, d in zip(t1, t2, t3)):
                        bad.append((i, j, k))
        return bad

    def is_abelian(self) -> bool:
        return all(not x for row in self.c for v in row for x in v)

    def change_basis(self, m: Matrix, name=None, basis_names=None) -> "LieAlgebraSC":
        """Express the algebra in the basis whose a-th vector is column a of ``m``."""
        n = self.dim
        if m.shape != (n, n):
            raise DimensionMismatch("basis change must be square")
        inv = m.inverse()
        cols = [[m[i, a] for i in range(n)] for a in range(n)]
        c = []
        for a in range(n):
            row = []
            for b in range(n):
                row.append(tuple(inv.apply(self.bracket(cols[a], cols[b]))))
            c.append(tuple(row))
        return LieAlgebraSC(name or self.name, tuple(basis_names or self.basis_names), tuple(c))

    def same_constants(self, other: "LieAlgebraSC") -> bool:
        return self.dim == other.dim and self.c == other.c

    def to_json(self) -> dict:
        brackets = {}
        for i, a in enumerate(self.basis_names):
            for j, b in enumerate(self.basis_names):
                if i < j:
                    rhs = {self.basis_names[k]: str(x) for k, x in enumerate(self.c[i][j]) if x}
                    if rhs:
                        brackets[f"[{a},{b}]"] = rhs
        return {"name": self.name, "basis": list(self.basis_names), "brackets": brackets}


def lie_bracket(alg: LieAlgebraSC, v, w):
    return alg.bracket(v, w)


# -- the standard algebras --------------------------------------------------

def e2() -> LieAlgebraSC:
    # realization J = x p2 - y p1: {J, p1} = p2, {J, p2} = -p1
    return LieAlgebraSC.from_brackets("e(2,C)", ("J", "p1", "p2"), {
        ("J", "p1"): {"p2": 1},
        ("J", "p2"): {"p1": -1},
    })


def o3() -> LieAlgebraSC:
    return LieAlgebraSC.from_brackets("o(3,C)", ("J1", "J2", "J3"), {
        ("J2", "J1"): {"J3": 1},
        ("J3", "J2"): {"J1": 1},
        ("J1", "J3"): {"J2": 1},
    })


def heisenberg() -> LieAlgebraSC:
    return LieAlgebraSC.from_brackets("Heisenberg", ("J", "p1", "p2"), {("J", "p1"): {"p2": 1}})


def abelian(dim: int = 3) -> LieAlgebraSC:
    names = tuple(f"X{k + 1}" for k in range(dim))
    return LieAlgebraSC.from_brackets("abelian", names, {})


STANDARD_TARGETS = {
    "e(2,C)": e2,
    "o(3,C)": o3,
    "Heisenberg": heisenberg,
    "abelian": abelian,
}


# -- contraction families ---------------------------------------------------

@dataclass(frozen=True)
class ContractionFamily:
    """``t_eps`` columns are the images of the primed basis in the source basis."""

    label: str
    source: LieAlgebraSC
    primed_names: tuple
    t_eps: Matrix
    expected_target_name: str
    identification: Matrix
    description: str = ""
    coordinate_implementation: str = ""

    @property
    def target(self) -> LieAlgebraSC:
        """Expected limit algebra written in the primed basis."""
        std = STANDARD_TARGETS[self.expected_target_name]()
        return std.change_basis(self.identification, name=self.expected_target_name,
                                basis_names=self.primed_names)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "source": self.source.name,
            "primed_basis": list(self.primed_names),
            "t_eps": [[str(x) for x in row] for row in self.t_eps.rows],
            "expected_target": self.expected_target_name,
            "description": self.description,
        }


def transformed_constants(f: ContractionFamily):
    """Exact ``c'(eps) = t^-1 [t X, t Y]`` as (numerator vectors, det) over Laurent polys."""
    t = f.t_eps
    n = f.source.dim
    det = t.det()
    if not det:
        raise NotInvertible(f"{f.label}: det(t_eps) vanishes identically")
    adj = t.adjugate()
    cols = [[t[i, a] for i in range(n)] for a in range(n)]
    nums = {}
    for a in range(n):
        for b in range(n):
            w = f.source.bracket(cols[a], cols[b])
            nums[(a, b)] = adj.apply(w)
    return nums, det


def contract_lie(f: ContractionFamily) -> LieAlgebraSC:
    nums, det = transformed_constants(f)
    n = f.source.dim
    c = [[[None] * n for _ in range(n)] for _ in range(n)]
    for (a, b), vec in nums.items():
        for k, num in enumerate(vec):
            lim = ratio_limit(num, det, where=f"{f.label} c^{f.primed_names[k]}_[{f.primed_names[a]},{f.primed_names[b]}]")
            c[a][b][k] = lim.as_scalar()
    alg = LieAlgebraSC(f"lim {f.label}", f.primed_names, tuple(tuple(tuple(v) for v in row) for row in c))
    if not alg.is_antisymmetric() or alg.jacobi_violations():
        raise ContractaError(f"{f.label}: limit algebra violates Jacobi/antisymmetry")
    return alg


def _cols(*columns) -> Matrix:
    """Matrix whose columns are given as lists of polynomial strings."""
    entries = [[parse_poly(x) if isinstance(x, str) else Poly.const(x) for x in col] for col in columns]
    return Matrix([list(r) for r in zip(*entries)])


def _scols(*columns) -> Matrix:
    entries = [[Scalar.parse(x) if isinstance(x, str) else Scalar(x) for x in col] for col in columns]
    return Matrix([list(r) for r in zip(*entries)])


_ID3 = None


def _identity():
    return _scols([1, 0, 0], [0, 1, 0], [0, 0, 1])


def catalog_lie_contractions() -> list:
    E, O = e2(), o3()
    pm = ("J'", "p+'", "p-'")
    jp = ("J'", "p1'", "p2'")
    kk = ("K+'", "K-'", "J3'")
    fams = [
        ContractionFamily("e2-1", E, jp, _cols(["1", 0, 0], [0, "eps", 0], [0, 0, "eps"]), "e(2,C)",
                          _identity(), "{J, eps p1, eps p2}", "x'=x/eps, y'=y/eps"),
        ContractionFamily("e2-2", E, jp, _cols(["eps", 0, 0], [0, "1", 0], [0, 0, "eps"]), "Heisenberg",
                          _identity(), "{eps J, p1, eps p2}", "x'=x, y'=y/eps, J'=x'p2'"),
        ContractionFamily("e2-3", E, pm, _cols(["eps", 0, 0], [0, "eps", "i*eps"], [0, "1", "-i"]), "abelian",
                          _identity(), "{eps J, eps(p1+ip2), p1-ip2}"),
        ContractionFamily("e2-4", E, jp, _cols(["eps", 0, 0], [0, "1", 0], [0, 0, "1"]), "abelian",
                          _identity(), "{eps J, p1, p2}"),
        ContractionFamily("e2-5", E, pm, _cols(["1", 0, 0], [0, "eps", "i*eps"], [0, "1", "-i"]), "e(2,C)",
                          _scols([1, 0, 0], [0, 1, "i"], [0, 1, "-i"]), "{J, eps(p1+ip2), p1-ip2}",
                          "x'+iy'=x+iy, x'-iy'=(x-iy)/eps"),
        ContractionFamily("e2-6", E, jp, _cols(["1", "eps^-1", 0], [0, "1", 0], [0, 0, "1"]), "e(2,C)",
                          _identity(), "{J + p1/eps, p1, p2}", "x'=x, y'=y-1/eps"),
        ContractionFamily("e2-7", E, jp, _cols(["1", "eps^-1", "i*eps^-1"], [0, "1", 0], [0, 0, "1"]), "e(2,C)",
                          _identity(), "{J + (p1+ip2)/eps, p1, p2}", "x'=x+i/eps, y'=y-1/eps"),
        ContractionFamily("o3-1", O, ("J1'", "J2'", "J3'"), _cols(["eps", 0, 0], [0, "eps", 0], [0, 0, "1"]),
                          "e(2,C)", _scols([0, 0, 1], [0, 1, 0], [1, 0, 0]), "{eps J1, eps J2, J3}",
                          "x=s1/eps, y=s2/eps, s3~1, J=J3"),
        ContractionFamily("o3-2", O, kk, _cols(["1", "i", 0], ["eps", "-i*eps", 0], [0, 0, "eps"]), "Heisenberg",
                          _scols([1, 0, 0], [0, 1, 0], [0, 0, "-1/2*i"]), "{J1+iJ2, eps(J1-iJ2), eps J3}",
                          "phi = eps theta - i ln sqrt(eps), psi = xi sqrt(eps)"),
        ContractionFamily("o3-3", O, kk, _cols(["1", "i", 0], ["eps", "-i*eps", 0], [0, 0, "1"]), "e(2,C)",
                          _scols([0, 1, "-i"], [0, 1, "i"], [1, 0, 0]), "{J1+iJ2, eps(J1-iJ2), J3}",
                          "s1+is2 = eps z, s1-is2 = zbar, s3~1"),
        ContractionFamily("o3-5", O, kk, _cols(["eps", "i*eps", 0], ["eps^-1", "-i*eps^-1", 0], [0, 0, "1"]),
                          "o(3,C)", _scols([1, "i", 0], [1, "-i", 0], [0, 0, 1]),
                          "{eps(J1+iJ2), (J1-iJ2)/eps, J3}",
                          "s1' = (eps+1/eps)/2 s1 + i(eps-1/eps)/2 s2, s2' = -i(eps-1/eps)/2 s1 + (eps+1/eps)/2 s2"),
    ]
    return fams


def identity_family(alg: LieAlgebraSC) -> ContractionFamily:
    n = alg.dim
    t = Matrix([[Poly.const(1 if i == j else 0) for j in range(n)] for i in range(n)])
    ident = Matrix.identity(n)
    return ContractionFamily(f"identity-{alg.name}", alg, alg.basis_names, t, "identity", ident)


def verify_family(f: ContractionFamily) -> dict:
    """Contract one family and compare against its expected target constants."""
    lim = contract_lie(f)
    target = f.target if f.expected_target_name in STANDARD_TARGETS else f.source
    ok = lim.same_constants(target)
    mismatches = []
    if not ok:
        n = lim.dim
        for a in range(n):
            for b in range(a + 1, n):
                got = [str(x) for x in lim.c[a][b]]
                want = [str(x) for x in target.c[a][b]]
                if got != want:
                    mismatches.append({"bracket": f"[{lim.basis_names[a]},{lim.basis_names[b]}]",
                                       "got": got, "expected": want})
    return {"label": f.label, "ok": ok, "limit": lim.to_json(), "expected": f.expected_target_name,
            "mismatches": mismatches}
