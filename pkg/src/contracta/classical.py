"""Lie-Poisson polynomials and the worked classical contraction cases.

Generators are commuting symbols; the bracket is the Leibniz extension of a
Lie algebra's structure constants.  Each case records the basis change as the
equations written for it (primed combination = eps-dependent source
combination), the claimed limits ``eps^k G -> G'``, and any stated relations
among the limit generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import EPS, EpsSeries, Matrix, Poly, eps_limit, parse_poly
from .errors import ContractaError, DivergentLimit, NotInvertible, UnknownGenerator
from .liealg import ContractionFamily, LieAlgebraSC, contract_lie, e2, o3


def poisson_bracket(f, g, base: LieAlgebraSC) -> Poly:
    """``{f, g} = sum_ij df/dg_i dg/dg_j {g_i, g_j}`` over the basis of ``base``."""
    f, g = Poly.coerce(f), Poly.coerce(g)
    names = base.basis_names
    known = set(names) | {EPS}
    for p in (f, g):
        extra = {s for s in p.symbols() if s not in known}
        if extra:
            raise UnknownGenerator(f"symbols {sorted(extra)} are not generators of {base.name}")
    df = [f.diff(n) for n in names]
    dg = [g.diff(n) for n in names]
    gens = [Poly.var(n) for n in names]
    out = Poly.const(0)
    for i in range(len(names)):
        if not df[i]:
            continue
        for j in range(len(names)):
            if i == j or not dg[j]:
                continue
            br = Poly.const(0)
            for k, c in enumerate(base.c[i][j]):
                if c:
                    br = br + gens[k] * c
            if br:
                out = out + df[i] * dg[j] * br
    return out


# -- case data ----------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    """``eps^power * source -> target`` as eps -> 0."""

    slot: str
    source: str
    power: int
    target: str
    note: str = ""


@dataclass(frozen=True)
class Relation:
    """``expr == 0`` among primed slots; ``R'`` is the bracket of ``bracket``."""

    expr: str
    bracket: tuple = ("L1'", "L2'")
    note: str = ""


@dataclass(frozen=True)
class ClassicalCase:
    case_id: int
    title: str
    algebra: str
    generators: dict
    forward: tuple
    claims: tuple
    relations: tuple = ()
    notes: str = ""
    target_system: str = ""
    corrections: tuple = ()

    @property
    def source_algebra(self) -> LieAlgebraSC:
        return {"e2": e2, "o3": o3}[self.algebra]()

    @property
    def primed_names(self) -> tuple:
        return tuple(n + "'" for n in self.source_algebra.basis_names)

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "title": self.title,
            "algebra": self.source_algebra.name,
            "generators": dict(self.generators),
            "forward": [list(eq) for eq in self.forward],
            "claims": [{"slot": c.slot, "source": c.source, "power": c.power, "target": c.target}
                       for c in self.claims],
            "relations": [r.expr for r in self.relations],
            "corrections": [
                {"slot": c.slot, "source": c.source, "power": c.power, "target": c.target, "note": c.note}
                if isinstance(c, Claim) else {"relation": c.expr, "note": c.note}
                for c in self.corrections
            ],
            "notes": self.notes,
        }


def _linear_rows(exprs, names):
    rows = []
    for e in exprs:
        p = parse_poly(e)
        row = []
        for n in names:
            c = p.diff(n)
            if any(s != EPS for s in c.symbols()):
                raise ContractaError(f"basis change {e!r} is not linear in {names}")
            row.append(c)
        rest = p.subs({n: 0 for n in names})
        if rest:
            raise ContractaError(f"basis change {e!r} has a constant part")
        rows.append(row)
    return Matrix(rows)


def _monomial_inverse(m: Matrix) -> Matrix:
    det = m.det()
    if not det:
        raise NotInvertible("basis change is singular")
    if not det.is_monomial():
        raise NotInvertible(f"determinant {det} is not a single eps power")
    adj = m.adjugate()
    return adj.map(lambda x: x / det)


def substitution(case: ClassicalCase):
    """Source generators as Laurent combinations of the primed generators, plus ``t_eps``."""
    src = case.source_algebra.basis_names
    primed = case.primed_names
    p = _linear_rows([lhs for lhs, _ in case.forward], primed)
    s = _linear_rows([rhs for _, rhs in case.forward], src)
    p_inv = _monomial_inverse(p)
    s_inv = _monomial_inverse(s)
    back = s_inv * p                       # source = back . primed
    fwd = p_inv * s                        # primed = fwd . source
    sub = {}
    for i, n in enumerate(src):
        expr = Poly.const(0)
        for j, q in enumerate(primed):
            expr = expr + back[i, j] * Poly.var(q)
        sub[n] = expr
    return sub, fwd.transpose()


def target_algebra(case: ClassicalCase) -> LieAlgebraSC:
    _, t = substitution(case)
    fam = ContractionFamily(f"case-{case.case_id}", case.source_algebra, case.primed_names, t,
                            "computed", Matrix.identity(3))
    return contract_lie(fam)


def _source_poly(case: ClassicalCase, text: str) -> Poly:
    gens = {k: parse_poly(v) for k, v in case.generators.items()}
    return parse_poly(text).subs(gens)


@dataclass
class ClaimResult:
    slot: str
    ok: bool
    limit: str
    expected: str
    discrepancy: str
    error: str = ""


@dataclass
class CaseReport:
    case_id: int
    title: str
    ok: bool
    claims: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    target_brackets: dict = field(default_factory=dict)
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "title": self.title,
            "ok": self.ok,
            "claims": [vars(c) for c in self.claims],
            "relations": self.relations,
            "target_brackets": self.target_brackets,
            "notes": self.notes,
        }


def claim_limit(case: ClassicalCase, claim: Claim, sub=None) -> Poly:
    if sub is None:
        sub, _ = substitution(case)
    g = _source_poly(case, claim.source).subs(sub) * Poly.var(EPS, claim.power)
    return eps_limit(EpsSeries.from_poly(g), where=f"case {case.case_id} {claim.slot}")


def run_classical_case(case: ClassicalCase) -> CaseReport:
    sub, _ = substitution(case)
    alg = target_algebra(case)
    report = CaseReport(case.case_id, case.title, True, notes=case.notes,
                        target_brackets=alg.to_json()["brackets"])
    values = {}
    for claim in case.claims:
        expected = parse_poly(claim.target)
        try:
            lim = claim_limit(case, claim, sub)
        except DivergentLimit as exc:
            report.claims.append(ClaimResult(claim.slot, False, "divergent", str(expected), "", str(exc)))
            report.ok = False
            continue
        diff = lim - expected
        ok = not diff
        report.ok &= ok
        report.claims.append(ClaimResult(claim.slot, ok, str(lim), str(expected), str(diff)))
        values[claim.slot] = expected
    for rel in case.relations:
        env = dict(values)
        a, b = rel.bracket
        if a in env and b in env:
            env["R'"] = poisson_bracket(env[a], env[b], alg)
        residual = parse_poly(rel.expr).subs(env)
        ok = not residual
        report.ok &= ok
        report.relations.append({"relation": f"{rel.expr} = 0", "ok": ok, "residual": str(residual),
                                 "note": rel.note})
    return report


# -- catalog --------------------------------------------------------------------

_E1 = {"L1": "J^2", "L2": "p1^2", "H": "p1^2 + p2^2"}
_S9 = {"L1": "J3^2", "L2": "J1^2", "H": "J1^2 + J2^2 + J3^2"}
_S3 = {"X": "J3", "L1": "J1^2", "L2": "J1*J2", "H": "J1^2 + J2^2 + J3^2"}
_S3pm = {"X": "J3", "L1": "(J1 + i*J2)^2", "L2": "(J1 - i*J2)^2", "H": "J1^2 + J2^2 + J3^2"}
_E3a = {"X": "J", "L1": "p1^2", "L2": "p1*p2", "H": "p1^2 + p2^2"}
_E3b = {"X": "J", "L1": "p2^2", "L2": "p1*p2", "H": "p1^2 + p2^2"}

_KP = "(J1' + i*J2')"
_KM = "(J1' - i*J2')"
_PP = "(p1' + i*p2')"
_PM = "(p1' - i*p2')"


def catalog_classical_cases() -> list:
    C = ClassicalCase
    cases = [
        C(1, "E1 -> E8", "e2", _E1,
          (("J'", "J"), ("p1' + i*p2'", "eps*(p1 + i*p2)"), ("p1' - i*p2'", "p1 - i*p2")),
          (Claim("L1'", "L1", 0, "J'^2"),
           Claim("L2'", "4*L2", 2, f"{_PP}^2"),
           Claim("H'", "H", 1, f"{_PP}*{_PM}")),
          target_system="E8"),
        C(2, "E1 -> E2", "e2", _E1,
          (("J'", "J + eps^-1*p2"), ("p1'", "p1"), ("p2'", "p2")),
          (Claim("L1'", "L1", 2, "p2'^2"),
           Claim("L2'", "-1/2*(L1 - eps^-2*p2^2)", 1, "J'*p2'",
                 note="subleading term of L1 after removing the eps^-2 part"),
           Claim("L2", "L2", 0, "p1'^2"),
           Claim("H'", "H", 0, "p1'^2 + p2'^2")),
          target_system="E2"),
        C(3, "E1 -> E3'", "e2", _E1,
          (("J'", "J + eps^-1*(p1 + p2)"), ("p1'", "p1"), ("p2'", "p2")),
          (Claim("L1", "L1", 2, "p1'^2 + 2*p1'*p2' + p2'^2", note="equals L2' + H' with L2' = 2 p1' p2'"),
           Claim("L2", "L2", 0, "p1'^2"),
           Claim("H'", "H", 0, "p1'^2 + p2'^2")),
          target_system="E3'"),
        C(4, "E1 -> E3' (alternate)", "e2", _E1,
          (("J'", "J + eps^-1*(p1 + i*p2)"), ("p1'", "p1"), ("p2'", "p2")),
          (Claim("L1'", "1/(2*i)*(eps^2*L1 + H - 2*L2)", 0, "p1'*p2'",
                 note="stated as an identity at finite eps; checked after eps -> 0"),
           Claim("L2'", "L2", 0, "p1'^2"),
           Claim("H'", "H", 0, "p1'^2 + p2'^2")),
          notes="no explicit limit is claimed for L1'; the finite-eps identity is evaluated at eps -> 0",
          target_system="E3'"),
        C(5, "E1 -> E1", "e2", _E1,
          (("J'", "J"), ("p1'", "eps*p1"), ("p2'", "eps*p2")),
          (Claim("L1'", "L1", 0, "J'^2"),
           Claim("L2'", "L2", 2, "p1'^2"),
           Claim("H'", "H", 2, "p1'^2 + p2'^2")),
          target_system="E1"),
        C(6, "E1 -> Heisenberg", "e2", _E1,
          (("J'", "eps*J"), ("p1'", "p1"), ("p2'", "eps*p2")),
          (Claim("L1'", "L1", 2, "J'^2"),
           Claim("L2'", "L2", 0, "p1'^2"),
           Claim("H'", "H - L2", 2, "p2'^2")),
          (Relation("R'^2 - 4*L1'*H'^2", note="stated relation"),),
          target_system="Heisenberg",
          corrections=(Relation("R'^2 - 16*L1'*L2'*H'",
                                note="R' = 4 J' p1' p2', so R'^2 involves all three generators"),)),
        C(7, "S9 -> E1", "o3", _S9,
          (("J1'", "eps*J1"), ("J2'", "eps*J2"), ("J3'", "J3")),
          (Claim("L1'", "L1", 0, "J3'^2"),
           Claim("L2'", "L2", 2, "J1'^2"),
           Claim("H'", "H", 2, "J1'^2 + J2'^2")),
          notes="J3' plays the role of J and (J1', J2') the translations of e(2)",
          target_system="E1"),
        C(8, "S9 -> S2", "o3", _S9,
          (("J1' + i*J2'", "eps*(J1 + i*J2)"), ("J1' - i*J2'", "eps^-1*(J1 - i*J2)"), ("J3'", "J3")),
          (Claim("L1'", "4*L2", 2, f"{_KP}^2"),
           Claim("L2'", "L1", 0, "J3'^2"),
           Claim("H'", "H", 0, "J1'^2 + J2'^2 + J3'^2")),
          target_system="S2"),
        C(9, "S9 -> E8", "o3", _S9,
          (("J1' + i*J2'", "J1 + i*J2"), ("J1' - i*J2'", "eps*(J1 - i*J2)"), ("J3'", "J3")),
          (Claim("L1'", "L1", 0, "J3'^2"),
           Claim("L2'", "4*L2", 2, f"{_KM}^2"),
           Claim("H'", "H", 1, f"{_KP}*{_KM}")),
          target_system="E8"),
        C(10, "S9 -> Heisenberg", "o3", _S9,
          (("J1' + i*J2'", "J1 + i*J2"), ("J1' - i*J2'", "eps*(J1 - i*J2)"), ("J3'", "eps*J3")),
          (Claim("H'", "H", 2, "J3'^2"),
           Claim("L1'", "4*L2", 2, f"{_KM}^2"),
           Claim("L2'", "H - L1", 1, "J1'^2 + J2'^2")),
          (Relation("R'^2 + 16*H'*L1'^2", note="stated relation"),),
          target_system="Heisenberg"),
        C(11, "S3 -> E3", "o3", _S3,
          (("J1'", "eps*J1"), ("J2'", "eps*J2"), ("J3'", "J3")),
          (Claim("X'", "X", 0, "J3'"),
           Claim("L1'", "L1", 2, "J1'^2"),
           Claim("L2'", "L2", 2, "J1'*J2'"),
           Claim("H'", "H", 2, "J1'^2 + J2'^2")),
          target_system="E3"),
        C(12, "S3 -> E3 (alternate)", "o3", _S3,
          (("J1' + i*J2'", "J1 + i*J2"), ("J1' - i*J2'", "eps*(J1 - i*J2)"), ("J3'", "J3")),
          (Claim("X'", "X", 0, "J3'"),
           Claim("L1'", "-1/2*(L1 + i*L2) + 1/4*H - 1/4*X^2", 0, f"-1/4*{_KP}^2",
                 note="p_zbar^2 with J1'+iJ2' = 2i p_zbar"),
           Claim("L2'", "-i*L2", 2, f"-1/4*{_KM}^2",
                 note="p_z^2 with J1'-iJ2' = -2i p_z"),
           Claim("H'", "H", 1, f"{_KP}*{_KM}", note="4 p_z p_zbar")),
          target_system="E3",
          corrections=(Claim("L2'", "i*L2", 2, f"-1/4*{_KM}^2", note="opposite sign of the eps^2 L2 factor"),)),
        C(13, "S3 -> S3", "o3", _S3,
          (("J1' + i*J2'", "eps*(J1 + i*J2)"), ("J1' - i*J2'", "eps^-1*(J1 - i*J2)"), ("J3'", "J3")),
          (Claim("X'", "X", 0, "J3'"),
           Claim("L1'", "4*i*L2", 2, f"{_KP}^2"),
           Claim("L2'", "2*(L1 - i*L2 - 1/2*H + 1/2*X^2)", -2, f"{_KM}^2"),
           Claim("H'", "H", 0, "J1'^2 + J2'^2 + J3'^2")),
          target_system="S3"),
        C(14, "S3 -> Heisenberg", "o3", _S3pm,
          (("J1' + i*J2'", "J1 + i*J2"), ("J1' - i*J2'", "eps*(J1 - i*J2)"), ("J3'", "eps*J3")),
          (Claim("X'", "X", 1, "J3'"),
           Claim("L1'", "L1", 0, f"{_KP}^2"),
           Claim("L2'", "L2", 2, f"{_KM}^2"),
           Claim("H'", "H", 2, "J3'^2")),
          (Relation("H' - X'^2"),),
          notes="this item uses the S3 basis L1 = (J1+iJ2)^2, L2 = (J1-iJ2)^2",
          target_system="Heisenberg"),
        C(15, "E3 -> E3", "e2", _E3b,
          (("J'", "J"), ("p1'", "eps*p1"), ("p2'", "eps*p2")),
          (Claim("X'", "X", 0, "J'"),
           Claim("L1'", "L1", 2, "p2'^2"),
           Claim("L2'", "L2", 2, "p1'*p2'"),
           Claim("H'", "H", 2, "p1'^2 + p2'^2")),
          target_system="E3"),
        C(16, "E3 -> E3 (alternate)", "e2", _E3a,
          (("J'", "J"), ("p1' + i*p2'", "eps*(p1 + i*p2)"), ("p1' - i*p2'", "p1 - i*p2")),
          (Claim("X'", "X", 0, "J'"),
           Claim("L1'", "2*i*(L1 - L2) - H", 0, f"{_PM}^2"),
           Claim("L2'", "4*i*L2", 2, f"{_PP}^2"),
           Claim("H'", "H", 1, f"{_PP}*{_PM}", note="stated as p1'^2 + p2'^2")),
          target_system="E3",
          corrections=(Claim("L1'", "2*(L1 - i*L2) - H", 0, f"{_PM}^2",
                             note="exact identity; the written form diverges like eps^-2"),)),
        C(17, "E3 -> E5", "e2", _E3a,
          (("J'", "J + eps^-1*p1"), ("p1'", "p1"), ("p2'", "p2")),
          (Claim("X'", "X", 1, "p1'"),
           Claim("L1'", "L1", 0, "p1'^2"),
           Claim("L2'", "L2", 0, "p1'*p2'"),
           Claim("H'", "H", 0, "p1'^2 + p2'^2"),
           Claim("L3'", "-eps/2*(X^2 - eps^-2*L1)", 0, "J'*p1'", note="constructed missing symmetry")),
          (Relation("L1' - X'^2", note="the apparent degeneracy"),),
          target_system="E5",
          corrections=(Claim("X'", "X", 1, "-p1'", note="J = J' - p1'/eps gives eps X -> -p1'"),)),
        C(18, "E3 -> E4", "e2", _E3b,
          (("J'", "J + eps^-1*(p1 + i*p2)"), ("p1'", "p1"), ("p2'", "p2")),
          (Claim("X'", "X", 1, "p1' + i*p2'"),
           Claim("L1'", "L1", 0, "p2'^2"),
           Claim("L2'", "L2", 0, "p1'*p2'"),
           Claim("H'", "H", 0, "p1'^2 + p2'^2"),
           Claim("L3'", "-eps/2*(X^2 - eps^-2*(H + 2*i*L2 - 2*L1))", 0, f"J'*{_PP}",
                 note="constructed missing symmetry")),
          (Relation("H' - 2*L1' + 2*i*L2' - X'^2", note="the apparent degeneracy"),),
          target_system="E4",
          corrections=(Claim("X'", "X", 1, "-p1' - i*p2'", note="J = J' - (p1'+ip2')/eps"),)),
        C(19, "E3 -> Heisenberg", "e2", _E3a,
          (("J'", "eps*J"), ("p1'", "p1"), ("p2'", "eps*p2")),
          (Claim("X'", "X", 1, "J'"),
           Claim("L1'", "L1", 0, "p1'^2"),
           Claim("L2'", "L2", 1, "p1'*p2'"),
           Claim("H'", "H", 2, "p2'^2")),
          (Relation("L1'*H' - L2'^2"),),
          target_system="Heisenberg"),
    ]
    return cases


def run_corrections(case: ClassicalCase) -> list:
    """Check the documented corrected readings of a case; one record per correction."""
    sub, _ = substitution(case)
    alg = target_algebra(case)
    values = {c.slot: parse_poly(c.target) for c in case.claims}
    out = []
    for fix in case.corrections:
        if isinstance(fix, Claim):
            try:
                lim = claim_limit(case, fix, sub)
                diff = lim - parse_poly(fix.target)
                out.append({"slot": fix.slot, "ok": not diff, "limit": str(lim), "note": fix.note})
            except DivergentLimit as exc:
                out.append({"slot": fix.slot, "ok": False, "limit": "divergent", "note": str(exc)})
        else:
            env = dict(values)
            env["R'"] = poisson_bracket(env[fix.bracket[0]], env[fix.bracket[1]], alg)
            residual = parse_poly(fix.expr).subs(env)
            out.append({"relation": f"{fix.expr} = 0", "ok": not residual, "residual": str(residual),
                        "note": fix.note})
    return out


def classical_case(case_id: int) -> ClassicalCase:
    for c in catalog_classical_cases():
        if c.case_id == case_id:
            return c
    raise KeyError(case_id)
