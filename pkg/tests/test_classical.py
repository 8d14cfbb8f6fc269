import pytest

from contracta.arith import parse_poly
from contracta.classical import (
    catalog_classical_cases, claim_limit, classical_case, poisson_bracket, run_classical_case, run_corrections,
)
from contracta.errors import UnknownGenerator
from contracta.liealg import e2, o3


def test_casimir_commutes():
    assert poisson_bracket(parse_poly("J1^2 + J2^2 + J3^2"), parse_poly("J3"), o3()).is_zero()


def test_bracket_j2_j1():
    assert poisson_bracket(parse_poly("J2"), parse_poly("J1"), o3()) == parse_poly("J3")


def test_bracket_j_p1_against_canonical_oracle():
    # J = x p2 - y p1 with {x, p1} = 1: {J, p1} = {x, p1} p2 = p2
    assert poisson_bracket(parse_poly("J"), parse_poly("p1"), e2()) == parse_poly("p2")


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        poisson_bracket(parse_poly("q"), parse_poly("J"), e2())


def test_catalog_numbering():
    ids = [c.case_id for c in catalog_classical_cases()]
    assert ids == list(range(1, 20))


def test_case1_rescaled_l2():
    case = classical_case(1)
    claim = next(c for c in case.claims if c.slot == "L2'")
    assert claim_limit(case, claim) == parse_poly("(p1' + i*p2')^2")


def test_case6_stated_relation_fails_and_correction_holds():
    report = run_classical_case(classical_case(6))
    assert all(c.ok for c in report.claims)
    rel = report.relations[0]
    assert not rel["ok"]
    assert parse_poly(rel["residual"]) == parse_poly("16*J'^2*p1'^2*p2'^2 - 4*J'^2*p2'^4")
    assert all(r["ok"] for r in run_corrections(classical_case(6)))


def test_heisenberg_target_relation_holds():
    report = run_classical_case(classical_case(19))
    assert report.ok
    assert report.relations[0]["relation"].startswith("L1'*H' - L2'^2")


def test_constructed_missing_symmetry():
    case = classical_case(18)
    claim = next(c for c in case.claims if c.slot == "L3'")
    assert claim_limit(case, claim) == parse_poly("J'*(p1' + i*p2')")


def test_case11_scalings():
    case = classical_case(11)
    assert {c.slot: c.power for c in case.claims} == {"X'": 0, "L1'": 2, "L2'": 2, "H'": 2}
    assert run_classical_case(case).ok


@pytest.mark.parametrize("case_id", [6, 12, 16, 17, 18])
def test_source_errors_fail_verbatim_and_corrections_pass(case_id):
    case = classical_case(case_id)
    assert not run_classical_case(case).ok
    fixes = run_corrections(case)
    assert fixes and all(f["ok"] for f in fixes)


def test_remaining_cases_pass():
    bad = {6, 12, 16, 17, 18}
    for case in catalog_classical_cases():
        if case.case_id not in bad:
            assert run_classical_case(case).ok, case.case_id
