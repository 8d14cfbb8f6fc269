import pytest
from hypothesis import given, settings, strategies as st

from contracta.arith import Scalar
from contracta.errors import DimensionMismatch
from contracta.liealg import (
    STANDARD_TARGETS, catalog_lie_contractions, contract_lie, e2, identity_family, lie_bracket, o3, verify_family,
)

vec = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5).map(Scalar), min_size=3, max_size=3)


def _basis(alg, name):
    return [Scalar(1) if n == name else Scalar(0) for n in alg.basis_names]


def test_o3_bracket_j2_j1():
    alg = o3()
    assert lie_bracket(alg, _basis(alg, "J2"), _basis(alg, "J1")) == _basis(alg, "J3")


def test_e2_translations_commute():
    alg = e2()
    assert all(not x for x in lie_bracket(alg, _basis(alg, "p1"), _basis(alg, "p2")))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lie_bracket(o3(), [Scalar(1)], [Scalar(0)] * 3)


@given(vec, vec, vec)
@settings(max_examples=40)
def test_bracket_antisymmetry_and_jacobi(u, v, w):
    for alg in (e2(), o3()):
        br = lambda a, b: lie_bracket(alg, a, b)
        assert all(not x for x in br(v, v))
        uv, vu = br(u, v), br(v, u)
        assert all(not (a + b) for a, b in zip(uv, vu))
        jac = [a + b + c for a, b, c in zip(br(u, br(v, w)), br(v, br(w, u)), br(w, br(u, v)))]
        assert all(not x for x in jac)


def test_catalog_size_and_targets():
    fams = catalog_lie_contractions()
    assert len(fams) == 11
    by_label = {f.label: f for f in fams}
    assert sum(f.source.name == o3().name for f in fams) == 4
    assert by_label["e2-5"].expected_target_name == "e(2,C)"
    assert by_label["o3-5"].expected_target_name == "o(3,C)"


@pytest.mark.parametrize("label,target", [("o3-1", "e(2,C)"), ("e2-2", "Heisenberg"), ("e2-4", "abelian")])
def test_named_contractions(label, target):
    fam = next(f for f in catalog_lie_contractions() if f.label == label)
    assert fam.expected_target_name == target
    assert verify_family(fam)["ok"]


def test_abelian_limits_are_zero():
    for label in ("e2-3", "e2-4"):
        fam = next(f for f in catalog_lie_contractions() if f.label == label)
        lim = contract_lie(fam)
        assert all(not x for plane in lim.c for row in plane for x in row)


def test_identity_family_is_unchanged():
    for alg in (e2(), o3()):
        assert contract_lie(identity_family(alg)).same_constants(alg)


def test_standard_targets_satisfy_jacobi():
    for build in STANDARD_TARGETS.values():
        alg = build()
        assert alg.is_antisymmetric() and not alg.jacobi_violations()
