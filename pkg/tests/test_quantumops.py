import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from contracta.arith import Jet2, Scalar, jet_of, parse_poly
from contracta.errors import InsufficientJetOrder, PoleAtBasePoint
from contracta.quantumops import (
    FLAT, SPHERE, SYSTEM_IDS, apply_to_jet, comm, equation_check, mult, operator_identity_residual,
    partial, realize, rf, rotation_field, sample_parameters, vector, verify_system,
)


def S(v):
    return Scalar(Fraction(v))


# -- rational functions ---------------------------------------------------------------

def test_ratfunc_arithmetic_and_diff():
    f = rf("x") / rf("1 + y")
    g = f * rf("1 + y")
    assert g.evaluate({"x": S(3), "y": S(5)}) == S(3)
    d = f.diff("y")
    assert d.evaluate({"x": S(2), "y": S(1)}) == S(-2) / 4


def test_ratfunc_compose():
    f = rf("x^2 + y")
    g = f.compose({"x": rf("y") / rf("2"), "y": rf("x")})
    assert g.evaluate({"x": S(1), "y": S(4)}) == S(5)


def test_sphere_embedding_is_on_unit_sphere():
    s1, s2, s3 = SPHERE.embedding
    total = s1 * s1 + s2 * s2 + s3 * s3
    for pt in ((S("1/3"), S("2/5")), (S(2), S(-1))):
        assert total.evaluate(dict(zip(SPHERE.coords, pt))) == S(1)


# -- apply_to_jet -------------------------------------------------------------------

def test_second_derivative_of_cube():
    base = (S(1), S(0))
    out = apply_to_jet(partial(2, 0), jet_of(parse_poly("x^3"), base, 4))
    assert out == jet_of(parse_poly("6*x"), base, 2)


def test_e6_x_kills_constants():
    real = realize("E6", {"a": S(2)})
    base = (S(1), S(1))
    assert apply_to_jet(real.ops["X"], Jet2.constant(1, base, 3)).is_zero()


def test_e1_l1_on_constant_function():
    real = realize("E1", {"w": S(1), "b1": S(2), "b2": S(3)})
    base = (S(1), S(1))
    out = apply_to_jet(real.ops["L1"], Jet2.constant(1, base, 4))
    assert out == jet_of((parse_poly("-x^4 + 2"), parse_poly("x^2")), base, 2)


def test_insufficient_order():
    with pytest.raises(InsufficientJetOrder):
        apply_to_jet(partial(2, 0), jet_of(parse_poly("x"), (S(1), S(0)), 1))


def test_pole_at_base_point():
    real = realize("E1", {"w": S(1), "b1": S(2), "b2": S(1)})
    with pytest.raises(PoleAtBasePoint):
        apply_to_jet(real.ops["L1"], Jet2.constant(1, (S(0), S(1)), 3))


# -- operator identities ----------------------------------------------------------------

PTS = [(S("1/3"), S("2/5")), (S("-3/4"), S("5/7"))]


def test_rotation_fields_close():
    j1, j2, j3 = (vector(*rotation_field(SPHERE, j, k)) for j, k in ((2, 3), (3, 1), (1, 2)))
    # vector fields compose as operators, so the bracket carries the opposite sign
    assert operator_identity_residual(comm(j1, j2), j3 * S(-1), PTS).ok
    cas = j1 * j1 + j2 * j2 + j3 * j3
    assert operator_identity_residual(comm(cas, j3), mult(0), PTS, 3).ok


def test_e3_commutator():
    real = realize("E3", {"w": S(2)})
    assert equation_check(real, "[L1,X]", "2*L3", PTS).ok


def test_e5_commutator():
    real = realize("E5", {"a": S(3)})
    assert equation_check(real, "[L1,X]", "-a/2", PTS).ok


def test_wrong_sign_is_detected():
    real = realize("E3", {"w": S(2)})
    check = equation_check(real, "[L1,X]", "-2*L3", PTS)
    assert not check.ok and check.nonzero


def test_e8_full_suite():
    assert verify_system("E8", {"c1": S(1), "c2": S(2), "c3": S(3)}, PTS).ok


def test_s9_sphere_chart():
    params = {"a1": S("3/16"), "a2": S("21/100"), "a3": S("45/196")}
    report = verify_system("S9", params, [(S("1/3"), S("2/5")), (S("3/2"), S("-1/7"))])
    assert report.ok
    assert {c.label for c in report.checks} >= {"[H,L1]", "[H,L2]", "[H,L3]", "R^2"}


def test_e4_two_commutators_have_source_sign_errors():
    report = verify_system("E4", {"a": S(3)}, PTS)
    failing = {c.label for c in report.checks if not c.ok}
    assert failing == {"[L1,X]", "[L2,X]"}
    assert report.corrections and all(c.ok for c in report.corrections)
    real = realize("E4", {"a": S(3)})
    assert equation_check(real, "[L1,X]", "-a", PTS).ok
    assert equation_check(real, "[L2,X]", "-X^2", PTS).ok


def test_e14_identity_sign():
    report = verify_system("E14", {"b": S(2)}, PTS)
    assert [c.label for c in report.checks if not c.ok] == ["4th order identity"]
    assert all(c.ok for c in report.corrections)


@pytest.mark.parametrize("sid", [s for s in SYSTEM_IDS if s not in ("E4", "E14", "S9")])
def test_systems_pass_on_random_samples(sid):
    rng = random.Random(f"test:{sid}")
    params = sample_parameters(sid, rng)
    assert verify_system(sid, params, rng=rng).ok


@given(st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(bool))
@settings(max_examples=8, deadline=None)
def test_e3_commutator_any_omega(w):
    real = realize("E3", {"w": Scalar(w)})
    assert equation_check(real, "[L1,X]", "2*L3", PTS[:1]).ok


def test_chart_json():
    assert FLAT.to_json()["coordinates"] == ["x", "y"]
    assert FLAT.to_json()["embedding"] is None
    assert len(SPHERE.to_json()["embedding"]) == 3
