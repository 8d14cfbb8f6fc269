from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from contracta.arith import (
    EPS, EpsSeries, I, Jet2, Matrix, Poly, Scalar, anticommutator, bracket_ops, commutator, eps_limit,
    jet_of, parse_poly, ratio_limit, symmetrizer3,
)
from contracta.errors import DivergentLimit, NotInvertible, PoleAtBasePoint

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
scalars = st.builds(lambda a, b: Scalar(a) + I * Scalar(b), fractions, fractions)


# -- Scalar ---------------------------------------------------------------------

def test_scalar_parse_and_str_round_trip():
    for text in ("1/3", "-2", "0"):
        assert Scalar.parse(text) == Scalar(Fraction(text))
    assert I * I == Scalar(-1)


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == Scalar(1)
        assert (b / a) * a == b


def test_scalar_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)


# -- Poly --------------------------------------------------------------------------

def test_parse_poly_basic():
    p = parse_poly("(x + y)^2 - x^2 - y^2")
    assert p == parse_poly("2*x*y")
    assert parse_poly("eps^-1 * x * eps") == parse_poly("x")


polys = st.lists(st.tuples(fractions, st.integers(-2, 3), st.integers(0, 3)), max_size=4).map(
    lambda terms: sum((Poly.const(c) * Poly.var("x", i) * Poly.var("y", j) for c, i, j in terms), Poly.const(0)))


@given(polys, polys, polys)
@settings(max_examples=60)
def test_poly_ring_laws(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@given(polys, polys)
@settings(max_examples=60)
def test_poly_leibniz_rule(p, q):
    assert (p * q).diff("x") == p.diff("x") * q + p * q.diff("x")


def test_poly_evaluate_and_subs():
    p = parse_poly("x^2*y + 3")
    assert p.evaluate({"x": 2, "y": Scalar(1) / 2}) == Scalar(5)
    assert p.subs({"y": parse_poly("x")}) == parse_poly("x^3 + 3")


# -- eps limits ------------------------------------------------------------------

def test_eps_limit_constant_term():
    assert eps_limit(EpsSeries.from_poly(parse_poly("3 + 2*eps"))) == Poly.const(3)


def test_eps_limit_divergent_reports_exponent():
    with pytest.raises(DivergentLimit) as info:
        eps_limit(EpsSeries.from_poly(parse_poly("eps^-1 + 1")))
    assert info.value.exponent == -1


def test_eps_limit_positive_powers_vanish():
    assert eps_limit(EpsSeries.from_poly(parse_poly("a1*eps^2"))).is_zero()


def test_ratio_limit():
    num = EpsSeries.from_poly(parse_poly("2*eps + eps^2*x"))
    den = EpsSeries.from_poly(parse_poly("eps + eps^3"))
    assert ratio_limit(num, den) == Poly.const(2)
    with pytest.raises(DivergentLimit):
        ratio_limit(EpsSeries.from_poly(parse_poly("1")), den)
    with pytest.raises(NotInvertible):
        ratio_limit(num, EpsSeries.from_poly(Poly.const(0)))


# -- brackets ----------------------------------------------------------------------

def _mat(rows):
    return Matrix([[Scalar(Fraction(v)) for v in r] for r in rows])


def test_bracket_identities():
    a = _mat([[1, 2], [3, 4]])
    b = _mat([[0, 1], [5, -2]])
    one = Matrix.identity(2)
    assert commutator(a, a).is_zero()
    assert anticommutator(one, b) == b * Scalar(2)
    assert symmetrizer3(one, one, b) == b * Scalar(6)
    ops = bracket_ops(a, b, one)
    assert ops["symmetrizer3"] == anticommutator(a, b) * Scalar(3)


# -- jets --------------------------------------------------------------------------

def test_jet_of_bilinear():
    j = jet_of(parse_poly("x*y"), (1, 2), 2)
    assert {k: v for k, v in j.coefficients().items() if v} == {
        (0, 0): Scalar(2), (1, 0): Scalar(2), (0, 1): Scalar(1), (1, 1): Scalar(1)}


def test_jet_partial_of_square():
    j = jet_of(parse_poly("x^2"), (3, 1), 3)
    assert j.partial(0) == jet_of(parse_poly("2*x"), (3, 1), 2)


def test_jet_pole_at_base_point():
    with pytest.raises(PoleAtBasePoint):
        jet_of((Poly.const(1), parse_poly("x")), (0, 1), 2)


@given(polys.filter(lambda p: all(e >= 0 for m in p.terms for _, e in m)), polys.filter(
    lambda p: all(e >= 0 for m in p.terms for _, e in m)))
@settings(max_examples=40)
def test_jet_arithmetic_matches_polynomials(p, q):
    base = (Scalar(2), Scalar(-1) / 3)
    jp, jq = jet_of(p, base, 3), jet_of(q, base, 3)
    assert jp * jq == jet_of(p * q, base, 3)
    assert jp + jq == jet_of(p + q, base, 3)
    assert jp.partial(1) == jet_of(p.diff("y"), base, 2)


def test_jet_reciprocal_matches_rational():
    base = (Scalar(1), Scalar(2))
    den = parse_poly("1 + x^2 + y")
    r = jet_of((Poly.const(1), den), base, 3)
    assert r * jet_of(den, base, 3) == Jet2.constant(1, base, 3)
