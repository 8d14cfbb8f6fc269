from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from contracta.arith import Matrix, Poly, Scalar, parse_poly
from contracta.errors import DivergentLimit, InvalidParameters, MissingSlot, ParseError
from contracta.quadalg import (
    COMM, SYM3, Realization, catalog_structures, contract_representation, eval_matrix_words,
    eval_structure_residual, parse_nc, require_valid, structure,
)
from contracta.racahmodel import s9_model

GENS = ("A", "B", "C")


def test_sym3_matches_permutation_oracle():
    got = parse_nc("{A,B,C}", GENS).expand()
    oracle = {p: Poly.const(1) for p in permutations(GENS)}
    assert got == oracle
    assert next(iter(parse_nc("{A,B,C}", GENS).terms))[0].marker == SYM3


def test_sym2_comm_and_power():
    assert parse_nc("{A,B}", GENS).expand() == {("A", "B"): Poly.const(1), ("B", "A"): Poly.const(1)}
    comm = parse_nc("[A,B]", GENS)
    assert next(iter(comm.terms))[0].marker == COMM
    assert comm.expand() == {("A", "B"): Poly.const(1), ("B", "A"): Poly.const(-1)}
    assert parse_nc("A^3", GENS).expand() == {("A", "A", "A"): Poly.const(1)}


def test_parameters_and_imaginary_unit():
    p = parse_nc("(2*w^2 + i)*A*B", GENS).expand()
    assert p == {("A", "B"): parse_poly("2*w^2 + i")}


@pytest.mark.parametrize("text", ["[A]", "{A,B,C,A}", "A^-1", "(A", "A / B", "A $ B"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_nc(text, GENS)


def test_sym3_of_repeated_entry():
    assert parse_nc("{A,A,B}", GENS).expand() == {
        ("A", "A", "B"): Poly.const(2), ("A", "B", "A"): Poly.const(2), ("B", "A", "A"): Poly.const(2)}


def test_catalog_counts():
    cat = catalog_structures()
    assert len(cat) == 12
    kinds = [d.kind for d in cat]
    assert kinds.count("nondegenerate") == 6 and kinds.count("degenerate") == 6


def test_e1_r_l1_transcription():
    eq = next(e for e in structure("E1").equations if e.label == "[R,L1]")
    assert eq.lhs == "[R,L1]"
    assert eq.rhs == "8*L1^2 - 8*H*L1 - 16*w^2*L3 + 8*w^2"


def test_s3_identity_term():
    eq = next(e for e in structure("S3").equations if e.label == "4th order identity")
    assert "(a + 11/12)*X^2" in eq.lhs


def test_r_is_expanded_as_commutator():
    d = structure("E1")
    eq = next(e for e in d.equations if e.label == "[R,L1]")
    words = d.expanded(eq)
    # (L1 L3 - L3 L1) L1 - L1 (L1 L3 - L3 L1) has L1 L3 L1 twice
    assert words[("L1", "L3", "L1")] == Poly.const(2)
    assert words[("L3", "L1", "L1")] == Poly.const(-1)
    assert words[("L1", "L1", "L3")] == Poly.const(-1)


def _corrected(m, b):
    return s9_model(m, *b, k_nn="corrected", h_value="corrected")


B = (Fraction(1, 3), Fraction(1, 5), Fraction(1, 7))


def test_s9_model_residuals_vanish_for_corrected_model():
    res = eval_structure_residual(structure("S9"), _corrected(2, B).realization())
    assert len(res) == 5 and all(r.is_zero() for r in res)


def test_s9_model_displayed_formulas_leave_residuals():
    res = eval_structure_residual(structure("S9"), s9_model(2, *B).realization())
    assert not all(r.is_zero() for r in res)


def test_perturbed_model_is_detected():
    real = _corrected(2, B).realization()
    real.elements["L2"] = real.elements["L2"] + Matrix.identity(3)
    res = eval_structure_residual(structure("S9"), real)
    assert any(not r.is_zero() for r in res)


def test_missing_slot():
    real = _corrected(1, B).realization()
    del real.elements["L3"]
    with pytest.raises(MissingSlot):
        eval_structure_residual(structure("S9"), real)


def test_missing_parameter():
    real = _corrected(1, B).realization()
    real.params.pop("a1")
    with pytest.raises(MissingSlot):
        eval_structure_residual(structure("S9"), real)


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(small, small, small)
@settings(max_examples=25, deadline=None)
def test_commutator_words_match_matrix_commutator(x, y, z):
    # [A,B] - (AB - BA) vanishes for any matrices
    a = Matrix([[Scalar(x), Scalar(y)], [Scalar(z), Scalar(1)]])
    b = Matrix([[Scalar(y), Scalar(1)], [Scalar(x), Scalar(z)]])
    r = Realization({"A": a, "B": b, "C": a}, {})
    words = parse_nc("[A,B] - A*B + B*A", GENS).expand()
    assert not words or eval_matrix_words(words, r).is_zero()
    assert eval_matrix_words(parse_nc("[A,B]", GENS).expand(), r) == a * b - b * a


def _poly_matrix(rows):
    return Matrix([[parse_poly(x) for x in r] for r in rows])


def test_identity_family_is_unchanged():
    fam = Realization({"L1": _poly_matrix([["1", "2"], ["0", "3"]])}, {"a": parse_poly("1/2")})
    lim = contract_representation(fam)
    assert lim.elements["L1"] == Matrix([[Scalar(1), Scalar(2)], [Scalar(0), Scalar(3)]])
    assert lim.params["a"] == Scalar(1) / 2


def test_uncompensated_scaling_diverges():
    fam = Realization({"L1": _poly_matrix([["eps^-1", "0"], ["0", "1"]])}, {})
    with pytest.raises(DivergentLimit):
        contract_representation(fam)


def test_ratio_entries():
    fam = Realization({"L1": Matrix([[(parse_poly("2*eps + eps^2"), parse_poly("eps")), parse_poly("eps")]])}, {})
    assert contract_representation(fam).elements["L1"] == Matrix([[Scalar(2), Scalar(0)]])


def test_validity():
    with pytest.raises(InvalidParameters):
        require_valid("E1", {"w": Scalar(0), "b1": Scalar(1), "b2": Scalar(1)})
    require_valid("E1", {"w": Scalar(1), "b1": Scalar(1), "b2": Scalar(1)})
