from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from contracta.arith import Scalar
from contracta.errors import InvalidParameters, RecurrenceMismatch, SingularAtZero, ZeroDenominatorPochhammer
from contracta.racahmodel import (
    HahnParams, WilsonParams, check_wilson_eigen, derived_k_nn, hahn_limit_errors, hahn_q,
    hypergeometric_terminating, k_diag, k_down, k_up, l3_prime_x_residual, pochhammer, racah_spectrum_check,
    recurrence_check, s9_model, save_representation_s9_to_e1, tau_apply, tau_star_apply, wilson_phi, wilson_w,
)

F = Fraction
B = (F(1, 3), F(1, 5), F(1, 7))


def S(v):
    return Scalar(F(v))


# -- special functions ----------------------------------------------------------------

def test_pochhammer():
    assert pochhammer(F(7, 3), 0) == S(1)
    assert pochhammer(3, 2) == S(12)
    assert pochhammer(F(1, 2), 3) == S("15/8")


def test_hypergeometric_terminating():
    # 2F1(-2, 1; 1; 1) = (1 - 1)^2 = 0
    assert hypergeometric_terminating((-2, 1), (1,), 3) == S(0)


def test_wilson_phi_small_cases():
    assert wilson_phi(0, (1, 2, 3, 4), 7) == S(1)
    a, b, c, d = 1, 2, 3, 4
    oracle = 1 - F(a + b + c + d) * (a * a - 0) / ((a + b) * (a + c) * (a + d))
    assert wilson_phi(1, (a, b, c, d), 0) == Scalar(oracle) == S("5/6")


def test_zero_denominator_pochhammer():
    with pytest.raises(ZeroDenominatorPochhammer):
        wilson_phi(2, (1, -1, 3, 4), 0)


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=7)


def _generic(params):
    a, b, c, d = params
    return all(x + y + k for x, y in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)) for k in range(6))


@given(st.tuples(rationals, rationals, rationals, rationals).filter(_generic), rationals)
@settings(max_examples=25, deadline=None)
def test_wilson_w_symmetric(params, t2):
    ref = wilson_w(2, params, t2)
    assert wilson_w(2, params[::-1], t2) == ref
    assert all(wilson_w(2, p, t2) == ref for p in permutations(params))


def test_tau_on_simple_functions():
    p = (1, 2, 3, 4)
    assert tau_apply(lambda t: S(5), p, F(2, 3)) == S(0)
    assert tau_apply(lambda t: t * t, p, F(2, 3)) == S(1)
    with pytest.raises(SingularAtZero):
        tau_apply(lambda t: t, p, 0)
    with pytest.raises(SingularAtZero):
        tau_star_apply(lambda t: t, p, 0)


@given(st.tuples(rationals, rationals, rationals, rationals).filter(_generic),
       st.fractions(min_value=1, max_value=9, max_denominator=7).filter(lambda t: t.denominator % 2))
@settings(max_examples=20, deadline=None)
def test_wilson_eigen_relation(params, t):
    for n in range(4):
        assert not check_wilson_eigen(n, params, [t])


# -- model coefficients and matrices ---------------------------------------------------------

def test_k_up_example():
    assert k_up(0, 1, 1, 1, 1) == S(1)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_k_up_vanishes_at_top(m):
    assert k_up(m, m, *B) == S(0)
    assert k_down(0, m, *B) == S(0)


def test_k_diag_variants_differ_only_through_b2_b3():
    assert k_diag(1, 2, F(1, 3), F(1, 7), F(1, 7), "paper") == k_diag(1, 2, F(1, 3), F(1, 7), F(1, 7), "corrected")
    assert k_diag(1, 2, *B, variant="paper") != k_diag(1, 2, *B, variant="corrected")


def test_derived_k_nn_matches_b3_form():
    for n in range(4):
        assert derived_k_nn(n, 3, *B) == k_diag(n, 3, *B, variant="corrected")


def test_n0_recurrence_two_points():
    p = WilsonParams.from_model(2, *B)
    knn = k_diag(0, 2, *B, variant="corrected")
    for t2 in (F(1, 3), F(-5, 2)):
        lhs = -4 * S(t2) * wilson_phi(0, p, t2)
        rhs = -4 * k_up(0, 2, *B) * wilson_phi(1, p, t2) - 4 * knn * wilson_phi(0, p, t2)
        assert lhs == rhs


def test_recurrence_corrected_passes():
    assert recurrence_check(3, *B, variant="corrected").ok


def test_recurrence_displayed_emits_diagnostic():
    rep = recurrence_check(3, *B)
    assert not rep.ok
    assert rep.diagnostic["formula_matching_derived"] == ["corrected"]


def test_perturbed_k_nn_raises():
    with pytest.raises(RecurrenceMismatch):
        recurrence_check(3, *B, strict=True, k_nn=lambda n: k_diag(n, 3, *B, variant="corrected") + 1)


def test_invalid_model_parameters():
    with pytest.raises(InvalidParameters):
        s9_model(2, F(-1), F(0), F(0))


def test_spectrum_of_corrected_model():
    assert racah_spectrum_check(s9_model(3, *B, k_nn="corrected"))["ok"]


def test_h_shift_is_the_only_other_correction():
    fixed = s9_model(2, *B, k_nn="corrected", h_value="corrected")
    knn_only = s9_model(2, *B, k_nn="corrected")
    assert knn_only.H_scalar - fixed.H_scalar == S("1/2")


# -- Hahn ----------------------------------------------------------------------------

def test_hahn_basics():
    assert hahn_q(HahnParams(0, 2, F(1, 3), F(1, 5), 3)) == S(1)
    for n in range(4):
        assert hahn_q(HahnParams(n, 0, F(1, 3), F(1, 5), 3)) == S(1)
    assert hahn_q(HahnParams(1, 1, 0, 0, 2)) == S(0)
    with pytest.raises(InvalidParameters):
        HahnParams(3, 0, 0, 0, 2)


def test_hahn_limit_error_decreases():
    e2 = max(e.to_fraction() for _, _, e in hahn_limit_errors(3, F(1, 3), F(1, 5), 1000))
    e3 = max(e.to_fraction() for _, _, e in hahn_limit_errors(3, F(1, 3), F(1, 5), 10000))
    ratio = e3 / e2
    assert F(1, 20) <= ratio <= F(1, 5)


def test_l3_x_operator_forms():
    xs = list(range(4)) + [F(1, 3)]
    # the displayed operator misses even on Q_0 = 1: its x^2 terms add up to 8x^2
    assert l3_prime_x_residual(0, 3, F(1, 3), F(1, 5), xs)
    for n in range(4):
        assert not l3_prime_x_residual(n, 3, F(1, 3), F(1, 5), xs, form="corrected")


# -- saving the representation ----------------------------------------------------------

def test_save_representation():
    rep = save_representation_s9_to_e1(2, F(1, 3), F(1, 5), F(3, 2))
    assert rep.ok
    assert rep.h_prime == -2 * S("3/2") * (2 * 2 + 2 + S("1/3") + S("1/5"))
    assert rep.l2_diag_ok
    assert rep.correspondence["assignment"] == "L1=L1', L3=+L3'"
    assert rep.verbatim_k_nn.startswith("diverges")
    assert rep.l3_x_corrected_ok and rep.l3_x_discrepancies
