import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from contracta.errors import EvaluationDomainError, LimitMismatch
from contracta.potentials import (
    ORIENTATION, FJet, PrecisionPolicy, canonical_residual, check_basis, cos, cosh, e1_data, exp,
    potential_contraction_check, psi_of, residual_csv, s9_data, sample_points, sin, sinh,
)

POLICY = PrecisionPolicy()


def test_policy_invariant():
    with pytest.raises(ValueError):
        PrecisionPolicy(bits=53, tolerance=1e-25)
    assert PrecisionPolicy(bits=128).tolerance == 1e-25


def test_jet_rules_against_closed_forms():
    with mpmath.workprec(128):
        x, y = FJet.var(mpmath.mpf("0.3"), 0), FJet.var(mpmath.mpf("0.7"), 1)
        f = sin(x) * cosh(y) / (1 + x * x)
        h = mpmath.mpf(10) ** -12
        num = lambda a, b: mpmath.sin(a) * mpmath.cosh(b) / (1 + a * a)
        d1 = mpmath.diff(num, (mpmath.mpf("0.3"), mpmath.mpf("0.7")), (1, 0))
        d12 = mpmath.diff(num, (mpmath.mpf("0.3"), mpmath.mpf("0.7")), (1, 1))
        d22 = mpmath.diff(num, (mpmath.mpf("0.3"), mpmath.mpf("0.7")), (0, 2))
        assert abs(f.d1 - d1) < h and abs(f.d12 - d12) < h and abs(f.d22 - d22) < h
        e = exp(2 * x) * cos(y) - sinh(x)
        assert abs(e.d11 - (4 * mpmath.exp(0.6) * mpmath.cos(0.7) - mpmath.sinh(0.3))) < h


def test_constant_potential():
    for d in (s9_data(), e1_data()):
        r1, r2 = canonical_residual(d, lambda a, b: FJet(1), (Fraction(1, 2), Fraction(1, 3)))
        assert r1 == 0 and r2 == 0


def test_s9_third_basis_function():
    fn = s9_data().basis["cosh^2(psi)/sinh^2(psi)"]
    for p in sample_points(random.Random(3), 5, s9_data()):
        r1, r2 = canonical_residual(s9_data(), fn, p)
        assert abs(r1) < POLICY.tolerance and abs(r2) < POLICY.tolerance


def test_non_solution():
    r1, _ = canonical_residual(s9_data(), lambda a, b: a, (Fraction(1, 2), Fraction(1, 3)))
    assert abs(r1) > POLICY.tolerance


def test_domain_error():
    with pytest.raises(EvaluationDomainError):
        canonical_residual(e1_data(), e1_data().basis["1"], (Fraction(1, 2), 0))


@pytest.mark.parametrize("data", [s9_data, e1_data])
def test_all_basis_functions_at_twenty_points(data):
    d = data()
    assert len(d.basis) == 4
    checks = check_basis(d, sample_points(random.Random(d.name), 20, d))
    assert all(c.ok for c in checks), [c.to_json() for c in checks if not c.ok]


coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=4, max_size=4)


@given(coeffs)
@settings(max_examples=10, deadline=None)
def test_linear_combinations(cs):
    d = s9_data()
    fns = list(d.basis.values())
    combo = lambda a, b: sum((fn(a, b) * mpmath.mpf(c.numerator) / c.denominator for c, fn in zip(cs, fns)), FJet(0))
    r1, r2 = canonical_residual(d, combo, (Fraction(7, 10), Fraction(2, 5)))
    norm = sum(abs(c) for c in cs) + 1
    assert abs(r1) < norm * POLICY.tolerance and abs(r2) < norm * POLICY.tolerance


def test_sample_points_domain():
    for x, y in sample_points(random.Random(1), 50):
        assert Fraction(1, 10) < x < 2 and Fraction(1, 10) < y < Fraction(13, 10)


def test_orientation_map():
    assert ORIENTATION == {"A12": 1, "A22": -1, "B12": -1, "B22": 1}


def test_contraction_rows():
    report = potential_contraction_check()
    rows = {r.quantity: r for r in report.rows}
    assert rows["V4"].ok and all(e == 0 for e in rows["V4"].errors)
    v1 = rows["V1"]
    with mpmath.workprec(128):
        assert v1.ok and abs(v1.claimed - mpmath.exp(mpmath.mpf(2) / 3)) < 1e-30
    assert v1.errors[0] > v1.errors[1] > v1.errors[2]
    a22 = rows["A22"]
    assert a22.ok and a22.claimed == 2 and a22.target == -2
    assert a22.errors[2] < 20 * mpmath.mpf(10) ** -6
    assert rows["B12"].ok and rows["B12"].target == -2


def test_rescaled_second_basis_function_quarter_of_stated_limit():
    report = potential_contraction_check()
    for name in ("V2", "V3"):
        row = next(r for r in report.rows if r.quantity == name)
        assert not row.ok
        assert abs(row.value / row.claimed - mpmath.mpf(1) / 4) < 1e-5
    with pytest.raises(LimitMismatch):
        potential_contraction_check(strict=True)


def test_psi_of_eps():
    assert abs(psi_of(mpmath.mpf("0.01"), 0) - mpmath.log(10)) < 1e-30


def test_residual_csv():
    d = e1_data()
    text = residual_csv(check_basis(d, sample_points(random.Random(0), 2, d)))
    assert text.splitlines()[0] == "system,basis,points,max_residual"
    assert len(text.splitlines()) == 5
