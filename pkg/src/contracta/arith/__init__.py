"""Exact arithmetic: Gaussian rationals, polynomials, eps-series, matrices, jets."""

from .brackets import anticommutator, bracket_ops, commutator, symmetrizer3
from .jet import Jet2, jet_of
from .matrix import Matrix
from .poly import Poly, parse_poly, symbols
from .scalar import I, ONE, ZERO, Scalar
from .series import EPS, EpsSeries, eps_limit, ratio_limit

__all__ = [
    "EPS", "EpsSeries", "I", "Jet2", "Matrix", "ONE", "Poly", "Scalar", "ZERO",
    "anticommutator", "bracket_ops", "commutator", "eps_limit", "jet_of",
    "parse_poly", "ratio_limit", "symbols", "symmetrizer3",
]
