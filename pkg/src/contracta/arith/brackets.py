"""Commutator, anticommutator and the six-term symmetrizer in any associative ring."""

from itertools import permutations


def commutator(a, b):
    return a * b - b * a


def anticommutator(a, b):
    return a * b + b * a


def symmetrizer3(a, b, c):
    """Sum of the six ordered products of ``a, b, c``."""
    total = None
    for x, y, z in permutations((a, b, c)):
        t = x * y * z
        total = t if total is None else total + t
    return total


def bracket_ops(a, b, c=None):
    out = {"commutator": commutator(a, b), "anticommutator": anticommutator(a, b)}
    if c is not None:
        out["symmetrizer3"] = symmetrizer3(a, b, c)
    return out
