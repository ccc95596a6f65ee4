from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from xracah.polynomials import Poly, count_roots_open, interpolate, sturm_sequence

coeff = st.fractions(min_value=-6, max_value=6, max_denominator=6)
polys = st.lists(coeff, min_size=1, max_size=7).map(lambda c: Poly(tuple(c)))


def test_trailing_zeros_stripped():
    assert Poly((1, 2, 0, 0)).coeffs == (1, 2)
    assert Poly((0, 0)).degree == -1
    assert Poly((5,)).degree == 0


def test_arithmetic():
    p = Poly((1, 1))
    assert (p * p).coeffs == (1, 2, 1)
    assert (p * p - p).coeffs == (0, 1, 1)
    assert (p * 3).coeffs == (3, 3)
    assert Poly((1, 2, 3)).derivative().coeffs == (2, 6)


@given(polys, polys.filter(lambda p: p.degree >= 0))
def test_divmod_reconstructs(a, b):
    q, r = a.divmod(b)
    assert (q * b + r).coeffs == a.coeffs
    assert r.degree < b.degree or r.degree <= 0 and b.degree == 0


@given(st.lists(coeff, min_size=1, max_size=6))
def test_interpolation_reproduces_polynomial(cs):
    p = Poly(tuple(cs))
    nodes = [F(k, 3) for k in range(len(cs))]
    assert interpolate(nodes, [p(x) for x in nodes]).coeffs == p.coeffs


def test_interpolation_rejects_repeated_nodes():
    with pytest.raises(ValueError):
        interpolate([1, 1], [0, 1])


def test_sturm_sequence_ends_in_constant():
    seq = sturm_sequence(Poly((-2, 0, 1)))
    assert seq[-1].degree == 0


def test_root_count_small_cases():
    p = Poly((-2, 0, 1))  # roots +-sqrt(2)
    assert count_roots_open(p, -2, 2) == 2
    assert count_roots_open(p, 0, 2) == 1
    # endpoints that are roots are excluded
    q = Poly((0, -1, 1))  # roots 0 and 1
    assert count_roots_open(q, 0, 1) == 0
    assert count_roots_open(q, -1, 2) == 2
    assert count_roots_open(Poly((3,)), 0, 1) == 0


def _sympy_count(p: Poly, lo, hi) -> int:
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(map(F, p.coeffs)))
    roots = set(sympy.real_roots(sympy.Poly(expr, x)))
    lo, hi = sympy.Rational(lo.numerator, lo.denominator), sympy.Rational(hi.numerator, hi.denominator)
    return sum(1 for r in roots if lo < r < hi)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5), coeff, st.fractions(min_value=F(1, 4), max_value=8,
                                                                               max_denominator=4))
def test_sturm_count_matches_independent_root_isolation(roots, lo, width):
    # products of linear factors give repeated and endpoint roots often
    p = Poly((1,))
    for r in roots:
        p = p * Poly((F(-r, 2), 1))
    hi = lo + width
    assert count_roots_open(p, lo, hi) == _sympy_count(p, lo, hi)


@settings(max_examples=40, deadline=None)
@given(polys.filter(lambda p: p.degree >= 1), coeff)
def test_sturm_count_random_coefficients(p, lo):
    assert count_roots_open(p, lo, lo + 5) == _sympy_count(p, lo, lo + 5)
