from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xracah.scalar import (EXACT, BackendError, ZeroDenominatorTerm, float_backend,
                           hypergeometric_terminating, parse_backend, q_pochhammer,
                           shifted_factorial)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def test_shifted_factorial_values():
    assert shifted_factorial(3, 2) == 12
    assert shifted_factorial(-8, 3) == -336
    assert shifted_factorial(F(5, 7), 0) == 1


def test_q_pochhammer_values():
    assert q_pochhammer(F(1, 2), F(1, 2), 3) == F(21, 64)
    assert q_pochhammer(F(1, 2), F(1, 2), 2) == F(3, 8)


def test_negative_length_rejected():
    with pytest.raises(ValueError):
        shifted_factorial(1, -1)
    with pytest.raises(ValueError):
        q_pochhammer(F(1, 2), F(1, 2), -1)


@given(rationals, st.integers(0, 8))
def test_shifted_factorial_matches_naive_product(a, n):
    naive = 1
    for k in range(n):
        naive *= a + k
    assert shifted_factorial(a, n) == naive


@given(rationals, st.fractions(min_value=F(-3, 4), max_value=F(3, 4), max_denominator=8), st.integers(0, 8))
def test_q_pochhammer_matches_naive_product(a, q, n):
    naive = 1
    for k in range(n):
        naive *= 1 - a * q ** k
    assert q_pochhammer(a, q, n) == naive


@given(rationals, st.integers(0, 6), st.integers(0, 6))
def test_shifted_factorial_splits(a, m, n):
    assert shifted_factorial(a, m + n) == shifted_factorial(a, m) * shifted_factorial(a + m, n)


def test_racah_series_value():
    # 4F3(-1, 1+dt, -x, x+d; a, b, c | 1) at the reference point, x = 1
    d = F(3, 2)
    value = hypergeometric_terminating([-1, 1 + d, -1, 1 + d], [-8, 10, 2], 1, 1)
    assert value == F(123, 128)


def test_q_racah_series_value():
    q = F(1, 2)
    a, b, c, d = 4, F(1, 16), F(1, 2), F(1, 2)
    dt = a * b * c / (d * q)
    value = hypergeometric_terminating([q ** -1, dt * q, q ** -1, d * q], [a, b, c], q, 1, q)
    assert value == F(3, 5)


def test_vanishing_denominator_is_reported():
    with pytest.raises(ZeroDenominatorTerm):
        hypergeometric_terminating([-3], [-1], 1, 3)


def test_series_stops_at_vanishing_numerator():
    # (-2)_k kills every term beyond k = 2 even with a large top index
    assert hypergeometric_terminating([-2], [1], 1, 10) == hypergeometric_terminating([-2], [1], 1, 2)


def test_backends():
    assert parse_backend("exact") is EXACT
    be = parse_backend("float:160")
    assert be.prec == 160 and not be.exact
    assert parse_backend("float").prec == 256
    with pytest.raises(BackendError):
        parse_backend("float:abc")
    with pytest.raises(BackendError):
        parse_backend("double")
    with pytest.raises(BackendError):
        EXACT.sqrt(F(4))


def test_float_scalar_parses_fractions():
    be = float_backend(200)
    assert be.scalar("3/8") == be.ctx.mpf(3) / 8
    assert be.default_tolerance() < be.sum_tolerance()
    assert be.sqrt(be.scalar(2)) ** 2 - 2 < be.default_tolerance()
