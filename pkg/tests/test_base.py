from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xracah import base
from xracah.families import make_spec
from xracah.polynomials import Poly
from xracah.scalar import float_backend


def test_first_polynomial(racah):
    assert base.p_poly(racah, 1).coeffs == (1, F(-1, 64))
    assert base.p_check(racah, 1, 1) == F(123, 128)


def test_first_polynomial_q(qracah_small):
    assert base.p_check(qracah_small, 1, 1) == F(3, 5)


def test_pn1_relation(racah, qracah):
    # P_n(eta(1)) = 1 - E_n / B(0) for every degree
    for spec in (racah, qracah):
        for n in range(spec.N + 1):
            assert base.p_check(spec, n, 1) == 1 - base.energy(spec, n) / base.B(spec, 0)


def test_ground_state_product(racah):
    assert base.phi0_sq(racah, 1) == base.B(racah, 0) / base.D(racah, 1)
    for x in range(racah.N + 1):
        assert base.phi0_sq(racah, x) == base.phi0_sq_product(racah, x)


def test_norm_zero_is_inverse_weight_sum(racah, qracah):
    for spec in (racah, qracah):
        total = sum(base.phi0_sq(spec, x) for x in range(spec.N + 1))
        assert base.norm_parts(spec, 0).value() * total == 1


def test_dual_hahn_norm_zero():
    spec = make_spec("dH", [1, 2], N=8)
    a, b, N = F(1), F(2), 8
    expected = 1
    for k in range(N):
        expected *= (b + k) / (a + b + k)
    assert base.norm_parts(spec, 0).value() == expected


def test_little_q_jacobi_norm_zero(lqj):
    parts = base.norm_parts(lqj, 0)
    assert parts.inf_num == (F(1, 4),) and parts.inf_den == (F(1, 16),)
    value = parts.value(256)
    ctx = float_backend(256).ctx
    weights = ctx.fsum(ctx.mpf(w.numerator) / w.denominator for w in (base.phi0_sq(lqj, x) for x in range(200)))
    assert abs(value * weights - 1) < ctx.mpf(2) ** -200


def test_norm_ratio_exact(lqj):
    # (p q; q)_inf / (p; q)_inf = 1 / (1 - p)
    a = base.NormParts(1, (F(1, 8),), (), F(1, 2))
    b = base.NormParts(1, (F(1, 4),), (), F(1, 2))
    assert a.exact_ratio(b) == 1 / (1 - F(1, 4))
    c = base.NormParts(1, (F(1, 3),), (), F(1, 2))
    assert a.exact_ratio(c) is None


def test_grid_requires_window(lqj, racah):
    assert base.grid(racah) == range(9)
    assert base.grid(lqj, 5) == range(6)
    with pytest.raises(ValueError):
        base.grid(lqj)


def test_tail_bound_decreases(lqj):
    assert base.weight_tail_bound(lqj, 40) < base.weight_tail_bound(lqj, 20)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8))
def test_interpolated_polynomial_matches_series(n, x):
    spec = make_spec("R", [-8, 10, 2, F(3, 2)])
    assert base.p_poly(spec, n)(base.eta(spec, x)) == base.p_check(spec, n, x)


def test_float_backend_agrees_with_exact(racah):
    fl = racah.with_backend(float_backend(200))
    for n in range(racah.N + 1):
        for x in range(racah.N + 1):
            exact = base.p_check(racah, n, x)
            assert abs(base.p_check(fl, n, x) - fl.scalar(exact)) < fl.scalar(F(1, 10 ** 40)) * max(1, abs(exact))
