from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xracah import base
from xracah import deformed as dfm
from xracah.families import (FAMILY_NAMES, FamilySpec, ParameterError, is_admissible, make_spec,
                             parse_int_range, parse_rational_list, shift_lambda, twist,
                             validate_parameters)

small = st.fractions(min_value=F(1, 10), max_value=5, max_denominator=16)


def test_admissible_reference_points(racah, qracah_small, qracah):
    assert is_admissible(racah)
    assert is_admissible(qracah_small)
    assert is_admissible(qracah)
    assert qracah.N == 6 and qracah_small.N == 2


def test_range_violation_is_named():
    spec = make_spec("R", [-8, 10, 4, F(3, 2)])
    assert "c<1+d fails" in validate_parameters(spec)


def test_twist_values(racah, qracah_small, lqj):
    assert twist(racah).lam == (F(19, 2), F(-17, 2), 2, F(3, 2))
    assert twist(qracah_small).lam == (F(1, 8), 8, F(1, 2), F(1, 2))
    assert twist(lqj).lam == (8, F(1, 2))


def test_shift_values(qracah_small):
    shifted = shift_lambda(qracah_small, 2)
    assert shifted.lam == (1, F(1, 64), F(1, 8), F(1, 8))
    assert shifted.N == 0
    with pytest.raises(ValueError):
        shift_lambda(qracah_small, 1, "sideways")


@given(small, small, small, small)
def test_racah_twist_is_an_involution(a, b, c, d):
    spec = FamilySpec("R", (a, b, c, d))
    assert twist(twist(spec)).lam == spec.lam


@given(small, small, st.integers(-3, 3), st.integers(-3, 3))
def test_q_shifts_compose(a, b, m, n):
    spec = FamilySpec("lqJ", (a, b), F(1, 3))
    assert shift_lambda(shift_lambda(spec, m), n).lam == shift_lambda(spec, m + n).lam
    assert twist(twist(spec)).lam == spec.lam


def test_racah_closed_forms(racah):
    assert base.B(racah, 0) == 64
    assert base.D(racah, 0) == 0
    assert base.B(racah, 8) == 0
    assert base.energy(racah, 1) == F(5, 2)
    assert base.eta(racah, 2) == 7
    assert base.varphi(racah, 2) == F(13, 5)
    assert dfm.v_factors(racah, 0)[0] == F(-160, 3)


def test_q_racah_closed_forms(qracah_small):
    assert base.B(qracah_small, 0) == F(15, 8)
    assert base.energy(qracah_small, 1) == F(3, 4)


def test_little_q_jacobi_closed_forms(lqj):
    assert base.eta(lqj, 3) == F(7, 8)
    assert base.varphi(lqj, 3) == F(1, 8)
    assert base.phi0_sq(lqj, 1) == F(3, 8)
    assert dfm.v_factors(lqj, 2) == (F(-1, 16), F(15, 16), F(-1, 4), F(3, 4))


def test_deformation_constants(racah):
    assert dfm.fhat(racah, 1, 0) == F(3, 4)
    assert dfm.bhat(racah, 1, 0) == 2
    assert dfm.s_ell(racah, 1) == F(323, 20)
    for ell in (1, 2, 3):
        assert dfm.kappa_hat(racah, ell) == 1


def test_dual_hahn_boundary():
    spec = make_spec("dH", [1, 2], N=8)
    assert dfm.v_factors(spec, 0)[3] == 0
    assert base.D(spec, 0) == 0


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_wrong_arity_rejected(family):
    q = F(1, 2) if family in ("qR", "dqH", "lqJ") else None
    with pytest.raises(ParameterError):
        make_spec(family, [1, 2, 3, 4, 5], N=4, q=q)


def test_q_presence_enforced():
    with pytest.raises(ParameterError):
        make_spec("R", [-8, 10, 2, F(3, 2)], q=F(1, 2))
    with pytest.raises(ParameterError):
        make_spec("lqJ", [F(1, 2), F(1, 2)])
    with pytest.raises(ParameterError):
        make_spec("dH", [1, 2])


def test_unknown_fault_rejected(racah):
    with pytest.raises(ParameterError):
        racah.with_faults("nope")


def test_parsers():
    assert parse_rational_list("-8,10,2,3/2") == ["-8", "10", "2", "3/2"]
    with pytest.raises(ParameterError):
        parse_rational_list("1,x")
    assert parse_int_range("0..3") == [0, 1, 2, 3]
    assert parse_int_range("1,3..4") == [1, 3, 4]


def test_describe_round_trips_exact_values(racah):
    d = racah.describe()
    assert d["lambda"] == ["-8", "10", "2", "3/2"]
    assert d["N"] == 8
