from fractions import Fraction as F

import pytest

from xracah import base
from xracah import deformed as dfm
from xracah import operators as ops
from xracah.families import make_spec, shift_lambda
from xracah.scalar import float_backend


def test_htilde_first_row(racah):
    h = ops.htilde(racah).dense()
    assert h.entries[0][:3] == (64, -64, 0)
    assert h.shape == (9, 9)


def test_forward_lowers_degree(racah):
    f = ops.forward(racah)
    up = shift_lambda(racah, 1)
    for x in f.row_range():
        assert f.apply(lambda y: base.p_check(racah, 1, y), x) == F(5, 2) * base.p_check(up, 0, x)


def test_htilde_is_backward_after_forward(racah, qracah):
    for spec in (racah, qracah):
        lhs = ops.backward(spec) @ ops.forward(spec)
        residual, witness = ops.compare(lhs, ops.htilde(spec), range(spec.N + 1))
        assert residual == 0 and witness is None


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_deformed_factorisation(racah, ell):
    lhs = ops.backward_ell(racah, ell) @ ops.forward_ell(racah, ell)
    assert ops.compare(lhs, ops.htilde_ell(racah, ell), range(racah.N - ell + 1))[0] == 0


@pytest.mark.parametrize("ell", [1, 2])
def test_intertwiners_map_eigenvectors(racah, ell):
    mu = dfm.mu_spec(racah, ell)
    fhat_op = ops.forward_hat(racah, ell)
    for n in range(racah.N - ell + 1):
        for x in fhat_op.row_range():
            value = fhat_op.apply(lambda y: base.p_check(mu, n, y), x)
            assert value == dfm.fhat(racah, ell, n) * dfm.p_ell_check(racah, ell, n, x)


def test_compare_reports_first_witness():
    a = ops.identity(3, 1)
    b = ops.identity(3, 2)
    residual, witness = ops.compare(a, b, range(4))
    assert residual == 1 and witness == {"x": 0, "column": 0}


def test_composition_checks_grids(racah):
    with pytest.raises(ValueError):
        ops.forward(racah) @ ops.forward(racah)


def test_symmetric_gauge_needs_float(racah):
    with pytest.raises(ops.GaugeBackendMismatch):
        ops.build_operator(racah, None, "H", "symmetric")


def test_builder_validates_labels(racah):
    with pytest.raises(ValueError):
        ops.build_operator(racah, None, "Q")
    with pytest.raises(ValueError):
        ops.build_operator(racah, None, "H")  # symmetric label in polynomial gauge
    with pytest.raises(ValueError):
        ops.build_operator(racah, None, "Fhat")


def test_symmetric_hamiltonian_is_a_dagger_a(racah):
    fl = racah.with_backend(float_backend(192))
    h = ops.build_operator(fl, None, "H", "symmetric")
    a = ops.build_operator(fl, None, "A", "symmetric")
    ad = ops.build_operator(fl, None, "Adag", "symmetric")
    residual, _ = ops.compare(ad @ a, h, range(fl.N + 1), fl.backend.default_tolerance())
    assert residual < fl.backend.default_tolerance()


@pytest.mark.parametrize("family,params,kw", [
    ("R", [-8, 10, 2, F(3, 2)], {}),
    ("dH", [1, 2], {"N": 8}),
    ("dqH", [F(1, 2), F(1, 4)], {"N": 6, "q": F(1, 2)}),
])
def test_hat_pair_factorises_both_hamiltonians(family, params, kw):
    spec = make_spec(family, params, backend=float_backend(192), **kw)
    ell = 1
    a, ad = ops.hat_pair(spec, ell)
    sg = ops.hat_sign(spec)
    kh = dfm.kappa_hat(spec, ell)
    shift = dfm.fhat(spec, ell, 0) * dfm.bhat(spec, ell, 0)
    h_mu = ops.build_operator(dfm.mu_spec(spec, ell), None, "H", "symmetric")
    h_ell = ops.build_operator(spec, ell, "H_ell", "symmetric")
    tol = spec.backend.sum_tolerance()
    rows = range(spec.N - ell + 1)
    assert ops.compare(ad @ a, h_mu.plus_identity(shift).scaled(sg * kh), rows, tol)[0] < tol
    assert ops.compare(a @ ad, h_ell.plus_identity(shift).scaled(sg * kh), rows, tol)[0] < tol


def test_hat_sign():
    assert ops.hat_sign(make_spec("dH", [1, 2], N=8)) == -1
    assert ops.hat_sign(make_spec("R", [-8, 10, 2, F(3, 2)])) == 1
