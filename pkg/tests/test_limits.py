from fractions import Fraction as F

import pytest

from xracah import limits as lim


def test_richardson_removes_polynomial_error():
    # f(h) = 3 + 2h - 5h^2 is recovered exactly from three samples
    hs = [F(1, 2), F(1, 4), F(1, 8)]
    values = [[3 + 2 * h - 5 * h * h] for h in hs]
    assert lim.richardson(hs, values) == [3]
    with pytest.raises(ValueError):
        lim.richardson([], [])


def test_q_sequence():
    qs = lim.q_sequence(range(4, 7))
    assert [float(1 - q) for q in qs] == [2 ** -4, 2 ** -5, 2 ** -6]


def test_q_racah_to_dual_q_hahn():
    report = lim.check_limit_dqH_from_qR(F(1, 2), (F(1, 2), F(1, 4)), 4, ["1e-2", "1e-4", "1e-6"])
    assert report.passed
    devs = [s.deviation for s in report.steps]
    assert devs[0] > devs[1] > devs[2]
    # roughly two decades per step
    assert 50 < devs[1] / devs[2] < 200
    assert all(s.order >= 1 for s in report.steps[1:])


def test_zero_parameter_is_the_target():
    report = lim.check_limit_dqH_from_qR(F(1, 2), (F(1, 2), F(1, 4)), 4, [0])
    assert report.steps[0].deviation == 0


def test_q_racah_to_racah():
    report = lim.check_limit_R_from_qR((-8, 10, 2, F(3, 2)))
    assert report.passed, report.reason
    devs = [s.deviation for s in report.steps]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert report.steps[-1].extrapolated < report.tolerance


def test_dual_q_hahn_to_dual_hahn():
    report = lim.check_limit_dH_from_dqH((1, 2), 4)
    assert report.passed, report.reason


def test_nonconvergence_raised_for_growing_steps():
    with pytest.raises(lim.NonConvergence) as info:
        lim.check_limit_dqH_from_qR(F(1, 2), (F(1, 2), F(1, 4)), 4, ["1e-6", "1e-4", "1e-2"])
    assert not info.value.report.converged
    report = lim.check_limit_dqH_from_qR(F(1, 2), (F(1, 2), F(1, 4)), 4, ["1e-6", "1e-4", "1e-2"],
                                         strict=False)
    assert report.status == "fail"


def test_tolerance_failure_is_not_nonconvergence():
    report = lim.check_limit_dH_from_dqH((1, 2), 4, qs=["0.9", "0.99", "0.999"], strict=False)
    assert report.converged
    assert report.status == "fail"


def test_q_racah_to_little_q_jacobi():
    report = lim.check_limit_lqJ_from_qR(F(1, 2), (F(1, 2), F(1, 2)), [8, 12, 16])
    assert report.passed
    devs = [s.deviation for s in report.steps]
    assert devs[0] > devs[1] > devs[2]
    with pytest.raises(ValueError):
        lim.check_limit_lqJ_from_qR(F(1, 2), (F(1, 2), F(1, 2)), [2, 3])


def test_run_limit_dispatch():
    with pytest.raises(ValueError):
        lim.run_limit("R-to-nowhere")
    report = lim.run_limit("qR-to-dqH", q=F(1, 2), params=(F(1, 2), F(1, 4)), N=4, t_sequence=["1e-3", "1e-5"])
    assert report.to_dict()["name"] == "qR-to-dqH"
