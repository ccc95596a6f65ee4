import json
from fractions import Fraction as F

import pytest

from xracah import checks as C
from xracah.families import ParameterError, make_spec
from xracah.scalar import float_backend
from xracah.verify import plan, run_suite


def _by_name(report, name, ell=None):
    return next(c for c in report.checks if c.name == name and c.ell == ell)


def test_racah_full_suite_exact(racah):
    report = run_suite(racah, [1, 2, 3])
    assert report.passed, [c.name for c in report.failures]
    assert all(c.residual == 0 for c in report.checks)


def test_orthogonality_pair_count(racah):
    r = C.check_deformed_orthogonality(racah, 2, C.SuiteOptions())
    assert r.status == "pass" and r.detail["pairs"] == 49


def test_zero_count(racah):
    counts = C.sturm_counts(racah, 1, C.SuiteOptions())
    assert counts[3] == 3
    assert counts == {n: n for n in range(8)}


def test_shape_invariance_original(racah):
    r = C.check_shape_invariance(racah, C.SuiteOptions())
    assert r.passed and r.residual == 0


def test_ell_zero_runs_original_checks_only(racah):
    groups = {cd.group for cd, _ in plan(racah, [0])}
    assert groups == {"base"}


def test_plan_filters_by_name(racah):
    tasks = plan(racah, [1, 2], ["orthogonality", "eigen"])
    names = {cd.name for cd, _ in tasks}
    assert names == {"orthogonality", "deformed_orthogonality", "difference_equation", "deformed_eigen"}
    with pytest.raises(ValueError):
        plan(racah, [1], ["bogus"])


def test_fhat_fault_names_witness(racah):
    report = run_suite(racah.with_faults("fhat"), [1])
    bad = _by_name(report, "hat_shift_actions", 1)
    assert bad.status == "fail"
    assert bad.witness["n"] == 0


@pytest.mark.parametrize("fault", ["dn2", "dln2", "fhat", "bhat", "s", "kappa_hat"])
def test_every_fault_is_detected(racah, fault):
    assert not run_suite(racah.with_faults(fault), [1]).passed


def test_inadmissible_rejected_unless_forced():
    spec = make_spec("R", [-8, 10, 4, F(3, 2)])
    with pytest.raises(ParameterError):
        run_suite(spec, [])
    report = run_suite(spec, [], names=["boundary"], force=True)
    assert report.violations == ["c<1+d fails"]


def test_ell_bound(racah):
    with pytest.raises(ParameterError):
        run_suite(racah, [8])


def test_report_independent_of_jobs(qracah):
    one = run_suite(qracah, [1, 2], jobs=1).to_json(timing=False)
    two = run_suite(qracah, [1, 2], jobs=2).to_json(timing=False)
    assert one == two
    payload = json.loads(one)
    assert payload["passed"] is True
    assert payload["spec"]["lambda"] == ["64", "1/256", "3/4", "1/2"]


def test_little_q_jacobi_bounded_sums(lqj):
    opts = C.SuiteOptions(window=24, lqj_n_max=4)
    r = C.check_orthogonality(lqj, opts)
    assert r.status == "bounded"
    assert float(r.detail["max_tail_bound"]) < 1e-30
    r = C.check_deformed_orthogonality(lqj, 2, opts)
    assert r.status == "bounded"


def test_float_backend_suite(racah):
    report = run_suite(racah.with_backend(float_backend(256)), [1, 2])
    assert report.passed, [c.name for c in report.failures]
    names = {c.name for c in report.checks}
    assert {"symmetric_hamiltonian", "spectrum", "hat_symmetric"} <= names
    assert _by_name(report, "zeros", 1).status == "skipped"


@pytest.mark.parametrize("family,params,kw", [
    ("dH", [1, 2], {"N": 8}),
    ("dqH", [F(1, 2), F(1, 4)], {"N": 6, "q": F(1, 2)}),
])
def test_dual_families_full_suite(family, params, kw):
    report = run_suite(make_spec(family, params, **kw), [1, 2, 3])
    assert report.passed, [c.name for c in report.failures]


def test_text_report(racah):
    text = run_suite(racah, [1], names=["boundary", "zeros"]).to_text()
    assert "PASS" in text and "2 checks, 0 failed" in text
