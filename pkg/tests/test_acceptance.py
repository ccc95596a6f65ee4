"""Acceptance criteria 1-7, one summary line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
printed when the module finishes.
"""

import random
from fractions import Fraction as F

import pytest

from draws import draw
from xracah import checks as C
from xracah import limits as lim
from xracah.families import FAULT_NAMES, is_admissible, make_spec
from xracah.verify import run_suite

ELLS = (1, 2, 3)
SWEEP_DRAWS = 50
SWEEP_SEEDS = {"R": 1101, "qR": 1102, "dH": 1103, "dqH": 1104, "lqJ": 1105}

ORIGINAL = ["boundary", "pn1", "difference_equation", "forward_backward", "orthogonality", "factorization"]
DEFORMED = ["xi_positivity", "xi_identities", "xi_difference_equation", "deformed_shape_invariance",
            "exceptional_structure", "deformed_orthogonality", "deformed_norms", "deformed_eigen"]
INTERTWINING = ["hat_hamiltonians", "hat_shift_actions", "hat_intertwining", "energy_factorization"]

_results: dict = {}


def _record(criterion: str, ok: bool, detail: str):
    prev = _results.get(criterion)
    if prev is not None:
        ok = ok and prev[0]
        detail = f"{prev[1]}; {detail}"
    _results[criterion] = (ok, detail)


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    capman = request.config.pluginmanager.getplugin("capturemanager")
    lines = [f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}" for k, (ok, detail) in sorted(_results.items())]
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + "\n".join(lines))
    else:
        print("\n".join(lines))


def racah():
    return make_spec("R", [-8, 10, 2, F(3, 2)])


def qracah():
    return make_spec("qR", [64, F(1, 256), F(3, 4), F(1, 2)], q=F(1, 2))


def _exact_zero(report):
    return report.passed and all(c.residual == 0 for c in report.checks)


def _failing(report):
    return sorted({f"{c.name}[{c.ell}]" if c.ell is not None else c.name for c in report.failures})


def test_criterion_1_original_suite():
    ok, parts = True, []
    for spec in (racah(), qracah()):
        assert is_admissible(spec)
        report = run_suite(spec, [], names=ORIGINAL)
        good = _exact_zero(report) and {c.name for c in report.checks} == set(ORIGINAL)
        ok &= good
        parts.append(f"{spec.family}: {len(report.checks)} checks{'' if good else ' ' + str(_failing(report))}")
    _record("1", ok, ", ".join(parts))
    assert ok


def test_criterion_2_deformed_suite():
    ok, parts = True, []
    for spec in (racah(), qracah()):
        report = run_suite(spec, ELLS, names=DEFORMED)
        good = _exact_zero(report) and len(report.checks) == len(DEFORMED) * len(ELLS)
        ok &= good
        parts.append(f"{spec.family}: {len(report.checks)} checks{'' if good else ' ' + str(_failing(report))}")
    _record("2", ok, ", ".join(parts))
    assert ok


def _criterion_3_specs():
    return [
        racah(),
        qracah(),
        make_spec("dH", [1, 2], N=8),
        make_spec("dqH", [F(1, 2), F(1, 4)], N=6, q=F(1, 2)),
        make_spec("lqJ", [F(1, 2), F(1, 2)], q=F(1, 2)),
    ]


def test_criterion_3_intertwining_suite():
    opts = C.SuiteOptions(window=24, trunc_tol=F(1, 10 ** 30))
    ok, parts = True, []
    for spec in _criterion_3_specs():
        report = run_suite(spec, ELLS, names=INTERTWINING, options=opts)
        good = _exact_zero(report)
        if not spec.finite:
            sums = run_suite(spec, ELLS, names=["orthogonality", "deformed_orthogonality"], options=opts)
            bounded = all(c.status == "bounded" and float(c.detail["max_tail_bound"]) < 1e-30
                          for c in sums.checks)
            good = good and bounded
        ok &= good
        parts.append(f"{spec.family} {'ok' if good else _failing(report)}")
    _record("3", ok, ", ".join(parts))
    assert ok


def test_criterion_4_zero_counts():
    ok, total = True, 0
    for spec in (racah(), qracah()):
        for ell in ELLS:
            counts = C.sturm_counts(spec, ell, C.SuiteOptions())
            expected = {n: n for n in range(spec.N - ell + 1)}
            ok &= counts == expected
            total += len(counts)
    _record("4", ok, f"{total} (ell, n) pairs counted")
    assert ok


def test_criterion_5_limits():
    reports = [
        lim.check_limit_dqH_from_qR(F(1, 2), (F(1, 2), F(1, 4)), 4, ["1e-2", "1e-4", "1e-6"], prec=256),
        lim.check_limit_R_from_qR((-8, 10, 2, F(3, 2)), prec=256),
        lim.check_limit_dH_from_dqH((1, 2), 4, prec=256),
    ]
    ok = all(r.passed for r in reports)
    first = reports[0]
    orders = [float(s.order) for s in first.steps[1:]]
    detail = [f"qR-to-dqH orders {', '.join(f'{o:.3f}' for o in orders)}"]
    for r in reports[1:]:
        detail.append(f"{r.name} extrapolated {float(r.steps[-1].extrapolated):.1e}")
    _record("5", ok, "; ".join(detail))
    assert ok
    devs = [s.deviation for s in first.steps]
    assert devs[0] > devs[1] > devs[2] and min(orders) >= 1
    for r in reports[1:]:
        raw = [s.deviation for s in r.steps]
        assert all(b < a for a, b in zip(raw, raw[1:]))
        assert r.steps[-1].extrapolated < r.tolerance


def test_criterion_6_fault_sensitivity():
    caught = {}
    for fault in FAULT_NAMES:
        names = set()
        for spec in (racah(), qracah()):
            names.update(_failing(run_suite(spec.with_faults(fault), [1])))
        caught[fault] = sorted(names)
    ok = all(caught.values())
    _record("6", ok, ", ".join(f"{k} -> {v[0] if v else 'UNDETECTED'}" for k, v in caught.items()))
    assert ok


@pytest.mark.parametrize("family", ["R", "qR", "dH", "dqH", "lqJ"])
def test_criterion_7_random_sweep(family):
    rng = random.Random(SWEEP_SEEDS[family])
    opts = C.SuiteOptions(lqj_n_max=3)
    failures = []
    for i in range(SWEEP_DRAWS):
        spec = draw(family, rng, ells=(1, 2))
        assert 4 <= (spec.N or 4) <= 8
        report = run_suite(spec, [1, 2], options=opts)
        if not report.passed:
            failures.append((i, spec.describe(), _failing(report)))
    ok = not failures
    _record("7", ok, f"{family} {SWEEP_DRAWS - len(failures)}/{SWEEP_DRAWS}")
    assert ok, failures[:3]
