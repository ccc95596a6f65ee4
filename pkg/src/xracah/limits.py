"""Float-backend limit sweeps between families.

Each sweep builds a source family at a sequence of parameter values and
compares normalised quantities against the directly constructed target:
``eta(x)/eta(1)``, ``E_n/E_1``, ``B(x)/E_1``, ``D(x)/E_1`` and ``P_n(x)``.
The normalisation removes the overall rescalings between families.
Deviations are absolute maxima over the compared entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import base
from .families import FamilySpec
from .scalar import Backend, float_backend

DEFAULT_PREC = 256
DEFAULT_TOL = "1e-8"
LIMIT_NAMES = ("qR-to-dqH", "qR-to-R", "dqH-to-dH", "qR-to-lqJ")


class NonConvergence(ArithmeticError):
    def __init__(self, message: str, report: "LimitReport"):
        super().__init__(message)
        self.report = report


@dataclass
class LimitStep:
    parameter: object  # t, q or N
    deviation: object
    order: Optional[object] = None  # empirical order against the previous step
    extrapolated: Optional[object] = None  # Richardson estimate using steps so far


@dataclass
class LimitReport:
    name: str
    source: str
    target: dict
    steps: List[LimitStep] = field(default_factory=list)
    status: str = "pass"
    reason: str = ""
    tolerance: object = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def converged(self) -> bool:
        return not self.reason.startswith("NonConvergence")

    def rows(self) -> list:
        return [{"parameter": s.parameter, "deviation": s.deviation,
                 "order": s.order, "extrapolated": s.extrapolated} for s in self.steps]

    def to_dict(self) -> dict:
        return {"name": self.name, "source": self.source, "target": self.target,
                "status": self.status, "converged": self.converged, "reason": self.reason,
                "tolerance": self.tolerance, "steps": self.rows()}


def normalized_quantities(spec: FamilySpec, xs: Sequence[int], ns: Sequence[int]) -> list:
    e1 = spec.model.energy(spec, 1)
    eta1 = base.eta(spec, 1)
    out = [base.eta(spec, x) / eta1 for x in xs]
    out += [base.energy(spec, n) / e1 for n in ns]
    out += [base.B(spec, x) / e1 for x in xs]
    out += [base.D(spec, x) / e1 for x in xs]
    out += [base.p_check(spec, n, x) for n in ns for x in xs]
    return out


def max_deviation(a: Sequence, b: Sequence):
    return max(abs(x - y) for x, y in zip(a, b))


def richardson(hs: Sequence, values: Sequence[Sequence]) -> list:
    """Extrapolate vector samples ``values[i]`` at step sizes ``hs[i]`` to ``h = 0``.

    Neville tableau eliminating ``h, h^2, ...`` in turn (error exponents
    step by one starting from one).
    """
    if len(hs) != len(values) or not hs:
        raise ValueError("need matching, non-empty step and value sequences")
    prev = [list(v) for v in values]
    for j in range(1, len(hs)):
        cur = []
        for i in range(j, len(hs)):
            r = hs[i - j] / hs[i] - 1
            cur.append([b + (b - a) / r for a, b in zip(prev[i - j], prev[i - j + 1])])
        prev = cur
    return prev[-1]


def _orders(ctx, params, devs):
    out = [None]
    for i in range(1, len(devs)):
        if devs[i] == 0 or devs[i - 1] == 0:
            out.append(None)
        else:
            out.append(ctx.log(devs[i - 1] / devs[i]) / ctx.log(params[i - 1] / params[i]))
    return out


def _monotone_tail(devs, k: int = 3) -> bool:
    tail = devs[-k:]
    return all(b < a for a, b in zip(tail, tail[1:]))


def _finish(report: LimitReport, strict: bool) -> LimitReport:
    if report.status == "fail" and report.reason.startswith("NonConvergence") and strict:
        raise NonConvergence(report.reason, report)
    return report


def _backend(prec: int) -> Backend:
    return float_backend(prec)


def check_limit_dqH_from_qR(q, params, N: int, t_sequence: Sequence, prec: int = DEFAULT_PREC,
                            strict: bool = True) -> LimitReport:
    """qR at ``(q^-N, a, t, a b / q)`` against dqH ``(a, b)`` as ``t -> 0``.

    Passes when deviations decrease along the sequence with empirical order
    at least one; the Richardson estimate is reported alongside.
    """
    be = _backend(prec)
    ctx = be.ctx
    qv = be.scalar(q)
    a, b = (be.scalar(p) for p in params)
    target = FamilySpec("dqH", (a, b, qv ** N), qv, N, be)
    xs = ns = range(N + 1)
    ref = normalized_quantities(target, xs, ns)
    report = LimitReport("qR-to-dqH", "qR", target.describe())
    ts, samples, devs = [], [], []
    for t in t_sequence:
        tv = be.scalar(t)
        if tv == 0:
            vals = ref  # the target itself
        else:
            src = FamilySpec("qR", (qv ** (-N), a, tv, a * b / qv), qv, N, be)
            vals = normalized_quantities(src, xs, ns)
        ts.append(tv)
        samples.append(vals)
        devs.append(max_deviation(vals, ref))
    orders = _orders(ctx, ts, devs) if all(t != 0 for t in ts) else [None] * len(ts)
    for i, (t, d, o) in enumerate(zip(ts, devs, orders)):
        ext = None
        if i > 0 and all(v != 0 for v in ts[: i + 1]):
            ext = max_deviation(richardson(ts[: i + 1], samples[: i + 1]), ref)
        report.steps.append(LimitStep(t, d, o, ext))
    if len(devs) >= 2 and not _monotone_tail(devs):
        report.status, report.reason = "fail", "NonConvergence: deviations do not decrease over the final steps"
    elif any(o is not None and o < 1 for o in orders):
        report.status, report.reason = "fail", "empirical order below one"
    return _finish(report, strict)


def q_sequence(ks: Sequence[int] = range(4, 11), prec: int = DEFAULT_PREC) -> list:
    """``q = 1 - 2^-k``."""
    be = _backend(prec)
    return [1 - be.scalar(2) ** (-k) for k in ks]


def _q_to_one(name, source_of, target: FamilySpec, qs: Sequence, xs, ns, tol, prec, strict):
    be = _backend(prec)
    ctx = be.ctx
    tolv = be.scalar(tol)
    ref = normalized_quantities(target, xs, ns)
    report = LimitReport(name, name.split("-to-")[0], target.describe(), tolerance=tolv)
    hs, samples, devs = [], [], []
    for qv in qs:
        qv = be.scalar(qv)
        vals = normalized_quantities(source_of(qv), xs, ns)
        hs.append(1 - qv)
        samples.append(vals)
        devs.append(max_deviation(vals, ref))
    orders = _orders(ctx, hs, devs)
    ext = None
    for i in range(len(hs)):
        ext = max_deviation(richardson(hs[: i + 1], samples[: i + 1]), ref) if i > 0 else None
        report.steps.append(LimitStep(qs[i], devs[i], orders[i], ext))
    if len(devs) >= 2 and not all(b < a for a, b in zip(devs, devs[1:])):
        report.status, report.reason = "fail", "NonConvergence: deviations do not decrease monotonically"
    elif ext is None or not ext < tolv:
        report.status, report.reason = "fail", "extrapolated deviation above tolerance"
    return _finish(report, strict)


def check_limit_R_from_qR(params, qs: Optional[Sequence] = None, tol=DEFAULT_TOL,
                          prec: int = DEFAULT_PREC, strict: bool = True) -> LimitReport:
    """qR at ``(q^a, q^b, q^c, q^d)`` against R ``(a, b, c, d)`` as ``q -> 1``."""
    be = _backend(prec)
    lam = tuple(be.scalar(p) for p in params)
    N = -int(lam[0])
    target = FamilySpec("R", lam, None, N, be)
    qs = list(qs) if qs is not None else q_sequence(prec=prec)
    xs = ns = range(N + 1)

    def source(qv):
        return FamilySpec("qR", tuple(qv ** v for v in lam), qv, N, be)

    return _q_to_one("qR-to-R", source, target, qs, xs, ns, tol, prec, strict)


def check_limit_dH_from_dqH(params, N: int, qs: Optional[Sequence] = None, tol=DEFAULT_TOL,
                            prec: int = DEFAULT_PREC, strict: bool = True) -> LimitReport:
    """dqH at ``(q^a, q^b)`` against dH ``(a, b)`` as ``q -> 1``."""
    be = _backend(prec)
    a, b = (be.scalar(p) for p in params)
    target = FamilySpec("dH", (a, b, be.scalar(N)), None, N, be)
    qs = list(qs) if qs is not None else q_sequence(prec=prec)
    xs = ns = range(N + 1)

    def source(qv):
        return FamilySpec("dqH", (qv ** a, qv ** b, qv ** N), qv, N, be)

    return _q_to_one("dqH-to-dH", source, target, qs, xs, ns, tol, prec, strict)


def lqj_source_t(q, N: int):
    """Default coupling of the auxiliary parameter to the grid size: ``t = q^(2N)``."""
    return q ** (2 * N)


def check_limit_lqJ_from_qR(q, params, N_sequence: Sequence[int], t_sequence: Optional[Sequence] = None,
                            window: int = 4, n_max: int = 4, prec: int = DEFAULT_PREC,
                            strict: bool = True) -> LimitReport:
    """qR at ``(q^-N, a q^(N+1)/t, b q, 1/t)`` against lqJ ``(a, b)`` on ``x <= window``."""
    be = _backend(prec)
    qv = be.scalar(q)
    a, b = (be.scalar(p) for p in params)
    target = FamilySpec("lqJ", (a, b), qv, None, be)
    xs, ns = range(window + 1), range(n_max + 1)
    ref = normalized_quantities(target, xs, ns)
    report = LimitReport("qR-to-lqJ", "qR", target.describe())
    ts = list(t_sequence) if t_sequence is not None else [lqj_source_t(qv, N) for N in N_sequence]
    if len(ts) != len(N_sequence):
        raise ValueError("t_sequence and N_sequence must have the same length")
    devs = []
    for N, t in zip(N_sequence, ts):
        if N < max(window, n_max):
            raise ValueError("N must cover the comparison window")
        tv = be.scalar(t)
        src = FamilySpec("qR", (qv ** (-N), a * qv ** (N + 1) / tv, b * qv, 1 / tv), qv, N, be)
        d = max_deviation(normalized_quantities(src, xs, ns), ref)
        devs.append(d)
        report.steps.append(LimitStep(N, d))
    if len(devs) >= 2 and not _monotone_tail(devs):
        report.status, report.reason = "fail", "NonConvergence: deviations do not shrink with N"
    return _finish(report, strict)


def run_limit(which: str, **kwargs) -> LimitReport:
    fns = {
        "qR-to-dqH": check_limit_dqH_from_qR,
        "qR-to-R": check_limit_R_from_qR,
        "dqH-to-dH": check_limit_dH_from_dqH,
        "qR-to-lqJ": check_limit_lqJ_from_qR,
    }
    if which not in fns:
        raise ValueError(f"unknown limit {which!r}; choose from {', '.join(LIMIT_NAMES)}")
    return fns[which](**kwargs)
