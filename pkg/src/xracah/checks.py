"""Named identity checks over the original, deformed and intertwined systems.

Every check returns one :class:`CheckResult` summarising all grid points and
indices it visited.  On the exact backend a check passes only with residual
exactly zero.  On the float backend entry differences are measured relative
to ``max(1, |lhs|, |rhs|)`` against the suite tolerance.  Sums over the
infinite little q-Jacobi grid are truncated with a certified geometric tail
bound and reported as ``bounded``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import base
from . import deformed as dfm
from . import operators as ops
from .families import FamilySpec, shift_lambda, twist
from .polynomials import count_roots_open
from .scalar import float_backend


@dataclass
class CheckResult:
    name: str
    formula: str
    backend: str
    status: str  # pass | fail | bounded | skipped
    residual: object = 0
    witness: Optional[dict] = None
    ell: Optional[int] = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "bounded", "skipped")


@dataclass(frozen=True)
class SuiteOptions:
    window: int = 24
    trunc_tol: Fraction = Fraction(1, 10 ** 30)
    lqj_n_max: int = 5
    tol: object = None  # float backend tolerance override; None = backend defaults
    extra_prec: int = 256  # bits for infinite products


class Tally:
    """Accumulates the worst residual and first failing witness."""

    def __init__(self, spec: FamilySpec, opts: SuiteOptions, direct: bool = False):
        self.exact = spec.backend.exact
        if self.exact:
            self.tol = None
        elif opts.tol is not None:
            self.tol = opts.tol
        else:
            be = spec.backend
            self.tol = be.default_tolerance() if direct else be.sum_tolerance()
        self.worst = 0
        self.witness = None
        self.detail: dict = {}

    def _flag(self, where):
        if self.witness is None:
            self.witness = dict(where)

    def eq(self, lhs, rhs, **where):
        d = abs(lhs - rhs)
        if not self.exact:
            scale = max(1, abs(lhs), abs(rhs))
            d = d / scale
            bad = d > self.tol
        else:
            bad = d != 0
        if bad:
            self._flag(where)
        if d > self.worst:
            self.worst = d

    def holds(self, cond: bool, **where):
        if not cond:
            self._flag(where)
            self.worst = max(self.worst, 1)

    def merge(self, residual, witness):
        if witness is not None:
            self._flag(witness)
        if residual > self.worst:
            self.worst = residual

    def result(self, name, formula, spec, ell=None, bounded=False) -> CheckResult:
        failed = self.witness is not None
        status = "fail" if failed else ("bounded" if bounded else "pass")
        return CheckResult(name, formula, str(spec.backend), status, self.worst,
                           self.witness, ell, dict(self.detail))

    def compare_ops(self, lhs: ops.ShiftOperator, rhs: ops.ShiftOperator, rows, **where):
        for x in rows:
            a, b = lhs.row(x), rhs.row(x)
            for s in set(a) | set(b):
                self.eq(a.get(s, 0), b.get(s, 0), x=x, column=x + s, **where)


# --- index ranges -------------------------------------------------------------

def xs_of(spec: FamilySpec, opts: SuiteOptions) -> range:
    return base.grid(spec, opts.window)


def ns_of(spec: FamilySpec, opts: SuiteOptions) -> range:
    return range(spec.N + 1) if spec.finite else range(opts.lqj_n_max + 1)


def xs_ell(spec: FamilySpec, ell: int, opts: SuiteOptions) -> range:
    return dfm.deformed_grid(spec, ell, opts.window)


def ns_ell(spec: FamilySpec, ell: int, opts: SuiteOptions) -> range:
    return range(spec.N - ell + 1) if spec.finite else range(opts.lqj_n_max + 1)


def _rows(op: ops.ShiftOperator, opts: SuiteOptions) -> range:
    return op.row_range(opts.window)


def _vec(fn):
    return lambda y: fn(y)


# --- original system ------------------------------------------------------------

def check_boundary(spec, opts):
    t = Tally(spec, opts)
    t.eq(base.D(spec, 0), 0, x=0, which="D")
    if spec.finite:
        t.eq(base.B(spec, spec.N), 0, x=spec.N, which="B")
    return t.result("boundary", "D(0) = 0 and B(x_max) = 0", spec)


def check_positivity(spec, opts):
    t = Tally(spec, opts)
    xs = xs_of(spec, opts)
    top = xs[-1]
    for x in xs:
        if not spec.finite or x < top:
            t.holds(base.B(spec, x) > 0, x=x, which="B")
        if x > 0:
            t.holds(base.D(spec, x) > 0, x=x, which="D")
        t.holds(base.phi0_sq(spec, x) > 0, x=x, which="phi0_sq")
    t.eq(base.eta(spec, 0), 0, x=0, which="eta")
    for x in xs:
        t.holds(base.eta(spec, x + 1) > base.eta(spec, x), x=x, which="eta increasing")
    return t.result("positivity", "B > 0, D > 0 inside the grid; eta(0) = 0 and eta increasing", spec)


def check_energy(spec, opts):
    t = Tally(spec, opts)
    ns = ns_of(spec, opts)
    t.eq(base.energy(spec, 0), 0, n=0)
    for n in ns[:-1]:
        t.holds(base.energy(spec, n + 1) > base.energy(spec, n), n=n)
    return t.result("energy_spectrum", "0 = E_0 < E_1 < E_2 < ...", spec)


def check_pn1(spec, opts):
    t = Tally(spec, opts)
    b0 = base.B(spec, 0)
    for n in ns_of(spec, opts):
        t.eq(base.p_check(spec, n, 1), 1 - base.energy(spec, n) / b0, n=n)
    return t.result("pn1", "P_n(eta(1)) = 1 - E_n / B(0)", spec)


def check_varphi(spec, opts):
    t = Tally(spec, opts)
    e1 = base.eta(spec, 1)
    for x in xs_of(spec, opts):
        t.eq(base.varphi(spec, x), (base.eta(spec, x + 1) - base.eta(spec, x)) / e1, x=x)
    return t.result("varphi", "varphi(x) = (eta(x+1) - eta(x)) / eta(1)", spec)


def check_weight_product(spec, opts):
    t = Tally(spec, opts)
    for x in xs_of(spec, opts):
        t.eq(base.phi0_sq(spec, x), base.phi0_sq_product(spec, x), x=x)
    return t.result("weight_product", "phi0(x)^2 = prod_{y<x} B(y)/D(y+1)", spec)


def check_factorization(spec, opts):
    """Potentials split into v-factors over the half-step auxiliary function."""
    t = Tally(spec, opts)
    st = shift_lambda(spec, 1, "delta_tilde")
    for x in xs_of(spec, opts):
        v1b, v2b, v1d, v2d = dfm.v_factors(spec, x)
        phi = base.varphi(st, x)
        t.eq(base.B(spec, x) * phi * base.varphi_half(st, x, 1), -v1b * v2b, x=x, which="B")
        t.eq(base.D(spec, x) * phi * base.varphi_half(st, x, -1), -v1d * v2d, x=x, which="D")
    return t.result("factorization",
                    "B = -sqrt(kappa) v1B v2B / (varphi(x) varphi(x+1/2)) at lambda+delta_tilde; D alike",
                    spec)


def check_eta_polynomial(spec, opts):
    t = Tally(spec, opts)
    xs = xs_of(spec, opts)
    for n in ns_of(spec, opts):
        p = base.p_poly(spec, n)
        t.holds(p.degree == n, n=n, which="degree")
        t.eq(p.coeffs[0], 1, n=n, which="P(0)")
        for x in xs:
            t.eq(p(base.eta(spec, x)), base.p_check(spec, n, x), n=n, x=x)
    return t.result("eta_polynomial", "P_n is a degree-n polynomial in eta with P_n(0) = 1", spec)


def check_difference_equation(spec, opts):
    t = Tally(spec, opts)
    h = ops.htilde(spec)
    for n in ns_of(spec, opts):
        e = base.energy(spec, n)
        f = lambda y, n=n: base.p_check(spec, n, y)
        for x in _rows(h, opts):
            t.eq(h.apply(f, x), e * f(x), n=n, x=x)
    return t.result("difference_equation", "B(x)(P(x)-P(x+1)) + D(x)(P(x)-P(x-1)) = E_n P(x)", spec)


def check_forward_backward(spec, opts):
    t = Tally(spec, opts)
    up = shift_lambda(spec, 1)
    fw, bw = ops.forward(spec), ops.backward(spec)
    for n in ns_of(spec, opts):
        e = base.energy(spec, n)
        pn = lambda y, n=n: base.p_check(spec, n, y)
        for x in _rows(fw, opts):
            rhs = e * base.p_check(up, n - 1, x) if n > 0 else 0
            t.eq(fw.apply(pn, x), rhs, n=n, x=x, which="F")
        if n > 0:
            prev = lambda y, n=n: base.p_check(up, n - 1, y)
            for x in _rows(bw, opts):
                t.eq(bw.apply(prev, x), pn(x), n=n, x=x, which="B")
    return t.result("forward_backward", "F P_n = E_n P_{n-1}(lambda+delta); B P_{n-1}(lambda+delta) = P_n",
                    spec)


def check_htilde_factorization(spec, opts):
    t = Tally(spec, opts)
    h = ops.htilde(spec)
    t.compare_ops(h, ops.backward(spec) @ ops.forward(spec), _rows(h, opts))
    return t.result("htilde_factorization", "Htilde = B F", spec)


def check_shape_invariance(spec, opts):
    t = Tally(spec, opts)
    up = shift_lambda(spec, 1)
    k = spec.kappa
    e1 = base.energy(spec, 1)
    xs = range(spec.N) if spec.finite else range(opts.window + 1)
    for x in xs:
        lhs1 = base.B(spec, x + 1) * base.D(spec, x + 1)
        rhs1 = k * k * base.B(up, x) * base.D(up, x + 1)
        t.eq(lhs1, rhs1, x=x, which="cond1")
        t.holds(lhs1 >= 0 and rhs1 >= 0, x=x, which="cond1 sign")
        t.eq(base.B(spec, x) + base.D(spec, x + 1), k * (base.B(up, x) + base.D(up, x)) + e1,
             x=x, which="cond2")
    return t.result("shape_invariance",
                    "B(x+1)D(x+1) = kappa^2 B(x;lambda+delta)D(x+1;lambda+delta); "
                    "B(x)+D(x+1) = kappa(B+D)(x;lambda+delta) + E_1", spec)


def check_crum_energy(spec, opts):
    t = Tally(spec, opts)
    k = spec.kappa
    for n in ns_of(spec, opts):
        total = 0
        for s in range(n):
            total = total + k ** s * base.energy(shift_lambda(spec, s), 1)
        t.eq(base.energy(spec, n), total, n=n)
    return t.result("crum_energy", "E_n(lambda) = sum_{s<n} kappa^s E_1(lambda + s delta)", spec)


# --- truncated sums on the infinite grid --------------------------------------

def certified_cutoff(weight_spec: FamilySpec, amplitude, xi_poly, scale, opts: SuiteOptions, start: int):
    """Smallest ``X >= start`` whose certified tail bound times ``scale`` is below tolerance.

    ``amplitude`` bounds the polynomial factors on ``0 <= eta <= 1``; when
    ``xi_poly`` is given the weight is divided by ``xi(x) xi(x+1)`` and its
    Lipschitz lower bound near ``eta = 1`` is used.
    """
    q = weight_spec.q
    tol = opts.trunc_tol
    for X in range(start, start + 4000):
        tail = base.weight_tail_bound(weight_spec, X)
        if tail is None:
            continue
        if xi_poly is not None:
            lower = xi_poly(1) - xi_poly.lipschitz_bound() * q ** (X + 1)
            if lower <= 0:
                continue
            tail = tail / (lower * lower)
        bound = abs(scale) * amplitude * tail
        if bound < (tol if isinstance(bound, Fraction) else _numeric(tol, opts.extra_prec)):
            return X, bound
    raise RuntimeError("no certified truncation point found")


def _numeric(v, prec):
    return float_backend(prec).scalar(v)


def check_orthogonality(spec, opts):
    t = Tally(spec, opts)
    ns = ns_of(spec, opts)
    if spec.finite:
        xs = xs_of(spec, opts)
        for n in ns:
            dn2 = base.norm_parts(spec, n).finite
            for m in ns:
                s = 0
                for x in xs:
                    s = s + base.phi0_sq(spec, x) * base.p_check(spec, n, x) * base.p_check(spec, m, x)
                t.eq(s * dn2, 1 if n == m else 0, n=n, m=m)
        t.detail = {"pairs": len(ns) ** 2}
        return t.result("orthogonality", "sum_x phi0^2 P_n P_m = delta_nm / d_n^2", spec)
    amps = {n: base.p_poly(spec, n).abs_coefficient_sum() for n in ns}
    norms = {n: base.norm_parts(spec, n).value(opts.extra_prec) for n in ns}
    _truncated_gram(t, spec, spec, lambda x: base.phi0_sq(spec, x),
                    lambda n, x: base.p_check(spec, n, x), ns, norms, amps, None, opts)
    return t.result("orthogonality", "sum_x phi0^2 P_n P_m = delta_nm / d_n^2 (truncated, certified tail)",
                    spec, bounded=True)


def _truncated_gram(t: Tally, spec, weight_spec, weight, pval, ns, norms, amps, xi_poly, opts):
    """Truncated Gram matrix on the infinite grid with one cutoff certified for every pair.

    The cutoff is chosen for the largest norm and amplitude, so each pair's
    tail ``|d_n^2| amp_n amp_m tail(X)`` is below the truncation tolerance.
    The finite part is accumulated at ``extra_prec`` bits; its rounding error
    is bounded by ``eps * sum |terms|`` and added to the allowed deviation.
    """
    prec = opts.extra_prec
    ctx = float_backend(prec).ctx
    scale = max(abs(v) for v in norms.values())
    amp = max(amps.values())
    X, bound = certified_cutoff(weight_spec, amp * amp, xi_poly, scale, opts, opts.window)
    ws = [_numeric(weight(x), prec) for x in range(X + 1)]
    vals = {n: [_numeric(pval(n, x), prec) for x in range(X + 1)] for n in ns}
    eps = ctx.mpf(2) ** (-(prec - 16)) if spec.backend.exact else _numeric(spec.backend.sum_tolerance(), prec)
    for n in ns:
        weighted = [w * v for w, v in zip(ws, vals[n])]
        abs_weighted = [abs(v) for v in weighted]
        norm = _numeric(norms[n], prec)
        for m in ns:
            total = ctx.fdot(weighted, vals[m])
            size = ctx.fdot(abs_weighted, [abs(v) for v in vals[m]])
            dev = abs(total * norm - (1 if n == m else 0))
            if dev > bound + eps * (size * abs(norm) + 1):
                t._flag({"n": n, "m": m, "X": X})
            t.worst = max(t.worst, dev)
    t.detail = {"truncation_point": X, "max_tail_bound": bound, "tolerance": opts.trunc_tol}


# --- deformed system --------------------------------------------------------------

def check_xi_positivity(spec, ell, opts):
    t = Tally(spec, opts)
    d = dfm.deforming_xi(spec, ell, opts.window, require_positive=False)
    for x, v in enumerate(d.values):
        t.holds(v > 0, x=x)
    t.eq(d.values[0], 1, x=0, which="xi(0)")
    t.holds(d.poly.degree == ell, which="degree")
    return t.result("xi_positivity", "xi_ell(x) > 0 on 0..x_max^ell+1, xi_ell(0) = 1, degree ell", spec, ell)


def check_xi_identities(spec, ell, opts):
    t = Tally(spec, opts)
    lam_l = shift_lambda(spec, ell)
    mu = dfm.mu_spec(spec, ell)
    prev = shift_lambda(spec, ell - 1)
    prev_t = shift_lambda(prev, 1, "delta_tilde")
    up = shift_lambda(spec, 1)
    f0 = dfm.fhat(spec, ell, 0)
    b0 = dfm.bhat(spec, ell, 0)
    for x in xs_ell(spec, ell, opts):
        v1b, _, v1d, _ = dfm.v_factors(lam_l, x)
        lhs = (v1b * dfm.xi(spec, ell, x) - v1d * dfm.xi(spec, ell, x + 1)) / base.varphi(mu, x)
        t.eq(lhs, f0 * dfm.xi(up, ell, x), x=x, which="raise")
        _, v2b, _, v2d = dfm.v_factors(prev, x)
        lhs = v2b * dfm.xi(up, ell, x)
        if v2d != 0:
            lhs = lhs - v2d * dfm.xi(up, ell, x - 1)
        t.eq(lhs / base.varphi(prev_t, x), b0 * dfm.xi(spec, ell, x), x=x, which="lower")
    return t.result("xi_identities",
                    "(v1B - v1D e^d) xi(lambda) / varphi = fhat_0 xi(lambda+delta); "
                    "(v2B - v2D e^-d) xi(lambda+delta) / varphi = bhat_0 xi(lambda)", spec, ell)


def check_xi_difference_equation(spec, ell, opts):
    t = Tally(spec, opts)
    tw = twist(shift_lambda(spec, ell - 1))
    e = base.energy(twist(spec), ell)
    for x in xs_ell(spec, ell, opts):
        xv = dfm.xi(spec, ell, x)
        lhs = base.B(tw, x) * (xv - dfm.xi(spec, ell, x + 1))
        dv = base.D(tw, x)
        if dv != 0:
            lhs = lhs + dv * (xv - dfm.xi(spec, ell, x - 1))
        t.eq(lhs, e * xv, x=x)
    return t.result("xi_difference_equation",
                    "xi_ell solves the twisted difference equation with eigenvalue E_ell(t(lambda))",
                    spec, ell)


def check_deformed_boundary(spec, ell, opts):
    t = Tally(spec, opts)
    t.eq(dfm.D_ell(spec, ell, 0), 0, x=0, which="D_ell")
    if spec.finite:
        t.eq(dfm.B_ell(spec, ell, spec.N - ell), 0, x=spec.N - ell, which="B_ell")
    t.eq(dfm.psi_sq(spec, ell, 0), 1, x=0, which="psi")
    return t.result("deformed_boundary", "D_ell(0) = 0, B_ell(x_max^ell) = 0, psi_ell(0) = 1", spec, ell)


def check_deformed_positivity(spec, ell, opts):
    t = Tally(spec, opts)
    xs = xs_ell(spec, ell, opts)
    top = xs[-1]
    for x in xs:
        if not spec.finite or x < top:
            t.holds(dfm.B_ell(spec, ell, x) > 0, x=x, which="B_ell")
        if x > 0:
            t.holds(dfm.D_ell(spec, ell, x) > 0, x=x, which="D_ell")
        t.holds(dfm.psi_sq(spec, ell, x) > 0, x=x, which="psi_sq")
    return t.result("deformed_positivity", "B_ell > 0 and D_ell > 0 inside the deformed grid", spec, ell)


def check_deformed_shape_invariance(spec, ell, opts):
    t = Tally(spec, opts)
    up = shift_lambda(spec, 1)
    k = spec.kappa
    e1 = base.energy(shift_lambda(spec, ell), 1)
    xs = range(spec.N - ell) if spec.finite else range(opts.window + 1)
    for x in xs:
        lhs1 = dfm.B_ell(spec, ell, x + 1) * dfm.D_ell(spec, ell, x + 1)
        rhs1 = k * k * dfm.B_ell(up, ell, x) * dfm.D_ell(up, ell, x + 1)
        t.eq(lhs1, rhs1, x=x, which="cond1")
        t.holds(lhs1 >= 0 and rhs1 >= 0, x=x, which="cond1 sign")
        lhs2 = dfm.B_ell(spec, ell, x) + dfm.D_ell(spec, ell, x + 1)
        rhs2 = k * (dfm.B_ell(up, ell, x) + dfm.D_ell(up, ell, x)) + e1
        t.eq(lhs2, rhs2, x=x, which="cond2")
    return t.result("deformed_shape_invariance",
                    "B_ell(x+1)D_ell(x+1) = kappa^2 (B_ell D_ell)(lambda+delta); "
                    "B_ell(x)+D_ell(x+1) = kappa(B_ell+D_ell)(x;lambda+delta) + E_{ell,1}", spec, ell)


def check_exceptional_structure(spec, ell, opts):
    t = Tally(spec, opts)
    lam_l = shift_lambda(spec, ell)
    up = shift_lambda(spec, 1)
    xs = xs_ell(spec, ell, opts)
    for n in ns_ell(spec, ell, opts):
        p = dfm.exceptional_P(spec, ell, n, strict=False).poly
        t.holds(p.degree == ell + n, n=n, which="degree")
        t.eq(p.coeffs[0], 1, n=n, which="P(0)")
        for x in xs:
            t.eq(p(base.eta(lam_l, x)), dfm.p_ell_check(spec, ell, n, x), n=n, x=x, which="polynomial")
    for x in xs:
        t.eq(dfm.p_ell_check(spec, ell, 0, x), dfm.xi(up, ell, x), x=x, which="P_{ell,0} = xi(lambda+delta)")
    return t.result("exceptional_structure",
                    "P_{ell,n} has degree ell+n in eta(x;lambda+ell delta), P_{ell,n}(0) = 1, "
                    "P_{ell,0} = xi_ell(lambda+delta)", spec, ell)


def check_deformed_ground(spec, ell, opts):
    t = Tally(spec, opts)
    for x in xs_ell(spec, ell, opts):
        t.eq(dfm.phi_ell0_sq(spec, ell, x), dfm.phi_ell0_sq_product(spec, ell, x), x=x)
    return t.result("deformed_ground", "psi_ell^2 xi_ell(lambda+delta)^2 = prod B_ell(y)/D_ell(y+1)", spec, ell)


def check_deformed_orthogonality(spec, ell, opts):
    t = Tally(spec, opts)
    ns = ns_ell(spec, ell, opts)
    if spec.finite:
        xs = xs_ell(spec, ell, opts)
        for n in ns:
            d2 = dfm.deformed_norm_parts(spec, ell, n).finite
            for m in ns:
                s = 0
                for x in xs:
                    s = s + (dfm.deformed_weight(spec, ell, x)
                             * dfm.p_ell_check(spec, ell, n, x) * dfm.p_ell_check(spec, ell, m, x))
                t.eq(s * d2, 1 if n == m else 0, n=n, m=m)
        t.detail = {"pairs": len(ns) ** 2}
        return t.result("deformed_orthogonality",
                        "sum_x psi_ell^2/xi_ell(1) P_{ell,n} P_{ell,m} = delta_nm / d_{ell,n}^2", spec, ell)
    lam_l = shift_lambda(spec, ell)
    xi_poly = dfm.deforming_xi(spec, ell, require_positive=False).poly
    amps = {n: dfm.exceptional_P(spec, ell, n, strict=False).poly.abs_coefficient_sum() for n in ns}
    norms = {n: dfm.deformed_norm_parts(spec, ell, n).value(opts.extra_prec) for n in ns}
    _truncated_gram(t, spec, lam_l, lambda x: dfm.deformed_weight(spec, ell, x),
                    lambda n, x: dfm.p_ell_check(spec, ell, n, x), ns, norms, amps, xi_poly, opts)
    return t.result("deformed_orthogonality",
                    "sum_x psi_ell^2/xi_ell(1) P_{ell,n} P_{ell,m} = delta_nm / d_{ell,n}^2 "
                    "(truncated, certified tail)", spec, ell, bounded=True)


def check_deformed_norms(spec, ell, opts):
    t = Tally(spec, opts)
    for n in ns_ell(spec, ell, opts):
        first = dfm.deformed_norm_parts(spec, ell, n)
        second = dfm.deformed_norm_parts_alt(spec, ell, n)
        ratio = first.exact_ratio(second)
        if ratio is None:
            t.holds(False, n=n, which="unpaired infinite factors")
        else:
            t.eq(ratio, 1, n=n)
    return t.result("deformed_norms", "both closed forms of d_{ell,n}^2 agree", spec, ell)


def check_deformed_eigen(spec, ell, opts):
    t = Tally(spec, opts)
    lam_l = shift_lambda(spec, ell)
    h = ops.htilde_ell(spec, ell)
    for n in ns_ell(spec, ell, opts):
        e = base.energy(lam_l, n)
        f = lambda y, n=n: dfm.p_ell_check(spec, ell, n, y)
        for x in _rows(h, opts):
            t.eq(h.apply(f, x), e * f(x), n=n, x=x)
    return t.result("deformed_eigen", "Htilde_ell P_{ell,n} = E_n(lambda+ell delta) P_{ell,n}", spec, ell)


def check_deformed_factorization(spec, ell, opts):
    t = Tally(spec, opts)
    h = ops.htilde_ell(spec, ell)
    t.compare_ops(h, ops.backward_ell(spec, ell) @ ops.forward_ell(spec, ell), _rows(h, opts))
    return t.result("deformed_factorization", "Htilde_ell = B_ell F_ell", spec, ell)


def check_deformed_forward_backward(spec, ell, opts):
    t = Tally(spec, opts)
    lam_l = shift_lambda(spec, ell)
    up = shift_lambda(spec, 1)
    fw, bw = ops.forward_ell(spec, ell), ops.backward_ell(spec, ell)
    for n in ns_ell(spec, ell, opts):
        e = base.energy(lam_l, n)
        pn = lambda y, n=n: dfm.p_ell_check(spec, ell, n, y)
        for x in _rows(fw, opts):
            rhs = e * dfm.p_ell_check(up, ell, n - 1, x) if n > 0 else 0
            t.eq(fw.apply(pn, x), rhs, n=n, x=x, which="F_ell")
        if n > 0:
            prev = lambda y, n=n: dfm.p_ell_check(up, ell, n - 1, y)
            for x in _rows(bw, opts):
                t.eq(bw.apply(prev, x), pn(x), n=n, x=x, which="B_ell")
    return t.result("deformed_forward_backward",
                    "F_ell P_{ell,n} = E_n(lambda+ell delta) P_{ell,n-1}(lambda+delta); "
                    "B_ell P_{ell,n-1}(lambda+delta) = P_{ell,n}", spec, ell)


def check_constant_signs(spec, ell, opts):
    t = Tally(spec, opts)
    negative = spec.family in ("dH", "dqH")
    s = dfm.s_ell(spec, ell)
    t.holds((s < 0) if negative else (s > 0), which="s_ell")
    for n in ns_ell(spec, ell, opts):
        f = dfm.fhat(spec, ell, n)
        t.holds((f < 0) if negative else (f > 0), n=n, which="fhat")
        t.holds(dfm.bhat(spec, ell, n) > 0, n=n, which="bhat")
    return t.result("constant_signs",
                    "fhat, s_ell < 0 and bhat > 0 (dual Hahn types); all positive otherwise", spec, ell)


# --- intertwining ---------------------------------------------------------------

def check_hat_hamiltonians(spec, ell, opts):
    t = Tally(spec, opts)
    mu = dfm.mu_spec(spec, ell)
    c = dfm.fhat(spec, ell, 0) * dfm.bhat(spec, ell, 0)
    fh, bh = ops.forward_hat(spec, ell), ops.backward_hat(spec, ell)
    plus = ops.htilde(mu).plus_identity(c)
    t.compare_ops(bh @ fh, plus, _rows(plus, opts), which="Bhat Fhat")
    minus = ops.htilde_ell(spec, ell).plus_identity(c)
    t.compare_ops(fh @ bh, minus, _rows(minus, opts), which="Fhat Bhat")
    return t.result("hat_hamiltonians",
                    "Bhat Fhat = Htilde(lambda+ell delta+delta_tilde) + fhat_0 bhat_0; "
                    "Fhat Bhat = Htilde_ell + fhat_0 bhat_0", spec, ell)


def check_hat_squares(spec, ell, opts):
    """Entrywise squared form of the intertwined pair, sensitive to ``kappa_hat``."""
    t = Tally(spec, opts)
    mu = dfm.mu_spec(spec, ell)
    kh = dfm.kappa_hat(spec, ell)
    c = dfm.fhat(spec, ell, 0) * dfm.bhat(spec, ell, 0)
    bh, dh = ops.hat_potentials(spec, ell)
    xs = xs_ell(spec, ell, opts)
    for x in xs:
        t.eq(bh(x) + dh(x), kh * (base.B(mu, x) + base.D(mu, x) + c), x=x, which="H+ diagonal")
        t.eq(bh(x) + dh(x + 1), kh * (dfm.B_ell(spec, ell, x) + dfm.D_ell(spec, ell, x) + c),
             x=x, which="H- diagonal")
        if spec.finite and x == xs[-1]:
            continue
        t.eq(bh(x) * dh(x + 1), kh * kh * base.B(mu, x) * base.D(mu, x + 1), x=x, which="H+ off-diagonal")
        t.eq(bh(x + 1) * dh(x + 1), kh * kh * dfm.B_ell(spec, ell, x) * dfm.D_ell(spec, ell, x + 1),
             x=x, which="H- off-diagonal")
    return t.result("hat_squares",
                    "Ahat^dag Ahat = kappa_hat (H(lambda+ell delta+delta_tilde) + fhat_0 bhat_0), "
                    "Ahat Ahat^dag = kappa_hat (H_ell + fhat_0 bhat_0), entries squared", spec, ell)


def check_hat_shift_actions(spec, ell, opts):
    t = Tally(spec, opts)
    mu = dfm.mu_spec(spec, ell)
    fh, bh = ops.forward_hat(spec, ell), ops.backward_hat(spec, ell)
    for n in ns_ell(spec, ell, opts):
        f_n, b_n = dfm.fhat(spec, ell, n), dfm.bhat(spec, ell, n)
        pn = lambda y, n=n: base.p_check(mu, n, y)
        pln = lambda y, n=n: dfm.p_ell_check(spec, ell, n, y)
        for x in _rows(fh, opts):
            t.eq(fh.apply(pn, x), f_n * pln(x), n=n, x=x, which="Fhat")
        for x in _rows(bh, opts):
            t.eq(bh.apply(pln, x), b_n * pn(x), n=n, x=x, which="Bhat")
    return t.result("hat_shift_actions",
                    "Fhat P_n(lambda+ell delta+delta_tilde) = fhat_n P_{ell,n}; "
                    "Bhat P_{ell,n} = bhat_n P_n(lambda+ell delta+delta_tilde)", spec, ell)


def check_hat_intertwining(spec, ell, opts):
    t = Tally(spec, opts)
    up = shift_lambda(spec, 1)
    mu = dfm.mu_spec(spec, ell)
    sh, sh_up = dfm.s_hat(spec, ell), dfm.s_hat(up, ell)
    lhs = (ops.forward_hat(up, ell) @ ops.forward(mu)).scaled(sh_up)
    rhs = (ops.forward_ell(spec, ell) @ ops.forward_hat(spec, ell)).scaled(sh)
    t.compare_ops(lhs, rhs, _rows(lhs, opts), which="F")
    lhs = (ops.forward_hat(spec, ell) @ ops.backward(mu)).scaled(sh)
    rhs = (ops.backward_ell(spec, ell) @ ops.forward_hat(up, ell)).scaled(sh_up)
    t.compare_ops(lhs, rhs, _rows(lhs, opts), which="B")
    return t.result("hat_intertwining",
                    "s_hat(lambda+delta) Fhat(lambda+delta) F(mu) = s_hat F_ell Fhat; "
                    "s_hat Fhat B(mu) = s_hat(lambda+delta) B_ell Fhat(lambda+delta)", spec, ell)


def check_energy_factorization(spec, ell, opts):
    t = Tally(spec, opts)
    lam_l = shift_lambda(spec, ell)
    c = dfm.fhat(spec, ell, 0) * dfm.bhat(spec, ell, 0)
    for n in ns_ell(spec, ell, opts):
        t.eq(base.energy(lam_l, n), dfm.fhat(spec, ell, n) * dfm.bhat(spec, ell, n) - c, n=n)
    return t.result("energy_factorization", "E_n(lambda+ell delta) = fhat_n bhat_n - fhat_0 bhat_0", spec, ell)


def check_inner_product_chain(spec, ell, opts):
    """The four-step evaluation of the deformed inner products (finite grids)."""
    t = Tally(spec, opts)
    if not spec.finite:
        return CheckResult("inner_product_chain", "", str(spec.backend), "skipped", 0, None, ell,
                           {"reason": "infinite grid"})
    mu = dfm.mu_spec(spec, ell)
    fh, bh = ops.forward_hat(spec, ell), ops.backward_hat(spec, ell)
    xs = xs_ell(spec, ell, opts)
    ns = ns_ell(spec, ell, opts)
    xi1 = dfm.xi(spec, ell, 1)
    s = dfm.s_ell(spec, ell)
    psi = [dfm.psi_sq(spec, ell, x) for x in xs]
    w_mu = [base.phi0_sq(mu, x) for x in xs]
    for n in ns:
        pln = lambda y, n=n: dfm.p_ell_check(spec, ell, n, y)
        bpln = [bh.apply(pln, x) for x in xs]
        for m in ns:
            f_m = dfm.fhat(spec, ell, m)
            pm = lambda y, m=m: base.p_check(mu, m, y)
            i0 = sum(psi[x] * pln(x) * dfm.p_ell_check(spec, ell, m, x) for x in xs)
            i1 = sum(psi[x] * pln(x) * fh.apply(pm, x) for x in xs) / f_m
            i2 = xi1 * s * sum(w_mu[x] * bpln[x] * pm(x) for x in xs) / f_m
            i3 = (dfm.bhat(spec, ell, n) / f_m * xi1 * s
                  * sum(w_mu[x] * base.p_check(mu, n, x) * pm(x) for x in xs))
            i4 = 0
            if n == m:
                i4 = (xi1 / base.norm_parts(mu, n).finite * dfm.bhat(spec, ell, n)
                      / dfm.fhat(spec, ell, n) * s)
            for k, v in enumerate((i1, i2, i3, i4), start=1):
                t.eq(i0, v, n=n, m=m, step=k)
            if n == m:
                t.eq(i0, xi1 / dfm.deformed_norm_parts(spec, ell, n).finite, n=n, m=m, step="norm")
    return t.result("inner_product_chain",
                    "(phi_{ell,n}, phi_{ell,m}) via Ahat and its adjoint equals "
                    "xi_ell(1) delta_nm bhat_n s_ell / (fhat_n d_n(lambda+ell delta+delta_tilde)^2)", spec, ell)


def check_no_zero_modes(spec, ell, opts):
    t = Tally(spec, opts)
    sg = ops.hat_sign(spec)
    bh, dh = ops.hat_potentials(spec, ell)
    for x in xs_ell(spec, ell, opts):
        t.holds(sg * bh(x) > 0, x=x, which="Bhat")
        if x > 0:
            t.holds(sg * dh(x) > 0, x=x, which="Dhat")
    return t.result("no_zero_modes",
                    "sigma Bhat_ell(x) > 0 and sigma Dhat_ell(x) > 0 on the deformed grid, "
                    "so Ahat has no zero modes", spec, ell)


def sturm_counts(spec: FamilySpec, ell: int, opts: SuiteOptions) -> Dict[int, int]:
    lam_l = shift_lambda(spec, ell)
    hi = base.eta(lam_l, spec.N - ell) if spec.finite else lam_l.scalar(1)
    out = {}
    for n in ns_ell(spec, ell, opts):
        p = dfm.exceptional_P(spec, ell, n, strict=False).poly
        out[n] = count_roots_open(p, lam_l.scalar(0), hi)
    return out


def check_zeros(spec, ell, opts):
    t = Tally(spec, opts)
    if not spec.backend.exact:
        return CheckResult("zeros", "", str(spec.backend), "skipped", 0, None, ell,
                           {"reason": "Sturm counting needs exact arithmetic"})
    counts = sturm_counts(spec, ell, opts)
    for n, c in counts.items():
        t.holds(c == n, n=n, count=c)
    t.detail = {"counts": {str(n): c for n, c in counts.items()}}
    return t.result("zeros", "P_{ell,n}(y) has exactly n zeros in 0 < y < eta(x_max^ell; lambda+ell delta)",
                    spec, ell)


# --- float-only checks (symmetric gauge) -------------------------------------

def check_symmetric_hamiltonian(spec, ell, opts):
    t = Tally(spec, opts, direct=True)
    up = shift_lambda(spec, 1)
    if ell:
        bf, df = ops.deformed_potentials(spec, ell)
        top, top_up = dfm.x_max_ell(spec, ell), dfm.x_max_ell(up, ell)
    else:
        bf, df = ops.original_potentials(spec)
        top, top_up = spec.N, up.N
    h = ops.hamiltonian(spec, bf, df, top)
    a = ops.a_operator(spec, bf, df, top_up, top)
    ad = ops.a_dagger(spec, bf, df, top, top_up)
    rows = _rows(h, opts)
    t.compare_ops(ad @ a, h, rows, which="A^dag A")
    for x in rows[:-1]:
        t.eq(h.row(x).get(1, 0), h.row(x + 1).get(-1, 0), x=x, which="symmetry")
    return t.result("symmetric_hamiltonian", "H = A^dag A is tridiagonal and symmetric", spec, ell)


def _tridiagonal_det(diag, off, e):
    prev, cur = 1, diag[0] - e
    for k in range(1, len(diag)):
        prev, cur = cur, (diag[k] - e) * cur - off[k - 1] ** 2 * prev
    return cur


def check_spectrum(spec, ell, opts):
    t = Tally(spec, opts, direct=True)
    if not spec.finite:
        return CheckResult("spectrum", "", str(spec.backend), "skipped", 0, None, ell,
                           {"reason": "infinite grid"})
    if ell:
        bf, df = ops.deformed_potentials(spec, ell)
        top = spec.N - ell
        energies = [base.energy(shift_lambda(spec, ell), n) for n in range(top + 1)]
    else:
        bf, df = ops.original_potentials(spec)
        top = spec.N
        energies = [base.energy(spec, n) for n in range(top + 1)]
    h = ops.hamiltonian(spec, bf, df, top)
    diag = [h.row(x).get(0, 0) for x in range(top + 1)]
    off = [h.row(x).get(1, 0) for x in range(top)]
    for n, e in enumerate(energies):
        scale = 1
        for m, em in enumerate(energies):
            if m != n:
                scale = scale * abs(em - e)
        t.eq(_tridiagonal_det(diag, off, e) / scale, 0, n=n)
    return t.result("spectrum", "det(H - E_n) = 0 for every closed-form E_n", spec, ell)


def check_hat_symmetric(spec, ell, opts):
    t = Tally(spec, opts)
    up = shift_lambda(spec, 1)
    mu = dfm.mu_spec(spec, ell)
    kh = ops.hat_sign(spec) * dfm.kappa_hat(spec, ell)
    c = dfm.fhat(spec, ell, 0) * dfm.bhat(spec, ell, 0)
    ah, ahd = ops.hat_pair(spec, ell)
    ah_up, _ = ops.hat_pair(up, ell)
    h_mu = ops.build_operator(mu, None, "H", "symmetric")
    h_l = ops.build_operator(spec, ell, "H_ell", "symmetric")
    rows = _rows(ah, opts)
    t.compare_ops(ahd @ ah, h_mu.plus_identity(c).scaled(kh), rows, which="H+")
    t.compare_ops(ah @ ahd, h_l.plus_identity(c).scaled(kh), rows, which="H-")
    lhs = ah_up @ ops.build_operator(mu, None, "A", "symmetric")
    rhs = ops.build_operator(spec, ell, "A_ell", "symmetric") @ ah
    t.compare_ops(lhs, rhs, _rows(lhs, opts), which="Ahat A")
    lhs = ah @ ops.build_operator(mu, None, "Adag", "symmetric")
    rhs = ops.build_operator(spec, ell, "Adag_ell", "symmetric") @ ah_up
    t.compare_ops(lhs, rhs, _rows(lhs, opts), which="Ahat A^dag")
    return t.result("hat_symmetric",
                    "Ahat^dag Ahat and Ahat Ahat^dag reproduce the shifted and deformed Hamiltonians; "
                    "Ahat intertwines A and A_ell", spec, ell)


# --- registry --------------------------------------------------------------------

@dataclass(frozen=True)
class CheckDef:
    name: str
    group: str  # base | deformed | intertwining | float
    fn: Callable
    float_only: bool = False


REGISTRY: List[CheckDef] = [
    CheckDef("boundary", "base", check_boundary),
    CheckDef("positivity", "base", check_positivity),
    CheckDef("energy_spectrum", "base", check_energy),
    CheckDef("pn1", "base", check_pn1),
    CheckDef("varphi", "base", check_varphi),
    CheckDef("weight_product", "base", check_weight_product),
    CheckDef("factorization", "base", check_factorization),
    CheckDef("eta_polynomial", "base", check_eta_polynomial),
    CheckDef("difference_equation", "base", check_difference_equation),
    CheckDef("forward_backward", "base", check_forward_backward),
    CheckDef("htilde_factorization", "base", check_htilde_factorization),
    CheckDef("orthogonality", "base", check_orthogonality),
    CheckDef("shape_invariance", "base", check_shape_invariance),
    CheckDef("crum_energy", "base", check_crum_energy),
    CheckDef("xi_positivity", "deformed", check_xi_positivity),
    CheckDef("xi_identities", "deformed", check_xi_identities),
    CheckDef("xi_difference_equation", "deformed", check_xi_difference_equation),
    CheckDef("deformed_boundary", "deformed", check_deformed_boundary),
    CheckDef("deformed_positivity", "deformed", check_deformed_positivity),
    CheckDef("deformed_shape_invariance", "deformed", check_deformed_shape_invariance),
    CheckDef("exceptional_structure", "deformed", check_exceptional_structure),
    CheckDef("deformed_ground", "deformed", check_deformed_ground),
    CheckDef("deformed_orthogonality", "deformed", check_deformed_orthogonality),
    CheckDef("deformed_norms", "deformed", check_deformed_norms),
    CheckDef("deformed_eigen", "deformed", check_deformed_eigen),
    CheckDef("deformed_factorization", "deformed", check_deformed_factorization),
    CheckDef("deformed_forward_backward", "deformed", check_deformed_forward_backward),
    CheckDef("constant_signs", "deformed", check_constant_signs),
    CheckDef("zeros", "deformed", check_zeros),
    CheckDef("hat_hamiltonians", "intertwining", check_hat_hamiltonians),
    CheckDef("hat_squares", "intertwining", check_hat_squares),
    CheckDef("hat_shift_actions", "intertwining", check_hat_shift_actions),
    CheckDef("hat_intertwining", "intertwining", check_hat_intertwining),
    CheckDef("energy_factorization", "intertwining", check_energy_factorization),
    CheckDef("inner_product_chain", "intertwining", check_inner_product_chain),
    CheckDef("no_zero_modes", "intertwining", check_no_zero_modes),
    CheckDef("symmetric_hamiltonian", "float", check_symmetric_hamiltonian, True),
    CheckDef("spectrum", "float", check_spectrum, True),
    CheckDef("hat_symmetric", "float", check_hat_symmetric, True),
]

CHECK_NAMES = tuple(c.name for c in REGISTRY)

# convenient groupings accepted by ``--checks``
ALIASES = {
    "eigen": ("difference_equation", "deformed_eigen"),
    "shape": ("shape_invariance", "deformed_shape_invariance"),
    "xi": ("xi_positivity", "xi_identities", "xi_difference_equation"),
    "intertwining": tuple(c.name for c in REGISTRY if c.group == "intertwining"),
    "orthogonality": ("orthogonality", "deformed_orthogonality"),
}


def resolve_checks(names) -> tuple:
    if names is None:
        return CHECK_NAMES
    out = []
    for name in names:
        if name in ALIASES:
            out.extend(ALIASES[name])
        elif name in CHECK_NAMES:
            out.append(name)
        else:
            raise ValueError(f"unknown check {name!r}")
    return tuple(dict.fromkeys(out))
