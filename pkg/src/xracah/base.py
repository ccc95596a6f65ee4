"""Original (undeformed) system: potentials, eigenpolynomials, weights, norms.

Everything here is a thin, backend-agnostic layer over the family closed
forms.  Norms are returned as :class:`NormParts` so that the little
q-Jacobi infinite-product factor can be carried symbolically and compared
exactly between neighbouring parameter points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .families import FamilySpec
from .polynomials import Poly, interpolate
from .scalar import float_backend, hypergeometric_terminating, q_pochhammer


def B(spec: FamilySpec, x):
    return spec.model.B(spec, x)


def D(spec: FamilySpec, x):
    return spec.model.D(spec, x)


def energy(spec: FamilySpec, n: int):
    return spec.model.energy(spec, n)


def eta(spec: FamilySpec, x):
    return spec.model.eta(spec, x)


def varphi(spec: FamilySpec, x):
    return spec.model.varphi(spec, x)


def varphi_half(spec: FamilySpec, x, side: int):
    """``varphi(x + side/2) / sqrt(kappa)``, rational in every family."""
    return spec.model.varphi_half(spec, x, side)


def grid(spec: FamilySpec, window: Optional[int] = None) -> range:
    """The points checked: ``0..N`` for finite families, ``0..window`` otherwise."""
    if spec.finite:
        return range(spec.N + 1)
    if window is None:
        raise ValueError("an infinite grid needs a window")
    return range(window + 1)


@lru_cache(maxsize=1 << 18)
def p_check(spec: FamilySpec, n: int, x):
    """``P_n(eta(x))`` straight from the terminating series."""
    h = spec.model.hyper(spec, n, x)
    return hypergeometric_terminating(h.numerator, h.denominator, h.argument, n, h.q)


def p_poly(spec: FamilySpec, n: int) -> Poly:
    """``P_n`` as a polynomial in ``eta(x; spec)``, interpolated at ``x = 0..n``."""
    xs = range(n + 1)
    return interpolate([eta(spec, x) for x in xs], [p_check(spec, n, x) for x in xs])


@lru_cache(maxsize=1 << 18)
def phi0_sq(spec: FamilySpec, x):
    """Closed-form squared ground state, normalised to 1 at ``x = 0``."""
    return spec.model.phi0_sq(spec, x)


def phi0_sq_product(spec: FamilySpec, x: int):
    """Ground state from the telescoping product of ``B(y)/D(y+1)``."""
    value = spec.scalar(1)
    for y in range(x):
        value = value * B(spec, y) / D(spec, y + 1)
    return value


@dataclass(frozen=True)
class NormParts:
    """``finite * prod (p; q)_inf over inf_num / prod (p; q)_inf over inf_den``."""

    finite: object
    inf_num: tuple = ()
    inf_den: tuple = ()
    q: object = None

    @property
    def is_finite(self) -> bool:
        return not self.inf_num and not self.inf_den

    def scaled(self, factor) -> "NormParts":
        return NormParts(self.finite * factor, self.inf_num, self.inf_den, self.q)

    def value(self, prec: int = 256):
        """Numeric value; infinite products are summed in mpmath at ``prec`` bits."""
        if self.is_finite:
            return self.finite
        ctx = float_backend(prec).ctx
        fin = self.finite
        out = ctx.mpf(fin.numerator) / fin.denominator if isinstance(fin, Fraction) else ctx.mpf(fin)
        q = _as_mpf(ctx, self.q)
        for p in self.inf_num:
            out *= ctx.qp(_as_mpf(ctx, p), q)
        for p in self.inf_den:
            out /= ctx.qp(_as_mpf(ctx, p), q)
        return out

    def exact_ratio(self, other: "NormParts"):
        """``self / other`` as an exact scalar when the infinite parts cancel.

        Infinite factors are paired up when their arguments differ by an
        integral power of ``q``; ``(p q^k; q)_inf / (p; q)_inf = 1/(p; q)_k``.
        Returns ``None`` if some factor cannot be paired.
        """
        num, den = self.finite, other.finite
        ratio = Fraction(num, den) if isinstance(num, int) and isinstance(den, int) else num / den
        for mine, theirs, sign in ((self.inf_num, other.inf_num, 1), (self.inf_den, other.inf_den, -1)):
            if len(mine) != len(theirs):
                return None
            remaining = list(theirs)
            for p in mine:
                for i, t in enumerate(remaining):
                    k = _q_power_gap(p, t, self.q)
                    if k is not None:
                        # (p; q)_inf / (t; q)_inf
                        if k >= 0:
                            f = 1 / q_pochhammer(t, self.q, k)
                        else:
                            f = q_pochhammer(p, self.q, -k)
                        ratio = ratio * f if sign > 0 else ratio / f
                        remaining.pop(i)
                        break
                else:
                    return None
        return ratio


def _as_mpf(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    return ctx.mpf(v)


def _q_power_gap(p, t, q, limit: int = 64):
    """Integer ``k`` with ``p = t q^k`` (|k| <= limit), else ``None``."""
    if p == t:
        return 0
    up, down = t, t
    for k in range(1, limit + 1):
        up = up * q
        down = down / q
        if p == up:
            return k
        if p == down:
            return -k
    return None


def norm_parts(spec: FamilySpec, n: int) -> NormParts:
    """``d_n^2`` split into a finite factor and an infinite-product factor."""
    finite, num, den = spec.model.dn_sq_parts(spec, n)
    if "dn2" in spec.faults:
        finite = finite * 2
    return NormParts(finite, tuple(num), tuple(den), spec.q)


def norm_value(spec: FamilySpec, n: int, prec: int = 256):
    return norm_parts(spec, n).value(prec)


def weight_ratio_bound(spec: FamilySpec, X: int):
    """Upper bound on ``phi0^2(x+1)/phi0^2(x)`` for all ``x >= X`` (little q-Jacobi)."""
    if spec.family != "lqJ":
        raise ValueError("tail bounds only apply to the infinite grid")
    a, b = spec.lam
    q = spec.q
    qq = q ** (X + 1)
    return a * q * max(spec.scalar(1), (1 - b * qq) / (1 - qq))


def weight_tail_bound(spec: FamilySpec, X: int):
    """Upper bound on ``sum_{x > X} phi0^2(x)``, or ``None`` if not geometric yet."""
    r = weight_ratio_bound(spec, X)
    if r >= 1:
        return None
    return phi0_sq(spec, X + 1) / (1 - r)


@dataclass
class SystemTables:
    """Tabulated original-system data on a grid (used by the CLI ``table``)."""

    spec: FamilySpec
    xs: list
    ns: list

    def rows(self):
        for x in self.xs:
            row = {
                "x": x,
                "eta": eta(self.spec, x),
                "B": B(self.spec, x),
                "D": D(self.spec, x),
                "phi0_sq": phi0_sq(self.spec, x),
            }
            for n in self.ns:
                row[f"P{n}"] = p_check(self.spec, n, x)
            yield row
