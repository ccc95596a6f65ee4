"""Deformed (exceptional) systems built from a twisted deforming polynomial.

For a deformation index ``ell`` the deforming polynomial ``xi_ell`` is the
degree-``ell`` eigenpolynomial of the original family evaluated at twisted,
shifted parameters.  It multiplicatively deforms the potentials and combines
bilinearly with the original polynomials into the exceptional polynomials
``P_{ell,n}``.  The deformation constants ``fhat``, ``bhat``, ``kappa_hat``,
``s_hat`` and ``s_ell`` are read through accessor functions which honour the
fault-injection flags carried by the FamilySpec.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import base
from .families import FamilySpec, combined_shift, shift_lambda, twist
from .polynomials import Poly, interpolate


class PositivityViolation(ValueError):
    pass


class DegreeMismatch(ArithmeticError):
    pass


def x_max_ell(spec: FamilySpec, ell: int) -> Optional[int]:
    return None if spec.N is None else spec.N - ell


def deformed_grid(spec: FamilySpec, ell: int, window: Optional[int] = None) -> range:
    if spec.finite:
        return range(spec.N - ell + 1)
    if window is None:
        raise ValueError("an infinite grid needs a window")
    return range(window + 1)


def xi_spec(spec: FamilySpec, ell: int) -> FamilySpec:
    """Twisted parameters ``t(lambda + (ell-1) delta)`` defining ``xi_ell``."""
    return twist(shift_lambda(spec, ell - 1))


@lru_cache(maxsize=1 << 16)
def xi(spec: FamilySpec, ell: int, x):
    """``xi_ell(x; lambda)`` from the terminating series at twisted parameters."""
    return base.p_check(xi_spec(spec, ell), ell, x)


@dataclass(frozen=True)
class DeformingPolynomial:
    ell: int
    poly: Poly  # in eta(x; lambda + (ell-1) delta)
    values: tuple  # on x = 0..x_max_ell+1 (or window+1)

    @property
    def basis_shift(self) -> int:
        return self.ell - 1


def deforming_xi(spec: FamilySpec, ell: int, window: Optional[int] = None,
                 require_positive: bool = True) -> DeformingPolynomial:
    if ell < 1:
        raise ValueError("the deformation index must be at least 1")
    if spec.finite and ell > spec.N - 1:
        raise ValueError(f"ell must be at most N-1 = {spec.N - 1}")
    top = (spec.N - ell + 1) if spec.finite else (window if window is not None else ell) + 1
    values = tuple(xi(spec, ell, x) for x in range(top + 1))
    if require_positive:
        for x, v in enumerate(values):
            if not v > 0:
                raise PositivityViolation(f"xi_{ell}({x}) = {v} is not positive")
    basis = shift_lambda(spec, ell - 1)
    xs = range(ell + 1)
    poly = interpolate([base.eta(basis, x) for x in xs], [values[x] if x < len(values) else xi(spec, ell, x)
                                                          for x in xs])
    return DeformingPolynomial(ell, poly, values)


def v_factors(spec: FamilySpec, x) -> tuple:
    """``(v1B, v2B, v1D, v2D)`` at ``x``."""
    return spec.model.v_factors(spec, x)


# --- deformation constants (fault-aware accessors) -------------------------

def _corrupt(spec: FamilySpec, name: str, value):
    return value * 2 if name in spec.faults else value


def fhat(spec: FamilySpec, ell: int, n: int):
    return _corrupt(spec, "fhat", spec.model.fhat(spec, ell, n))


def bhat(spec: FamilySpec, ell: int, n: int):
    return _corrupt(spec, "bhat", spec.model.bhat(spec, ell, n))


def kappa_hat(spec: FamilySpec, ell: int):
    return _corrupt(spec, "kappa_hat", spec.model.kappa_hat(spec, ell))


def s_hat(spec: FamilySpec, ell: int):
    return kappa_hat(spec, ell) * spec.model.s_hat_factor(spec, ell)


def s_ell(spec: FamilySpec, ell: int):
    return _corrupt(spec, "s", spec.model.s_ell(spec, ell))


@dataclass(frozen=True)
class DeformedConstants:
    fhat: object
    bhat: object
    kappa_hat: object
    s_hat: object
    s_ell: object


def deformed_constants(spec: FamilySpec, ell: int, n: int) -> DeformedConstants:
    return DeformedConstants(fhat(spec, ell, n), bhat(spec, ell, n), kappa_hat(spec, ell),
                             s_hat(spec, ell), s_ell(spec, ell))


# --- deformed potentials and ground state ----------------------------------

def B_ell(spec: FamilySpec, ell: int, x):
    up = shift_lambda(spec, 1)
    b = base.B(shift_lambda(spec, ell), x)
    if b == 0:
        return b
    return b * xi(spec, ell, x) * xi(up, ell, x + 1) / (xi(spec, ell, x + 1) * xi(up, ell, x))


def D_ell(spec: FamilySpec, ell: int, x):
    up = shift_lambda(spec, 1)
    d = base.D(shift_lambda(spec, ell), x)
    if d == 0:
        return d
    return d * xi(spec, ell, x + 1) * xi(up, ell, x - 1) / (xi(spec, ell, x) * xi(up, ell, x))


def psi_sq(spec: FamilySpec, ell: int, x: int):
    """``psi_ell(x)^2 = phi0(x; lambda+ell delta)^2 xi(1) / (xi(x) xi(x+1))``."""
    return (base.phi0_sq(shift_lambda(spec, ell), x) * xi(spec, ell, 1)
            / (xi(spec, ell, x) * xi(spec, ell, x + 1)))


def deformed_weight(spec: FamilySpec, ell: int, x: int):
    """Orthogonality weight ``psi_ell(x)^2 / xi_ell(1)``."""
    return base.phi0_sq(shift_lambda(spec, ell), x) / (xi(spec, ell, x) * xi(spec, ell, x + 1))


def phi_ell0_sq(spec: FamilySpec, ell: int, x: int):
    """Deformed ground state squared, ``psi_ell^2 xi_ell(x; lambda+delta)^2``."""
    return psi_sq(spec, ell, x) * xi(shift_lambda(spec, 1), ell, x) ** 2


def phi_ell0_sq_product(spec: FamilySpec, ell: int, x: int):
    value = spec.scalar(1)
    for y in range(x):
        value = value * B_ell(spec, ell, y) / D_ell(spec, ell, y + 1)
    return value


@dataclass(frozen=True)
class DeformedGround:
    psi_sq: tuple
    phi_ell0_sq: tuple


def deformed_ground(spec: FamilySpec, ell: int, window: Optional[int] = None) -> DeformedGround:
    xs = deformed_grid(spec, ell, window)
    return DeformedGround(tuple(psi_sq(spec, ell, x) for x in xs),
                          tuple(phi_ell0_sq(spec, ell, x) for x in xs))


# --- exceptional polynomials ------------------------------------------------

def mu_spec(spec: FamilySpec, ell: int) -> FamilySpec:
    """``lambda + ell delta + delta_tilde``: the isospectral original partner."""
    return combined_shift(spec, ell, 1)


@lru_cache(maxsize=1 << 16)
def p_ell_check(spec: FamilySpec, ell: int, n: int, x):
    """``P_{ell,n}`` at grid point ``x`` from the bilinear bracket formula."""
    lam_l = shift_lambda(spec, ell)
    mu = mu_spec(spec, ell)
    v1b, _, v1d, _ = v_factors(lam_l, x)
    bracket = (v1b * xi(spec, ell, x) * base.p_check(mu, n, x + 1)
               - v1d * xi(spec, ell, x + 1) * base.p_check(mu, n, x))
    return bracket / (fhat(spec, ell, n) * base.varphi(mu, x))


@dataclass(frozen=True)
class ExceptionalPolynomial:
    ell: int
    n: int
    poly: Poly  # in eta(x; lambda + ell delta)

    @property
    def basis_shift(self) -> int:
        return self.ell


def exceptional_P(spec: FamilySpec, ell: int, n: int, extra_points: Optional[int] = None,
                  strict: bool = True) -> ExceptionalPolynomial:
    """Interpolate the bracket formula at ``x = 0..ell+n`` in ``eta(x; lambda+ell delta)``.

    With ``strict`` the degree and unit constant term are asserted, and the
    interpolant is re-checked at the remaining grid points (``extra_points``
    beyond the nodes for the infinite grid).
    """
    lam_l = shift_lambda(spec, ell)
    nodes = range(ell + n + 1)
    poly = interpolate([base.eta(lam_l, x) for x in nodes], [p_ell_check(spec, ell, n, x) for x in nodes])
    if strict:
        if poly.degree != ell + n:
            raise DegreeMismatch(f"P_{{{ell},{n}}} has degree {poly.degree}, expected {ell + n}")
        if poly.coeffs[0] != 1:
            raise DegreeMismatch(f"P_{{{ell},{n}}}(0) = {poly.coeffs[0]}, expected 1")
        if spec.finite:
            others = range(ell + n + 1, spec.N - ell + 1)
        else:
            others = range(ell + n + 1, ell + n + 1 + (extra_points or 4))
        for x in others:
            if poly(base.eta(lam_l, x)) != p_ell_check(spec, ell, n, x):
                raise DegreeMismatch(f"P_{{{ell},{n}}} is not a degree-{ell + n} polynomial (x={x})")
    return ExceptionalPolynomial(ell, n, poly)


# --- deformed norms ---------------------------------------------------------

def deformed_norm_parts(spec: FamilySpec, ell: int, n: int) -> base.NormParts:
    """``d_{ell,n}^2 = d_n(mu)^2 fhat / bhat / s_ell`` (first expression)."""
    parts = base.norm_parts(mu_spec(spec, ell), n)
    value = parts.scaled(fhat(spec, ell, n) / (bhat(spec, ell, n) * s_ell(spec, ell)))
    if "dln2" in spec.faults:
        value = value.scaled(2)
    return value


def deformed_norm_parts_alt(spec: FamilySpec, ell: int, n: int) -> base.NormParts:
    """Second expression, via the undeformed norm at ``lambda + ell delta``."""
    lam_l = shift_lambda(spec, ell)
    parts = base.norm_parts(lam_l, n)
    factor = (fhat(spec, ell, n) / bhat(spec, ell, n)
              * bhat(lam_l, 0, n) / fhat(lam_l, 0, n)
              * s_ell(lam_l, 0) / s_ell(spec, ell))
    return parts.scaled(factor)


def deformed_norm(spec: FamilySpec, ell: int, n: int, prec: int = 256):
    return deformed_norm_parts(spec, ell, n).value(prec)


@dataclass
class DeformedTables:
    """Tabulated deformed data (used by the CLI ``weights`` and ``table``)."""

    spec: FamilySpec
    ell: int
    xs: list

    def rows(self):
        for x in self.xs:
            yield {
                "x": x,
                "eta": base.eta(shift_lambda(self.spec, self.ell), x),
                "xi": xi(self.spec, self.ell, x),
                "B_ell": B_ell(self.spec, self.ell, x),
                "D_ell": D_ell(self.spec, self.ell, x),
                "psi_sq": psi_sq(self.spec, self.ell, x),
            }
