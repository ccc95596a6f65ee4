"""Random admissible rational parameter draws for the property sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from xracah import base
from xracah import deformed as dfm
from xracah.families import FamilySpec, is_admissible, make_spec

Q_CHOICES = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
             Fraction(2, 5), Fraction(3, 5)]


def _frac(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 12) -> Fraction:
    """A rational strictly inside ``(lo, hi)`` with a small denominator."""
    while True:
        d = rng.randint(2, den)
        k_lo = int(lo * d) + 1
        k_hi = -int(-hi * d) - 1
        if k_lo <= k_hi:
            return Fraction(rng.randint(k_lo, k_hi), d)
        den *= 2


def _raw(family: str, rng: random.Random, N: int) -> FamilySpec:
    if family == "R":
        d = _frac(rng, Fraction(0), Fraction(4))
        b = d + N + _frac(rng, Fraction(0), Fraction(6))
        c = _frac(rng, Fraction(0), 1 + d)
        return make_spec("R", [-N, b, c, d], N=N)
    if family == "qR":
        q = rng.choice(Q_CHOICES)
        a = q ** (-N)
        d = _frac(rng, Fraction(0), Fraction(1))
        b = _frac(rng, Fraction(0), d / a, den=4 * int(a) + 8)
        c = _frac(rng, q * d, Fraction(1))
        return make_spec("qR", [a, b, c, d], N=N, q=q)
    if family == "dH":
        a = _frac(rng, Fraction(0), Fraction(5))
        b = _frac(rng, Fraction(1), Fraction(6))
        return make_spec("dH", [a, b], N=N)
    if family == "dqH":
        q = rng.choice(Q_CHOICES)
        a = _frac(rng, Fraction(0), Fraction(1))
        b = _frac(rng, Fraction(0), q)
        return make_spec("dqH", [a, b], N=N, q=q)
    q = rng.choice(Q_CHOICES)
    # a q <= 1/2 keeps the certified truncation point small
    a = _frac(rng, Fraction(0), 1 / (2 * q))
    b = _frac(rng, Fraction(0), 1 / q)
    return make_spec("lqJ", [a, b], q=q)


def nondegenerate(spec: FamilySpec, ells) -> bool:
    """Preconditions of the deformation: xi_ell has exact degree ell and the series terminate.

    Also excluded are the measure-zero points where the undeformed
    ``bhat_{0,n}`` vanishes, which makes the second norm expression 0/0.
    """
    try:
        for ell in ells:
            if dfm.deforming_xi(spec, ell, window=4, require_positive=False).poly.degree != ell:
                return False
            lam_l = spec.shifted(ell)
            top = spec.N - ell if spec.finite else 3
            for n in range(top + 1):
                if dfm.bhat(lam_l, 0, n) == 0 or dfm.fhat(lam_l, 0, n) == 0:
                    return False
                base.p_check(dfm.mu_spec(spec, ell), n, 0)
    except (ArithmeticError, ValueError):
        return False
    return True


def draw(family: str, rng: random.Random, ells=(1, 2)) -> FamilySpec:
    while True:
        N = rng.randint(4, 8)
        spec = _raw(family, rng, N)
        if is_admissible(spec) and nondegenerate(spec, ells):
            return spec
