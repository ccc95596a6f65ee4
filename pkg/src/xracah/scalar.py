"""Scalar backends and the Pochhammer / terminating hypergeometric kernels.

Two backends are supported.  The exact backend works on
:class:`fractions.Fraction` values and never rounds; the float backend wraps
an independent :mod:`mpmath` context with a fixed working precision
(at least 128 bits).  Every formula in the package is written against the
ordinary arithmetic operators, so the same code runs on both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import mpmath

Scalar = Union[Fraction, "mpmath.mpf"]

MIN_FLOAT_PRECISION = 128


class ZeroDenominatorTerm(ArithmeticError):
    """A denominator Pochhammer factor vanished before the series terminated."""


class BackendError(ValueError):
    pass


@lru_cache(maxsize=None)
def _context(prec: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class Backend:
    """Numeric backend tag: ``exact`` (rationals) or ``float`` with ``prec`` bits."""

    kind: str = "exact"
    prec: int = 0

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise BackendError(f"unknown backend kind {self.kind!r}")
        if self.kind == "float" and self.prec < MIN_FLOAT_PRECISION:
            raise BackendError(
                f"float backend needs at least {MIN_FLOAT_PRECISION} bits, got {self.prec}"
            )

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    @property
    def ctx(self) -> mpmath.MPContext:
        if self.exact:
            raise BackendError("the exact backend has no floating context")
        return _context(self.prec)

    def __str__(self) -> str:
        return "exact" if self.exact else f"float:{self.prec}"

    def scalar(self, value) -> Scalar:
        """Convert ``value`` (int, str, Fraction, mpf) into this backend."""
        if self.exact:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, (int, str)):
                return Fraction(value)
            if isinstance(value, float):
                raise BackendError("binary floats are not accepted by the exact backend")
            if isinstance(value, mpmath.mpf):
                raise BackendError("cannot convert a floating value to an exact rational")
            return Fraction(value)
        ctx = self.ctx
        if isinstance(value, Fraction):
            return ctx.mpf(value.numerator) / value.denominator
        if isinstance(value, str) and "/" in value:
            value = Fraction(value)
            return ctx.mpf(value.numerator) / value.denominator
        return ctx.mpf(value)

    def zero(self) -> Scalar:
        return self.scalar(0)

    def one(self) -> Scalar:
        return self.scalar(1)

    def is_zero(self, value, tol=None) -> bool:
        """Exact: ``value == 0``.  Float: ``|value| <= tol``; ``tol`` is mandatory."""
        if self.exact:
            return value == 0
        if tol is None:
            raise BackendError("float comparisons need an explicit tolerance")
        return abs(value) <= tol

    def sqrt(self, value) -> Scalar:
        if self.exact:
            raise BackendError("square roots are only available on the float backend")
        return self.ctx.sqrt(value)

    def default_tolerance(self) -> Scalar:
        """``2**-(prec-16)``, the entrywise tolerance for direct matrix identities."""
        return self.ctx.mpf(2) ** (-(self.prec - 16))

    def sum_tolerance(self) -> Scalar:
        """``2**-(3 prec / 4)``: relative tolerance for identities built from sums and differences.

        Bracket formulas and weighted sums lose up to a quarter of the
        working bits to cancellation on larger grids.
        """
        return self.ctx.mpf(2) ** (-(3 * self.prec // 4))


EXACT = Backend("exact")


def float_backend(prec: int = 256) -> Backend:
    return Backend("float", prec)


def parse_backend(text: str, default_prec: int = 256) -> Backend:
    """Parse ``exact``, ``float`` or ``float:<bits>``."""
    text = text.strip().lower()
    if text == "exact":
        return EXACT
    kind, _, bits = text.partition(":")
    if kind == "float":
        try:
            prec = int(bits) if bits else default_prec
        except ValueError as exc:
            raise BackendError(f"bad precision in {text!r}") from exc
        return float_backend(prec)
    raise BackendError(f"unknown backend {text!r}")


def _one_like(a):
    return a - a + 1


def shifted_factorial(a, n: int):
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``; ``(a)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    result = _one_like(a)
    for k in range(n):
        result *= a + k
    return result


def q_pochhammer(a, q, n: int):
    """``(a; q)_n = prod_{k<n} (1 - a q^k)``; ``(a; q)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    result = _one_like(a)
    term = a
    for _ in range(n):
        result *= 1 - term
        term *= q
    return result


def shifted_factorials(params: Sequence, n: int):
    """Product of ``(p)_n`` over ``params``."""
    result = 1
    for p in params:
        result = shifted_factorial(p, n) * result
    return result


def q_pochhammers(params: Sequence, q, n: int):
    result = 1
    for p in params:
        result = q_pochhammer(p, q, n) * result
    return result


def hypergeometric_terminating(numerator_params: Sequence, denominator_params: Sequence,
                               argument, top_index: int, q=None):
    """Finite sum of a terminating (basic) hypergeometric series.

    With ``q=None`` this is the ordinary ``rFs`` series; otherwise the basic
    ``r phi s`` series in the standard normalisation including the factor
    ``[(-1)^k q^{k(k-1)/2}]^{1+s-r}``.  The caller fixes ``top_index``; the sum
    runs over ``k = 0..top_index`` and is accumulated by multiplying the exact
    term ratio, stopping early once a numerator factor annihilates the term.
    """
    r, s = len(numerator_params), len(denominator_params)
    one = _one_like(argument)
    term = one
    total = one
    for k in range(top_index):
        if q is None:
            num = one
            for a in numerator_params:
                num *= a + k
            den = one
            for b in denominator_params:
                den *= b + k
            den *= k + 1
        else:
            qk = q ** k
            num = one
            for a in numerator_params:
                num *= 1 - a * qk
            den = one
            for b in denominator_params:
                den *= 1 - b * qk
            den *= 1 - qk * q
            extra = 1 + s - r
            if extra:
                num *= (-qk) ** extra
        if num == 0:
            break
        if den == 0:
            raise ZeroDenominatorTerm(
                f"denominator factor vanishes at k={k + 1} (top index {top_index})"
            )
        term = term * num / den * argument
        total += term
    return total
