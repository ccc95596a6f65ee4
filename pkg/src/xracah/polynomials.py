"""Dense univariate polynomials over the active scalar type.

Polynomials of the package live in a sinusoidal variable ``eta`` rather than
in ``x``; a :class:`Poly` only stores ascending coefficients and is agnostic
about what its variable means.  Exact interpolation and Sturm sequences are
provided for the zero-counting checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class Poly:
    coeffs: tuple  # ascending powers, trailing zeros stripped

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, value) -> "Poly":
        return cls((value,))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    def __call__(self, y):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * y + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        if len(self.coeffs) == 1:
            return Poly((0,))
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def divmod(self, other: "Poly"):
        if other.degree < 0:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [0] * max(1, len(rem) - len(other.coeffs) + 1)
        lead = other.leading
        dd = other.degree
        for k in range(len(rem) - 1, dd - 1, -1):
            if rem[k] == 0:
                continue
            # int / int would silently become a float
            coef = Fraction(rem[k], lead) if isinstance(rem[k], int) and isinstance(lead, int) else rem[k] / lead
            q[k - dd] = coef
            for j, c in enumerate(other.coeffs):
                rem[k - dd + j] = rem[k - dd + j] - coef * c
        return Poly(tuple(q)), Poly(tuple(rem[:dd] if dd > 0 else [0]))

    def abs_coefficient_sum(self):
        total = 0
        for c in self.coeffs:
            total = total + abs(c)
        return total

    def lipschitz_bound(self):
        """``sum k |c_k|``: a Lipschitz constant on ``[-1, 1]``."""
        total = 0
        for k, c in enumerate(self.coeffs):
            total = total + k * abs(c)
        return total


def interpolate(nodes: Sequence, values: Sequence) -> Poly:
    """Lagrange interpolation through distinct ``nodes`` (Newton form)."""
    n = len(nodes)
    if n != len(values):
        raise ValueError("nodes and values differ in length")
    if n == 0:
        raise ValueError("no interpolation nodes")
    table = list(values)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            gap = nodes[i] - nodes[i - level]
            if gap == 0:
                raise ValueError("interpolation nodes must be distinct")
            diff = table[i] - table[i - 1]
            table[i] = Fraction(diff, gap) if isinstance(diff, int) and isinstance(gap, int) else diff / gap
    poly = Poly((table[-1],))
    for i in range(n - 2, -1, -1):
        poly = poly * Poly((-nodes[i], 1)) + Poly((table[i],))
    return poly


def sturm_sequence(p: Poly) -> list:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        _, r = seq[-2].divmod(seq[-1])
        if r.degree < 0:
            break
        seq.append(-r)
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_open(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` strictly inside ``(lo, hi)``.

    Exact on rational coefficients.  Roots at the endpoints are divided
    out first so that Sturm's theorem applies to the open interval.
    """
    if p.degree <= 0:
        if p.degree < 0:
            raise ValueError("the zero polynomial has infinitely many roots")
        return 0
    if not lo < hi:
        return 0
    for end in (lo, hi):
        if p(end) == 0:
            # Sturm needs non-root endpoints; an endpoint root may be multiple
            return count_roots_open(_deflate(p, end), lo, hi)
    seq = sturm_sequence(p)
    return _sign_changes([s(lo) for s in seq]) - _sign_changes([s(hi) for s in seq])


def _deflate(p: Poly, root) -> Poly:
    d = Poly((-root, 1))
    while p.degree > 0 and p(root) == 0:
        p, _ = p.divmod(d)
    return p


def to_fraction_poly(p: Poly) -> Poly:
    return Poly(tuple(Fraction(c) for c in p.coeffs))
