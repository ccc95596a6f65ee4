"""Difference operators as banded matrices on (possibly rectangular) grids.

A :class:`ShiftOperator` maps functions on the column grid ``0..cols`` to
functions on the row grid ``0..rows``; ``None`` stands for the half-infinite
grid of little q-Jacobi, which is only ever inspected on a finite window.
Row ``x`` holds entries at columns ``x + s`` for a few shifts ``s``; columns
outside the grid are dropped, which is exactly the truncation a dense matrix
performs.  Composition therefore reproduces the dense matrix product
without materialising it.

Two gauges exist.  The polynomial gauge (conjugated by the ground state)
is rational and used for every exact identity.  The symmetric gauge
contains square roots of potentials and is only built on the float backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

from . import base
from . import deformed as dfm
from .families import FamilySpec, shift_lambda, twist


class GaugeBackendMismatch(ValueError):
    pass


Coefficients = Dict[int, Callable[[int], object]]


def _in_grid(y: int, top: Optional[int]) -> bool:
    return y >= 0 and (top is None or y <= top)


class ShiftOperator:
    """Row-wise sparse difference operator."""

    def __init__(self, rows: Optional[int], cols: Optional[int],
                 row_entries: Callable[[int], Dict[int, object]], label: str = ""):
        self.rows = rows
        self.cols = cols
        self._row = row_entries
        self.label = label
        self._cache: Dict[int, Dict[int, object]] = {}

    @classmethod
    def from_coefficients(cls, rows, cols, coeffs: Coefficients, label: str = "") -> "ShiftOperator":
        def row(x):
            out = {}
            for s, fn in coeffs.items():
                if _in_grid(x + s, cols):
                    v = fn(x)
                    if v != 0:
                        out[s] = v
            return out
        return cls(rows, cols, row, label)

    def row(self, x: int) -> Dict[int, object]:
        """Nonzero entries of row ``x`` keyed by shift (column ``x + shift``)."""
        if x not in self._cache:
            self._cache[x] = self._row(x)
        return self._cache[x]

    def row_range(self, window: Optional[int] = None) -> range:
        top = self.rows if self.rows is not None else window
        if top is None:
            raise ValueError("an infinite operator needs a window")
        return range(top + 1)

    def apply(self, f: Callable[[int], object], x: int):
        total = 0
        for s, c in self.row(x).items():
            total = total + c * f(x + s)
        return total

    def __matmul__(self, other: "ShiftOperator") -> "ShiftOperator":
        """``self o other``; the intermediate grid is ``other``'s row grid."""
        if self.cols != other.rows:
            raise ValueError(f"grid mismatch composing {self.label} and {other.label}")

        def row(x):
            out: Dict[int, object] = {}
            for s, a in self.row(x).items():
                for t, b in other.row(x + s).items():
                    out[s + t] = out.get(s + t, 0) + a * b
            return {k: v for k, v in out.items() if v != 0}

        return ShiftOperator(self.rows, other.cols, row, f"{self.label}.{other.label}")

    def __add__(self, other: "ShiftOperator") -> "ShiftOperator":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("grid mismatch in operator sum")

        def row(x):
            out = dict(self.row(x))
            for k, v in other.row(x).items():
                out[k] = out.get(k, 0) + v
            return {k: v for k, v in out.items() if v != 0}

        return ShiftOperator(self.rows, self.cols, row, f"{self.label}+{other.label}")

    def scaled(self, factor) -> "ShiftOperator":
        def row(x):
            return {k: v * factor for k, v in self.row(x).items() if v * factor != 0}
        return ShiftOperator(self.rows, self.cols, row, self.label)

    def plus_identity(self, constant) -> "ShiftOperator":
        if self.rows != self.cols:
            raise ValueError("identity shift needs a square operator")
        return self + identity(self.rows, constant)

    def dense(self, window: Optional[int] = None) -> "OperatorMatrix":
        rows = self.row_range(window)
        top = self.cols if self.cols is not None else rows[-1] + 1
        width = top + 1
        mat = []
        for x in rows:
            line = [0] * width
            for s, v in self.row(x).items():
                if x + s < width:
                    line[x + s] = v
            mat.append(line)
        return OperatorMatrix(tuple(tuple(r) for r in mat), self.label)


def identity(top: Optional[int], constant=1) -> ShiftOperator:
    return ShiftOperator(top, top, lambda x: {0: constant} if constant != 0 else {}, f"{constant}")


@dataclass(frozen=True)
class OperatorMatrix:
    entries: tuple
    label: str = ""
    gauge: str = "polynomial"

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)


def compare(lhs: ShiftOperator, rhs: ShiftOperator, rows: Sequence[int], tol=None):
    """Largest entry difference between two operators over ``rows``.

    Returns ``(residual, witness)`` with the first offending ``(x, column)``.
    ``tol`` (float backend) decides what counts as offending.
    """
    worst = 0
    witness = None
    for x in rows:
        a, b = lhs.row(x), rhs.row(x)
        for s in set(a) | set(b):
            d = abs(a.get(s, 0) - b.get(s, 0))
            bad = d != 0 if tol is None else d > tol
            if bad and witness is None:
                witness = {"x": x, "column": x + s}
            if d > worst:
                worst = d
    return worst, witness


# --- grids -----------------------------------------------------------------

def _top(spec: FamilySpec) -> Optional[int]:
    return spec.N


def _top_ell(spec: FamilySpec, ell: int) -> Optional[int]:
    return None if spec.N is None else spec.N - ell


# --- polynomial gauge: original system -------------------------------------

def htilde(spec: FamilySpec) -> ShiftOperator:
    """``B(x)(1 - e^d) + D(x)(1 - e^-d)``."""
    top = _top(spec)
    return ShiftOperator.from_coefficients(top, top, {
        0: lambda x: base.B(spec, x) + base.D(spec, x),
        1: lambda x: -base.B(spec, x),
        -1: lambda x: -base.D(spec, x),
    }, "Htilde")


def forward(spec: FamilySpec) -> ShiftOperator:
    """``F = B(0) varphi(x)^-1 (1 - e^d)``: grid of ``lambda`` to grid of ``lambda+delta``."""
    b0 = base.B(spec, 0)
    up = shift_lambda(spec, 1)
    return ShiftOperator.from_coefficients(_top(up), _top(spec), {
        0: lambda x: b0 / base.varphi(spec, x),
        1: lambda x: -b0 / base.varphi(spec, x),
    }, "F")


def backward(spec: FamilySpec) -> ShiftOperator:
    """``B = B(0)^-1 (B(x) - D(x) e^-d) varphi(x)``."""
    b0 = base.B(spec, 0)
    up = shift_lambda(spec, 1)
    return ShiftOperator.from_coefficients(_top(spec), _top(up), {
        0: lambda x: base.B(spec, x) * base.varphi(spec, x) / b0,
        -1: lambda x: -base.D(spec, x) * base.varphi(spec, x - 1) / b0,
    }, "B")


# --- polynomial gauge: deformed system -------------------------------------

def forward_ell(spec: FamilySpec, ell: int) -> ShiftOperator:
    lam_l = shift_lambda(spec, ell)
    up = shift_lambda(spec, 1)
    b0 = base.B(lam_l, 0)

    def pre(x):
        return b0 / (base.varphi(lam_l, x) * dfm.xi(spec, ell, x + 1))

    return ShiftOperator.from_coefficients(_top_ell(up, ell), _top_ell(spec, ell), {
        0: lambda x: pre(x) * dfm.xi(up, ell, x + 1),
        1: lambda x: -pre(x) * dfm.xi(up, ell, x),
    }, "F_ell")


def backward_ell(spec: FamilySpec, ell: int) -> ShiftOperator:
    lam_l = shift_lambda(spec, ell)
    up = shift_lambda(spec, 1)
    b0 = base.B(lam_l, 0)

    def pre(x):
        return 1 / (b0 * dfm.xi(up, ell, x))

    return ShiftOperator.from_coefficients(_top_ell(spec, ell), _top_ell(up, ell), {
        0: lambda x: pre(x) * base.B(lam_l, x) * dfm.xi(spec, ell, x) * base.varphi(lam_l, x),
        -1: lambda x: -pre(x) * base.D(lam_l, x) * dfm.xi(spec, ell, x + 1) * base.varphi(lam_l, x - 1),
    }, "B_ell")


def htilde_ell(spec: FamilySpec, ell: int) -> ShiftOperator:
    """Similarity-transformed deformed Hamiltonian in its explicit form."""
    lam_l = shift_lambda(spec, ell)
    up = shift_lambda(spec, 1)
    top = _top_ell(spec, ell)

    def b_part(x):
        return base.B(lam_l, x) * dfm.xi(spec, ell, x) / dfm.xi(spec, ell, x + 1)

    def d_part(x):
        d = base.D(lam_l, x)
        if d == 0:
            return d
        return d * dfm.xi(spec, ell, x + 1) / dfm.xi(spec, ell, x)

    def diag(x):
        total = b_part(x) * dfm.xi(up, ell, x + 1) / dfm.xi(up, ell, x)
        dp = d_part(x)
        if dp != 0:
            total = total + dp * dfm.xi(up, ell, x - 1) / dfm.xi(up, ell, x)
        return total

    return ShiftOperator.from_coefficients(top, top, {
        0: diag,
        1: lambda x: -b_part(x),
        -1: lambda x: -d_part(x),
    }, "Htilde_ell")


# --- polynomial gauge: intertwiners -----------------------------------------

def forward_hat(spec: FamilySpec, ell: int) -> ShiftOperator:
    """``Fhat``: grid of ``mu = lambda+ell delta+delta_tilde`` to the deformed grid."""
    lam_l = shift_lambda(spec, ell)
    mu = dfm.mu_spec(spec, ell)
    top = _top_ell(spec, ell)

    def v(x, which):
        return dfm.v_factors(lam_l, x)[which] / base.varphi(mu, x)

    return ShiftOperator.from_coefficients(top, _top(mu), {
        1: lambda x: v(x, 0) * dfm.xi(spec, ell, x),
        0: lambda x: -v(x, 2) * dfm.xi(spec, ell, x + 1),
    }, "Fhat")


def backward_hat(spec: FamilySpec, ell: int) -> ShiftOperator:
    """``Bhat``: deformed grid back to the grid of ``mu``."""
    prev = shift_lambda(spec, ell - 1)
    prev_t = shift_lambda(prev, 1, "delta_tilde")
    mu = dfm.mu_spec(spec, ell)

    def pre(x):
        return 1 / (dfm.xi(spec, ell, x) * base.varphi(prev_t, x))

    return ShiftOperator.from_coefficients(_top(mu), _top_ell(spec, ell), {
        0: lambda x: pre(x) * dfm.v_factors(prev, x)[1],
        -1: lambda x: -pre(x) * dfm.v_factors(prev, x)[3],
    }, "Bhat")


def hat_potentials(spec: FamilySpec, ell: int):
    """``(Bhat(x), Dhat(x))`` callables of the intertwiner ``Ahat``."""
    t = twist(shift_lambda(spec, ell - 1))

    def bhat_pot(x):
        return base.B(t, x) * dfm.xi(spec, ell, x + 1) / dfm.xi(spec, ell, x)

    def dhat_pot(x):
        d = base.D(t, x)
        if d == 0:
            return d
        return d * dfm.xi(spec, ell, x - 1) / dfm.xi(spec, ell, x)

    return bhat_pot, dhat_pot


def hat_sign(spec: FamilySpec) -> int:
    """Common sign of ``Bhat`` and ``Dhat``: negative for the dual Hahn types."""
    return -1 if spec.family in ("dH", "dqH") else 1


# --- symmetric gauge (float only) -------------------------------------------

def _require_float(spec: FamilySpec):
    if spec.backend.exact:
        raise GaugeBackendMismatch("the symmetric gauge needs the float backend")


def _sqrt(spec, v):
    return spec.backend.sqrt(v) if v != 0 else v


def a_operator(spec: FamilySpec, bfun, dfun, rows, cols, label="A") -> ShiftOperator:
    """``sqrt(B) - e^d sqrt(D)`` with row grid ``rows`` and column grid ``cols``."""
    _require_float(spec)
    return ShiftOperator.from_coefficients(rows, cols, {
        0: lambda x: _sqrt(spec, bfun(x)),
        1: lambda x: -_sqrt(spec, dfun(x + 1)),
    }, label)


def a_dagger(spec: FamilySpec, bfun, dfun, rows, cols, label="Adag") -> ShiftOperator:
    """``sqrt(B) - sqrt(D) e^-d``."""
    _require_float(spec)
    return ShiftOperator.from_coefficients(rows, cols, {
        0: lambda x: _sqrt(spec, bfun(x)),
        -1: lambda x: -_sqrt(spec, dfun(x)),
    }, label)


def hamiltonian(spec: FamilySpec, bfun, dfun, top, label="H") -> ShiftOperator:
    """Tridiagonal symmetric ``H`` built directly from its entries."""
    _require_float(spec)
    return ShiftOperator.from_coefficients(top, top, {
        0: lambda x: bfun(x) + dfun(x),
        1: lambda x: -_sqrt(spec, bfun(x) * dfun(x + 1)),
        -1: lambda x: -_sqrt(spec, bfun(x - 1) * dfun(x)),
    }, label)


def original_potentials(spec: FamilySpec):
    return (lambda x: base.B(spec, x)), (lambda x: base.D(spec, x))


def deformed_potentials(spec: FamilySpec, ell: int):
    return (lambda x: dfm.B_ell(spec, ell, x)), (lambda x: dfm.D_ell(spec, ell, x))


def hat_pair(spec: FamilySpec, ell: int):
    """Symmetric-gauge ``(Ahat, Ahat^dag)`` on the deformed grid.

    Built from ``sigma Bhat`` and ``sigma Dhat``.  For ``sigma = -1`` the shift
    term flips sign as well (the alternating gauge ``(-1)^x``), so that
    ``Ahat^dag Ahat = sigma kappa_hat (H + fhat_0 bhat_0)`` in every family.
    """
    _require_float(spec)
    sg = hat_sign(spec)
    bh, dh = hat_potentials(spec, ell)
    top = _top_ell(spec, ell)

    def root(v):
        return spec.backend.sqrt(sg * v) if v != 0 else v

    a = ShiftOperator.from_coefficients(top, top, {
        0: lambda x: root(bh(x)),
        1: lambda x: -sg * root(dh(x + 1)),
    }, "Ahat")
    ad = ShiftOperator.from_coefficients(top, top, {
        0: lambda x: root(bh(x)),
        -1: lambda x: -sg * root(dh(x)),
    }, "Adag_hat")
    return a, ad


# --- builder ---------------------------------------------------------------

LABELS = ("H", "A", "Adag", "Htilde", "F", "B", "H_ell", "A_ell", "Adag_ell", "Htilde_ell",
          "F_ell", "B_ell", "Ahat", "Adag_hat", "Fhat", "Bhat")


def build_operator(spec: FamilySpec, ell: Optional[int], label: str,
                   gauge: str = "polynomial") -> ShiftOperator:
    """Construct one named operator in the requested gauge."""
    symmetric = {"H", "A", "Adag", "H_ell", "A_ell", "Adag_ell", "Ahat", "Adag_hat"}
    if label not in LABELS:
        raise ValueError(f"unknown operator {label!r}")
    if gauge not in ("polynomial", "symmetric"):
        raise ValueError(f"unknown gauge {gauge!r}")
    if (label in symmetric) != (gauge == "symmetric"):
        raise ValueError(f"{label} lives in the {'symmetric' if label in symmetric else 'polynomial'} gauge")
    if gauge == "symmetric":
        _require_float(spec)
    needs_ell = label.endswith("ell") or "hat" in label or label == "Ahat"
    if needs_ell and not ell:
        raise ValueError(f"{label} needs a deformation index")
    up = shift_lambda(spec, 1)
    if label == "Htilde":
        return htilde(spec)
    if label == "F":
        return forward(spec)
    if label == "B":
        return backward(spec)
    if label == "Htilde_ell":
        return htilde_ell(spec, ell)
    if label == "F_ell":
        return forward_ell(spec, ell)
    if label == "B_ell":
        return backward_ell(spec, ell)
    if label == "Fhat":
        return forward_hat(spec, ell)
    if label == "Bhat":
        return backward_hat(spec, ell)
    if label in ("H", "A", "Adag"):
        bf, df = original_potentials(spec)
        if label == "H":
            return hamiltonian(spec, bf, df, _top(spec))
        if label == "A":
            return a_operator(spec, bf, df, _top(up), _top(spec))
        return a_dagger(spec, bf, df, _top(spec), _top(up))
    if label in ("H_ell", "A_ell", "Adag_ell"):
        bf, df = deformed_potentials(spec, ell)
        if label == "H_ell":
            return hamiltonian(spec, bf, df, _top_ell(spec, ell), "H_ell")
        if label == "A_ell":
            return a_operator(spec, bf, df, _top_ell(up, ell), _top_ell(spec, ell), "A_ell")
        return a_dagger(spec, bf, df, _top_ell(spec, ell), _top_ell(up, ell), "Adag_ell")
    a, ad = hat_pair(spec, ell)
    return a if label == "Ahat" else ad
