"""Family data: parameter vectors, shifts, twists and every closed form.

Five shape-invariant systems are modelled: Racah (``R``), q-Racah (``qR``),
dual Hahn (``dH``), dual q-Hahn (``dqH``) and little q-Jacobi (``lqJ``).
q-family parameters are stored exponentiated (``a = q**lambda_1`` and so on)
and shifts act multiplicatively on them.

Each family is a stateless :class:`FamilyModel` holding the closed forms of
the potentials, energies, sinusoidal coordinate, weights, norms, v-factors
and deformation constants.  The generic machinery in :mod:`xracah.base`,
:mod:`xracah.deformed` and :mod:`xracah.operators` only talks to this
interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .scalar import (
    EXACT,
    Backend,
    q_pochhammer,
    q_pochhammers,
    shifted_factorial,
    shifted_factorials,
)

FAMILY_NAMES = ("R", "qR", "dH", "dqH", "lqJ")
Q_FAMILIES = frozenset({"qR", "dqH", "lqJ"})
FAULT_NAMES = ("dn2", "dln2", "fhat", "bhat", "s", "kappa_hat")


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class HyperData:
    """Arguments of the terminating series defining ``P_n(eta(x))``."""

    numerator: tuple
    denominator: tuple
    argument: object
    q: object = None


@dataclass(frozen=True)
class FamilySpec:
    """One point in a family's parameter space.

    ``N`` is the grid size (``x_max = N``) of the system described by
    ``lam``; it is ``None`` for little q-Jacobi and for twisted vectors,
    which never carry a grid of their own.
    """

    family: str
    lam: tuple
    q: object = None
    N: Optional[int] = None
    backend: Backend = EXACT
    faults: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.family not in FAMILY_NAMES:
            raise ParameterError(f"unknown family {self.family!r}")
        if len(self.lam) != MODELS[self.family].arity:
            raise ParameterError(
                f"{self.family} takes {MODELS[self.family].arity} parameters, got {len(self.lam)}"
            )
        if (self.family in Q_FAMILIES) != (self.q is not None):
            raise ParameterError(f"q must be given exactly for the q-families, not {self.family}")
        unknown = set(self.faults) - set(FAULT_NAMES)
        if unknown:
            raise ParameterError(f"unknown fault names {sorted(unknown)}")

    @property
    def model(self) -> "FamilyModel":
        return MODELS[self.family]

    @property
    def finite(self) -> bool:
        return self.family != "lqJ"

    @property
    def x_max(self) -> Optional[int]:
        return self.N

    @property
    def kappa(self):
        return self.model.kappa(self)

    def scalar(self, value):
        return self.backend.scalar(value)

    def shifted(self, multiple: int = 1, which: str = "delta") -> "FamilySpec":
        return shift_lambda(self, multiple, which)

    def twisted(self) -> "FamilySpec":
        return twist(self)

    def with_backend(self, backend: Backend) -> "FamilySpec":
        lam = tuple(backend.scalar(v) for v in self.lam)
        q = None if self.q is None else backend.scalar(self.q)
        return replace(self, lam=lam, q=q, backend=backend)

    def with_faults(self, *names: str) -> "FamilySpec":
        return replace(self, faults=frozenset(self.faults) | frozenset(names))

    def describe(self) -> dict:
        from .serialize import scalar_to_json

        out = {
            "family": self.family,
            "lambda": [scalar_to_json(v) for v in self.lam],
            "N": self.N,
            "backend": str(self.backend),
        }
        if self.q is not None:
            out["q"] = scalar_to_json(self.q)
        if self.faults:
            out["faults"] = sorted(self.faults)
        return out


def make_spec(family: str, params, *, N: Optional[int] = None, q=None,
              backend: Backend = EXACT) -> FamilySpec:
    """Build a spec from user-facing parameters.

    ``params`` are the values named in each family's table: ``(a, b, c, d)``
    for R and qR, ``(a, b)`` for dH, dqH and lqJ (the dual Hahn grid size is
    passed as ``N``; a third entry equal to ``N`` is tolerated).  For R and
    qR, ``N`` defaults to the value implied by ``a``.
    """
    if family not in FAMILY_NAMES:
        raise ParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILY_NAMES)}")
    values = [backend.scalar(p) for p in params]
    qv = None if q is None else backend.scalar(q)
    if family in Q_FAMILIES and qv is None:
        raise ParameterError(f"{family} needs q")
    if family not in Q_FAMILIES and qv is not None:
        raise ParameterError(f"{family} takes no q")
    if family == "R":
        if len(values) != 4:
            raise ParameterError("R takes four parameters a,b,c,d")
        if N is None:
            a = values[0]
            if a != int(a) or a >= 0:
                raise ParameterError("cannot infer N: a is not a negative integer")
            N = -int(a)
    elif family == "qR":
        if len(values) != 4:
            raise ParameterError("qR takes four parameters a,b,c,d")
        if N is None:
            N = _infer_q_power(values[0], qv)
    elif family in ("dH", "dqH"):
        if len(values) == 3:
            third = values.pop()
            if N is None and family == "dH":
                N = int(third)
        if len(values) != 2:
            raise ParameterError(f"{family} takes parameters a,b (and N)")
        if N is None:
            raise ParameterError(f"{family} needs the grid size N")
        values.append(backend.scalar(N) if family == "dH" else qv ** N)
    else:
        if len(values) != 2:
            raise ParameterError("lqJ takes two parameters a,b")
        N = None
    return FamilySpec(family, tuple(values), qv, N, backend)


def _infer_q_power(a, q) -> int:
    # a = q**(-N)
    for n in range(0, 200):
        if a == q ** (-n):
            return n
    raise ParameterError("cannot infer N: a is not q**(-N) for an integer N")


def validate_parameters(spec: FamilySpec, deformed: bool = True) -> list:
    """Return the list of violated range clauses (empty when admissible).

    ``deformed`` selects the narrower dual (q)-Hahn ranges required for the
    deformation; R, qR and lqJ use the same range either way.
    """
    return spec.model.range_violations(spec, deformed)


def is_admissible(spec: FamilySpec, deformed: bool = True) -> bool:
    return not validate_parameters(spec, deformed)


def twist(spec: FamilySpec) -> FamilySpec:
    return replace(spec, lam=spec.model.twist(spec), N=None)


def shift_lambda(spec: FamilySpec, multiple: int, which: str = "delta") -> FamilySpec:
    """Shift parameters by ``multiple`` times ``delta`` or ``delta_tilde``."""
    model = spec.model
    if which == "delta":
        vec = model.delta
    elif which == "delta_tilde":
        vec = model.delta_tilde
    else:
        raise ValueError(f"unknown shift {which!r}")
    if multiple == 0:
        return spec
    if spec.q is None:
        lam = tuple(v + multiple * s for v, s in zip(spec.lam, vec))
    else:
        lam = tuple(v * spec.q ** (multiple * s) for v, s in zip(spec.lam, vec))
    N = spec.N
    if N is not None:
        N = N + multiple * model.grid_shift(vec)
    return replace(spec, lam=lam, N=N)


def combined_shift(spec: FamilySpec, ell: int, tilde: int = 0) -> FamilySpec:
    """``lambda + ell*delta + tilde*delta_tilde``."""
    return shift_lambda(shift_lambda(spec, ell), tilde, "delta_tilde")


class FamilyModel:
    """Closed forms of one family.  Methods take the FamilySpec they evaluate at."""

    name = ""
    arity = 0
    delta: tuple = ()
    delta_tilde: tuple = ()

    def grid_shift(self, vec) -> int:
        raise NotImplementedError

    def kappa(self, s):
        raise NotImplementedError

    # --- original system -------------------------------------------------
    def B(self, s, x): raise NotImplementedError
    def D(self, s, x): raise NotImplementedError
    def energy(self, s, n): raise NotImplementedError
    def eta(self, s, x): raise NotImplementedError
    def varphi(self, s, x): raise NotImplementedError
    def varphi_half(self, s, x, side): raise NotImplementedError
    def hyper(self, s, n, x) -> HyperData: raise NotImplementedError
    def phi0_sq(self, s, x): raise NotImplementedError
    def dn_sq_parts(self, s, n): raise NotImplementedError

    # --- deformation data ------------------------------------------------
    def twist(self, s) -> tuple: raise NotImplementedError
    def v_factors(self, s, x) -> tuple: raise NotImplementedError
    def fhat(self, s, ell, n): raise NotImplementedError
    def bhat(self, s, ell, n): raise NotImplementedError
    def kappa_hat(self, s, ell): raise NotImplementedError
    def s_hat_factor(self, s, ell): raise NotImplementedError
    def s_ell(self, s, ell): raise NotImplementedError
    def range_violations(self, s, deformed) -> list: raise NotImplementedError


def _check(out: list, ok: bool, clause: str):
    if not ok:
        out.append(f"{clause} fails")


class Racah(FamilyModel):
    name = "R"
    arity = 4
    delta = (1, 1, 1, 1)
    delta_tilde = (0, 0, -1, -1)

    def grid_shift(self, vec):
        return -vec[0]

    def kappa(self, s):
        return s.scalar(1)

    @staticmethod
    def dtilde(s):
        a, b, c, d = s.lam
        return a + b + c - d - 1

    def B(self, s, x):
        a, b, c, d = s.lam
        return -(x + a) * (x + b) * (x + c) * (x + d) / ((2 * x + d) * (2 * x + 1 + d))

    def D(self, s, x):
        if x == 0:
            return s.scalar(0)
        a, b, c, d = s.lam
        return -(x + d - a) * (x + d - b) * (x + d - c) * x / ((2 * x - 1 + d) * (2 * x + d))

    def energy(self, s, n):
        return n * (n + self.dtilde(s))

    def eta(self, s, x):
        d = s.lam[3]
        return x * (x + d)

    def varphi(self, s, x):
        d = s.lam[3]
        return (2 * x + d + 1) / (d + 1)

    def varphi_half(self, s, x, side):
        d = s.lam[3]
        return (2 * x + side + d + 1) / (d + 1)

    def hyper(self, s, n, x):
        a, b, c, d = s.lam
        return HyperData((-n, n + self.dtilde(s), -x, x + d), (a, b, c), s.scalar(1))

    def phi0_sq(self, s, x):
        a, b, c, d = s.lam
        num = shifted_factorials((a, b, c, d), x)
        den = shifted_factorials((1 + d - a, 1 + d - b, 1 + d - c, s.scalar(1)), x)
        return num / den * (2 * x + d) / d

    def dn_sq_parts(self, s, n):
        a, b, c, d = s.lam
        dt = self.dtilde(s)
        N = s.N
        first = (shifted_factorials((a, b, c, dt), n)
                 / shifted_factorials((1 + dt - a, 1 + dt - b, 1 + dt - c, s.scalar(1)), n)
                 * (2 * n + dt) / dt)
        second = ((-1) ** N * shifted_factorials((1 + d - a, 1 + d - b, 1 + d - c), N)
                  / (shifted_factorial(dt + 1, N) * shifted_factorial(d + 1, 2 * N)))
        return first * second, (), ()

    def twist(self, s):
        a, b, c, d = s.lam
        return (d - a, d - b, c, d)

    def v_factors(self, s, x):
        a, b, c, d = s.lam
        return ((x + a) * (x + b) / d, (x + c) * (x + d) / d,
                (x + d - a) * (x + d - b) / d, (x + d - c) * x / d)

    def fhat(self, s, ell, n):
        a, b, c, d = s.lam
        return (a + b - d + n) * (c + 2 * ell + n - 1) / (c + ell - 1)

    def bhat(self, s, ell, n):
        return s.lam[2] + ell - 1

    def kappa_hat(self, s, ell):
        return s.scalar(1)

    def s_hat_factor(self, s, ell):
        return s.lam[2] + ell - 1

    def s_ell(self, s, ell):
        a, b, c, d = s.lam
        return -(d - a) * (d - b) / ((c + ell - 1) * (d + ell))

    def range_violations(self, s, deformed):
        a, b, c, d = s.lam
        out = []
        _check(out, s.N is not None and a == -s.N, "a=-N")
        _check(out, a + b > d, "a+b>d")
        _check(out, d > 0, "d>0")
        _check(out, c > 0, "c>0")
        _check(out, c < 1 + d, "c<1+d")
        return out


class QRacah(FamilyModel):
    name = "qR"
    arity = 4
    delta = (1, 1, 1, 1)
    delta_tilde = (0, 0, -1, -1)

    def grid_shift(self, vec):
        return -vec[0]

    def kappa(self, s):
        return 1 / s.q

    @staticmethod
    def dtilde(s):
        a, b, c, d = s.lam
        return a * b * c / (d * s.q)

    def B(self, s, x):
        a, b, c, d = s.lam
        qx = s.q ** x
        return (-(1 - a * qx) * (1 - b * qx) * (1 - c * qx) * (1 - d * qx)
                / ((1 - d * qx * qx) * (1 - d * qx * qx * s.q)))

    def D(self, s, x):
        if x == 0:
            return s.scalar(0)
        a, b, c, d = s.lam
        q, qx = s.q, s.q ** x
        return (-self.dtilde(s) * (1 - d * qx / a) * (1 - d * qx / b) * (1 - d * qx / c) * (1 - qx)
                / ((1 - d * qx * qx / q) * (1 - d * qx * qx)))

    def energy(self, s, n):
        q = s.q
        return (q ** (-n) - 1) * (1 - self.dtilde(s) * q ** n)

    def eta(self, s, x):
        d, q = s.lam[3], s.q
        return (q ** (-x) - 1) * (1 - d * q ** x)

    def varphi(self, s, x):
        d, q = s.lam[3], s.q
        return (q ** (-x) - d * q ** (x + 1)) / (1 - d * q)

    def varphi_half(self, s, x, side):
        # varphi(x + side/2) / sqrt(kappa); all powers of q are integral
        d, q = s.lam[3], s.q
        if side > 0:
            return (q ** (-x) - d * q ** (x + 2)) / (1 - d * q)
        return (q ** (1 - x) - d * q ** (x + 1)) / (1 - d * q)

    def hyper(self, s, n, x):
        a, b, c, d = s.lam
        q = s.q
        return HyperData((q ** (-n), self.dtilde(s) * q ** n, q ** (-x), d * q ** x), (a, b, c), q, q)

    def phi0_sq(self, s, x):
        a, b, c, d = s.lam
        q = s.q
        num = q_pochhammers((a, b, c, d), q, x)
        den = q_pochhammers((d * q / a, d * q / b, d * q / c, q), q, x) * self.dtilde(s) ** x
        return num / den * (1 - d * q ** (2 * x)) / (1 - d)

    def dn_sq_parts(self, s, n):
        a, b, c, d = s.lam
        q, N = s.q, s.N
        dt = self.dtilde(s)
        first = (q_pochhammers((a, b, c, dt), q, n)
                 / (q_pochhammers((dt * q / a, dt * q / b, dt * q / c, q), q, n) * d ** n)
                 * (1 - dt * q ** (2 * n)) / (1 - dt))
        second = ((-1) ** N * q_pochhammers((d * q / a, d * q / b, d * q / c), q, N)
                  * dt ** N * q ** (N * (N + 1) // 2)
                  / (q_pochhammer(dt * q, q, N) * q_pochhammer(d * q, q, 2 * N)))
        return first * second, (), ()

    def twist(self, s):
        a, b, c, d = s.lam
        return (d / a, d / b, c, d)

    def v_factors(self, s, x):
        a, b, c, d = s.lam
        qx = s.q ** x
        pre = 1 / (qx * (1 - d))
        return (pre * (1 - a * qx) * (1 - b * qx),
                pre * (1 - c * qx) * (1 - d * qx),
                pre * a * b / d * (1 - d * qx / a) * (1 - d * qx / b),
                pre * c * (1 - d * qx / c) * (1 - qx))

    def fhat(self, s, ell, n):
        a, b, c, d = s.lam
        q = s.q
        return (q ** (-n) * (1 - a * b / d * q ** n) * (1 - c * q ** (2 * ell + n - 1))
                / (1 - c * q ** (ell - 1)))

    def bhat(self, s, ell, n):
        return 1 - s.lam[2] * s.q ** (ell - 1)

    def kappa_hat(self, s, ell):
        a, b, c, d = s.lam
        return d / (a * b * s.q ** ell)

    def s_hat_factor(self, s, ell):
        return 1 - s.lam[2] * s.q ** (ell - 1)

    def s_ell(self, s, ell):
        a, b, c, d = s.lam
        q = s.q
        return (-a * b / d * q ** ell * (1 - d / a) * (1 - d / b)
                / ((1 - c * q ** (ell - 1)) * (1 - d * q ** ell)))

    def range_violations(self, s, deformed):
        a, b, c, d = s.lam
        q = s.q
        out = []
        _check(out, 0 < q < 1, "0<q<1")
        _check(out, s.N is not None and a == q ** (-s.N), "a=q^-N")
        _check(out, 0 < a * b, "0<ab")
        _check(out, a * b < d, "ab<d")
        _check(out, d < 1, "d<1")
        _check(out, q * d < c, "qd<c")
        _check(out, c < 1, "c<1")
        return out


class DualHahn(FamilyModel):
    name = "dH"
    arity = 3
    delta = (1, 0, -1)
    delta_tilde = (0, -1, 0)

    def grid_shift(self, vec):
        return vec[2]

    def kappa(self, s):
        return s.scalar(1)

    def B(self, s, x):
        a, b, N = s.lam
        return (x + a) * (x + a + b - 1) * (N - x) / ((2 * x - 1 + a + b) * (2 * x + a + b))

    def D(self, s, x):
        if x == 0:
            return s.scalar(0)
        a, b, N = s.lam
        return x * (x + b - 1) * (x + a + b + N - 1) / ((2 * x - 2 + a + b) * (2 * x - 1 + a + b))

    def energy(self, s, n):
        return s.scalar(n)

    def eta(self, s, x):
        a, b, _ = s.lam
        return x * (x + a + b - 1)

    def varphi(self, s, x):
        a, b, _ = s.lam
        return (2 * x + a + b) / (a + b)

    def varphi_half(self, s, x, side):
        a, b, _ = s.lam
        return (2 * x + side + a + b) / (a + b)

    def hyper(self, s, n, x):
        a, b, N = s.lam
        return HyperData((-n, x + a + b - 1, -x), (a, -N), s.scalar(1))

    def phi0_sq(self, s, x):
        a, b, _ = s.lam
        N = s.N
        return (math.comb(N, x) * shifted_factorial(a, x) * (2 * x + a + b - 1)
                * shifted_factorial(a + b, N)
                / (shifted_factorial(b, x) * shifted_factorial(x + a + b - 1, N + 1)))

    def dn_sq_parts(self, s, n):
        a, b, _ = s.lam
        N = s.N
        value = (math.comb(N, n) * shifted_factorial(a, n) * shifted_factorial(b, N - n)
                 / shifted_factorial(b, N)
                 * shifted_factorial(b, N) / shifted_factorial(a + b, N))
        return value, (), ()

    def twist(self, s):
        a, b, N = s.lam
        return (a + b + N - 1, 1 - N, 1 - b)

    def v_factors(self, s, x):
        a, b, N = s.lam
        w = a + b - 1
        return ((x - N) * (x + a) / w, (x + a + b - 1) / w,
                (x + a + b + N - 1) * (x + b - 1) / w, -x / w)

    def fhat(self, s, ell, n):
        a, b, N = s.lam
        return -b - N + n + 1

    def bhat(self, s, ell, n):
        return s.scalar(1)

    def kappa_hat(self, s, ell):
        return s.scalar(1)

    def s_hat_factor(self, s, ell):
        return s.scalar(1)

    def s_ell(self, s, ell):
        a, b, N = s.lam
        return (1 - b) * (a + b + N - 1) / (a + b + ell - 1)

    def range_violations(self, s, deformed):
        a, b, N = s.lam
        out = []
        _check(out, s.N is not None and N == s.N and s.N >= 1, "N positive integer")
        _check(out, a > 0, "a>0")
        if deformed:
            _check(out, b > 1, "b>1")
        else:
            _check(out, b > 0, "b>0")
        return out


class DualQHahn(FamilyModel):
    name = "dqH"
    arity = 3
    delta = (1, 0, -1)
    delta_tilde = (0, -1, 0)

    def grid_shift(self, vec):
        return vec[2]

    def kappa(self, s):
        return 1 / s.q

    def B(self, s, x):
        a, b, qN = s.lam
        q, qx = s.q, s.q ** x
        ab = a * b
        return ((qx / qN - 1) * (1 - a * qx) * (1 - ab * qx / q)
                / ((1 - ab * qx * qx / q) * (1 - ab * qx * qx)))

    def D(self, s, x):
        if x == 0:
            return s.scalar(0)
        a, b, qN = s.lam
        q, qx = s.q, s.q ** x
        ab = a * b
        return (a * qx / (qN * q) * (1 - qx) * (1 - ab * qN * qx / q) * (1 - b * qx / q)
                / ((1 - ab * qx * qx / (q * q)) * (1 - ab * qx * qx / q)))

    def energy(self, s, n):
        return s.q ** (-n) - 1

    def eta(self, s, x):
        a, b, _ = s.lam
        q = s.q
        return (q ** (-x) - 1) * (1 - a * b * q ** (x - 1))

    def varphi(self, s, x):
        a, b, _ = s.lam
        q = s.q
        return (q ** (-x) - a * b * q ** x) / (1 - a * b)

    def varphi_half(self, s, x, side):
        a, b, _ = s.lam
        q = s.q
        if side > 0:
            return (q ** (-x) - a * b * q ** (x + 1)) / (1 - a * b)
        return (q ** (1 - x) - a * b * q ** x) / (1 - a * b)

    def hyper(self, s, n, x):
        a, b, qN = s.lam
        q = s.q
        return HyperData((q ** (-n), a * b * q ** (x - 1), q ** (-x)), (a, 1 / qN), q, q)

    def phi0_sq(self, s, x):
        a, b, qN = s.lam
        q, N = s.q, s.N
        qbinom = q_pochhammer(q, q, N) / (q_pochhammer(q, q, x) * q_pochhammer(q, q, N - x))
        ab = a * b
        return (qbinom * q_pochhammers((a, ab / q), q, x)
                / (q_pochhammers((ab * qN, b), q, x) * a ** x)
                * (1 - ab * q ** (2 * x - 1)) / (1 - ab / q))

    def dn_sq_parts(self, s, n):
        a, b, _ = s.lam
        q, N = s.q, s.N
        qbinom = q_pochhammer(q, q, N) / (q_pochhammer(q, q, n) * q_pochhammer(q, q, N - n))
        value = (qbinom * q_pochhammer(a, q, n) * q_pochhammer(b, q, N - n)
                 / (q_pochhammer(b, q, N) * a ** n)
                 * q_pochhammer(b, q, N) * a ** N / q_pochhammer(a * b, q, N))
        return value, (), ()

    def twist(self, s):
        a, b, qN = s.lam
        q = s.q
        return (a * b * qN / q, q / qN, q / b)

    def v_factors(self, s, x):
        a, b, qN = s.lam
        q, qx = s.q, s.q ** x
        ab = a * b
        w = 1 - ab / q
        return ((1 - qx / qN) * (1 - a * qx) / (qx * w),
                (1 - ab * qx / q) / (qx * w),
                q / (b * qN) * (1 - ab * qN * qx / q) * (1 - b * qx / q) / (qx * w),
                -ab / q * (1 - qx) / w)

    def fhat(self, s, ell, n):
        a, b, qN = s.lam
        q = s.q
        return -q / (b * qN) * (1 - b * qN * q ** (-n - 1))

    def bhat(self, s, ell, n):
        return s.scalar(1)

    def kappa_hat(self, s, ell):
        a, b, qN = s.lam
        return b * qN * s.q ** (-ell - 1)

    def s_hat_factor(self, s, ell):
        return s.scalar(1)

    def s_ell(self, s, ell):
        a, b, qN = s.lam
        q = s.q
        return q ** ell / qN * (1 - q / b) * (1 - a * b * qN / q) / (1 - a * b * q ** (ell - 1))

    def range_violations(self, s, deformed):
        a, b, qN = s.lam
        q = s.q
        out = []
        _check(out, 0 < q < 1, "0<q<1")
        _check(out, s.N is not None and s.N >= 1 and qN == q ** s.N, "N positive integer")
        _check(out, 0 < a < 1, "0<a<1")
        if deformed:
            _check(out, 0 < b < q, "0<b<q")
        else:
            _check(out, 0 < b < 1, "0<b<1")
        return out


class LittleQJacobi(FamilyModel):
    name = "lqJ"
    arity = 2
    delta = (1, 1)
    delta_tilde = (1, -1)

    def grid_shift(self, vec):
        return 0

    def kappa(self, s):
        return 1 / s.q

    def B(self, s, x):
        a, b = s.lam
        q = s.q
        return a * (q ** (-x) - b * q)

    def D(self, s, x):
        return s.q ** (-x) - 1

    def energy(self, s, n):
        a, b = s.lam
        q = s.q
        return (q ** (-n) - 1) * (1 - a * b * q ** (n + 1))

    def eta(self, s, x):
        return 1 - s.q ** x

    def varphi(self, s, x):
        return s.q ** x

    def varphi_half(self, s, x, side):
        q = s.q
        return q ** (x + 1) if side > 0 else q ** x

    def hyper(self, s, n, x):
        a, b = s.lam
        q = s.q
        return HyperData((q ** (-n), a * b * q ** (n + 1), q ** (-x)), (b * q,), q ** x / a, q)

    def phi0_sq(self, s, x):
        a, b = s.lam
        q = s.q
        return q_pochhammer(b * q, q, x) / q_pochhammer(q, q, x) * (a * q) ** x

    def dn_sq_parts(self, s, n):
        a, b = s.lam
        q = s.q
        value = (q_pochhammers((b * q, a * b * q), q, n) * a ** n * q ** (n * n)
                 / q_pochhammers((q, a * q), q, n)
                 * (1 - a * b * q ** (2 * n + 1)) / (1 - a * b * q))
        # times (aq; q)_inf / (abq^2; q)_inf
        return value, (a * q,), (a * b * q * q,)

    def twist(self, s):
        a, b = s.lam
        return (1 / (a * s.q * s.q), b)

    def v_factors(self, s, x):
        a, b = s.lam
        q, qx = s.q, s.q ** x
        return (-a * qx * q, 1 - b * qx * q, -qx, 1 - qx)

    def fhat(self, s, ell, n):
        a, b = s.lam
        q = s.q
        return q ** (-n) * (1 - a * q ** (n + 1)) * (1 - b * q ** (2 * ell + n)) / (1 - b * q ** ell)

    def bhat(self, s, ell, n):
        a, b = s.lam
        return 1 - b * s.q ** ell

    def kappa_hat(self, s, ell):
        a, b = s.lam
        return 1 / (a * s.q ** (ell + 1))

    def s_hat_factor(self, s, ell):
        a, b = s.lam
        return 1 - b * s.q ** ell

    def s_ell(self, s, ell):
        a, b = s.lam
        return 1 / (1 - b * s.q ** ell)

    def range_violations(self, s, deformed):
        a, b = s.lam
        q = s.q
        out = []
        _check(out, 0 < q < 1, "0<q<1")
        _check(out, 0 < a * q < 1, "0<a<1/q")
        _check(out, 0 < b * q < 1, "0<b<1/q")
        return out


MODELS: dict = {
    "R": Racah(),
    "qR": QRacah(),
    "dH": DualHahn(),
    "dqH": DualQHahn(),
    "lqJ": LittleQJacobi(),
}


def parse_rational_list(text: str) -> list:
    """Parse ``"-8,10,2,3/2"`` into strings suitable for :meth:`Backend.scalar`."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ParameterError("empty parameter list")
    for p in parts:
        try:
            Fraction(p)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"malformed parameter {p!r}") from exc
    return parts


def parse_int_range(text: str) -> list:
    """``"0..6"`` -> [0..6]; ``"1,2,3"`` -> [1, 2, 3]."""
    text = text.strip()
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return out
