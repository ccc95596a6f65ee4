"""Run the identity suite for one parameter point and assemble a report."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, List, Optional, Sequence

from . import checks as C
from .families import FamilySpec, ParameterError, validate_parameters
from .serialize import dumps, scalar_to_json

_GROUP_ORDER = {"base": 0, "deformed": 1, "intertwining": 2, "float": 3}
_ALL_ELL = ("symmetric_hamiltonian", "spectrum")


@dataclass
class VerificationReport:
    spec: dict
    checks: List[C.CheckResult]
    violations: List[str] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[C.CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "spec": self.spec,
            "passed": self.passed,
            "violations": list(self.violations),
            "checks": [_entry(c) for c in self.checks],
        }
        if timing:
            out["timing"] = self.timing
        return out

    def to_json(self, timing: bool = True) -> str:
        return dumps(self.to_dict(timing))

    def to_text(self) -> str:
        lines = [f"{self.spec['family']} {','.join(map(str, self.spec['lambda']))}"
                 f"  N={self.spec['N']}  backend={self.spec['backend']}"]
        for v in self.violations:
            lines.append(f"  range violation: {v}")
        for c in self.checks:
            ell = "" if c.ell is None else f" ell={c.ell}"
            line = f"  {c.status.upper():7s} {c.name}{ell}  residual={scalar_to_json(c.residual)}"
            if c.witness:
                line += f"  witness={c.witness}"
            lines.append(line)
        n_fail = len(self.failures)
        lines.append(f"{len(self.checks)} checks, {n_fail} failed")
        return "\n".join(lines) + "\n"


def _entry(c: C.CheckResult) -> dict:
    d = asdict(c)
    d["residual"] = scalar_to_json(c.residual)
    return d


def plan(spec: FamilySpec, ells: Sequence[int], names: Optional[Iterable[str]] = None) -> list:
    """Ordered ``(check, ell)`` tasks for this spec and deformation indices."""
    wanted = set(C.resolve_checks(names))
    deformations = sorted({e for e in ells if e > 0})
    tasks = []
    for cd in C.REGISTRY:
        if cd.name not in wanted:
            continue
        if cd.float_only and spec.backend.exact:
            continue
        if cd.group == "base":
            tasks.append((cd, None))
        elif cd.name in _ALL_ELL:
            tasks.extend((cd, e) for e in [0] + deformations)
        else:
            tasks.extend((cd, e) for e in deformations)
    return tasks


def _run_one(spec: FamilySpec, name: str, ell: Optional[int], opts: C.SuiteOptions):
    cd = next(c for c in C.REGISTRY if c.name == name)
    start = time.perf_counter()
    try:
        result = cd.fn(spec, opts) if ell is None else cd.fn(spec, ell, opts)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        # a breakdown (vanishing xi, degenerate degree, ...) is a failed check, not a crash
        result = C.CheckResult(name, "", str(spec.backend), "fail", 1, {"error": type(exc).__name__},
                               ell, {"message": str(exc)})
    return result, time.perf_counter() - start


def _sort_key(r: C.CheckResult):
    group = next(c.group for c in C.REGISTRY if c.name == r.name)
    order = C.CHECK_NAMES.index(r.name)
    return (_GROUP_ORDER[group], order, -1 if r.ell is None else r.ell)


def run_suite(spec: FamilySpec, ells: Sequence[int] = (), names: Optional[Iterable[str]] = None,
              jobs: int = 1, options: Optional[C.SuiteOptions] = None,
              force: bool = False) -> VerificationReport:
    """Run the selected checks; the report does not depend on ``jobs``.

    Inadmissible parameters raise :class:`ParameterError` unless ``force``,
    in which case the violated clauses are recorded in the report.
    """
    opts = options or C.SuiteOptions()
    violations = validate_parameters(spec)
    if violations and not force:
        raise ParameterError("inadmissible parameters: " + "; ".join(violations))
    if spec.finite:
        bad = [e for e in ells if e > spec.N - 1]
        if bad:
            raise ParameterError(f"ell must be at most N-1 = {spec.N - 1}, got {bad}")
    tasks = plan(spec, ells, names)
    start = time.perf_counter()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, spec, cd.name, ell, opts) for cd, ell in tasks]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_run_one(spec, cd.name, ell, opts) for cd, ell in tasks]
    results = sorted((r for r, _ in outcomes), key=_sort_key)
    per_check = {f"{r.name}" + ("" if r.ell is None else f"[{r.ell}]"): round(dt, 6)
                 for r, dt in outcomes}
    timing = {"total_seconds": round(time.perf_counter() - start, 6), "checks": per_check}
    return VerificationReport(spec.describe(), results, list(violations), timing)
