"""JSON and CSV rendering of exact and floating scalars."""

from __future__ import annotations

import csv
import io
import json
from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from .polynomials import Poly

DEFAULT_DIGITS = 30


def scalar_to_json(value) -> object:
    """Exact rationals become ``"num/den"`` strings; floats keep every stored digit."""
    if isinstance(value, (bool, int)) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, mpmath.mpf) or hasattr(value, "context"):
        return mpmath.nstr(value, _mpf_digits(value), min_fixed=1, max_fixed=0)
    return value


def _mpf_digits(value) -> int:
    prec = getattr(getattr(value, "context", None), "prec", 53)
    return int(prec * 0.30103) + 2


def scalar_from_json(text: str):
    """Inverse of :func:`scalar_to_json` for exact values."""
    return Fraction(text)


def scalar_to_decimal(value, digits: int = DEFAULT_DIGITS) -> str:
    """Decimal rendering with ``digits`` significant digits (CSV output)."""
    if isinstance(value, (int, Fraction)):
        v = Fraction(value)
        ctx = Context(prec=digits)
        return str(ctx.divide(Decimal(v.numerator), Decimal(v.denominator)))
    if isinstance(value, mpmath.mpf) or hasattr(value, "context"):
        return mpmath.nstr(value, digits)
    return str(value)


def to_jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Poly):
        return poly_to_json(obj)
    return scalar_to_json(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


def poly_to_json(p: Poly) -> list:
    """Ascending coefficients as strings."""
    return [str(c) if isinstance(c, int) else scalar_to_json(c) for c in p.coeffs]


def poly_from_json(data: Sequence[str]) -> Poly:
    return Poly([Fraction(c) for c in data])


def rows_to_csv(rows: Iterable[Mapping], digits: int = DEFAULT_DIGITS) -> str:
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(rows[0].keys())
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k), digits) for k in fields})
    return buf.getvalue()


def _text_cell(value, digits):
    if value is None:
        return "-"
    if isinstance(value, (str, bool, int, Fraction)):
        return str(value)
    if isinstance(value, mpmath.mpf) or hasattr(value, "context"):
        return mpmath.nstr(value, digits)
    return str(to_jsonable(value))


def _csv_cell(value, digits):
    if value is None:
        return ""
    if isinstance(value, (str, bool)):
        return value
    return scalar_to_decimal(value, digits)


def rows_to_text(rows: Iterable[Mapping], digits: int = 12) -> str:
    rows = list(rows)
    if not rows:
        return ""
    fields = list(rows[0].keys())
    cells = [[_text_cell(r.get(k), digits) for k in fields] for r in rows]
    widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
    lines = ["  ".join(f.ljust(w) for f, w in zip(fields, widths))]
    for c in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(c, widths)))
    return "\n".join(lines) + "\n"
