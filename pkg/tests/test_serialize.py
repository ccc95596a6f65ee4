import json
from fractions import Fraction as F

from hypothesis import given
from hypothesis import strategies as st

from xracah.polynomials import Poly
from xracah.scalar import float_backend
from xracah.serialize import (dumps, poly_from_json, poly_to_json, rows_to_csv, rows_to_text,
                              scalar_from_json, scalar_to_decimal, scalar_to_json)

fractions = st.fractions(max_denominator=10 ** 12)


@given(fractions)
def test_exact_scalar_round_trip(v):
    text = scalar_to_json(v)
    assert isinstance(text, str)
    assert scalar_from_json(text) == v


@given(st.lists(fractions, min_size=1, max_size=8))
def test_polynomial_round_trip(cs):
    p = Poly(tuple(cs))
    assert poly_from_json(json.loads(json.dumps(poly_to_json(p)))) == p


def test_integers_and_none_pass_through():
    assert scalar_to_json(3) == 3
    assert scalar_to_json(None) is None
    assert scalar_to_json(True) is True


def test_float_scalars_keep_precision():
    be = float_backend(256)
    third = be.scalar(1) / 3
    text = scalar_to_json(third)
    assert "3" * 70 in text
    assert abs(be.scalar(text) - third) < be.default_tolerance()


def test_decimal_rendering():
    assert scalar_to_decimal(F(1, 3), 5) == "0.33333"
    assert scalar_to_decimal(F(5, 2)) == "2.5"


def test_json_is_sorted_and_stable():
    payload = {"b": F(1, 2), "a": [Poly((1, F(-1, 64)))]}
    assert dumps(payload) == dumps(dict(reversed(list(payload.items()))))
    assert json.loads(dumps(payload)) == {"a": [["1", "-1/64"]], "b": "1/2"}


def test_tables():
    rows = [{"x": 0, "value": F(1, 3)}, {"x": 1, "value": None}]
    assert rows_to_csv(rows, 4) == "x,value\n0,0.3333\n1,\n"
    text = rows_to_text(rows)
    assert text.splitlines()[0].split() == ["x", "value"]
    assert rows_to_csv([]) == "" and rows_to_text([]) == ""
