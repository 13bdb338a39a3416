import json

import pytest
from hypothesis import given, settings

from paraprod.algebra import UPoly, WPoly
from paraprod.expr import (
    Delta,
    Letter,
    ParseError,
    Power,
    Product,
    ScalarMul,
    Sum,
    format_expr,
    letter_count,
    parse,
    scalar_normalize,
)

from conftest import asts

S, T, M = Letter("S", 1), Letter("T", 1), Letter("M", 1)


def test_parse_examples():
    assert parse("S*T - T^2") == Sum((Product((S, T)), ScalarMul(WPoly.constant(-1), Power(T, 2))))
    assert parse("T(g^3)") == Letter("T", 3)
    assert parse("d0{-w*u}") == Delta(UPoly({(1, 1): -1}))


def test_bare_delta_is_unit_payload():
    assert parse("d0") == Delta(UPoly.constant(1))


def test_format_examples():
    assert format_expr(T) == "T"
    assert format_expr(Product((S, T))) == "S*T"
    assert format_expr(Delta(UPoly.w())) == "d0{w}"


def test_latex_and_json_styles():
    e = parse("S*T - 1/2*T(g^2)^2 + d0{w*u}")
    tex = format_expr(e, "latex")
    assert "S_g" in tex and "T_{g^{2}}" in tex and "\\delta_0" in tex
    data = json.loads(format_expr(e, "json"))
    assert len(data["sum"]) == 3
    assert data["sum"][1]["scale"] == "-1/2"
    assert data["sum"][2] == {"delta": "w*u"}


def test_scalars_and_w():
    e = parse("(3/2 - 1/3*i)*w^2*S")
    assert isinstance(e, ScalarMul)
    assert e.coef.degree() == 2


def test_letter_count():
    assert letter_count(parse("S*T^3")) == 4
    assert letter_count(parse("T + S*S")) == 2
    assert letter_count(parse("d0{u}*T")) == 2


@settings(max_examples=500, deadline=None)
@given(asts)
def test_round_trip(e):
    text = format_expr(e)
    assert scalar_normalize(parse(text)) == scalar_normalize(e)


@settings(max_examples=100, deadline=None)
@given(asts)
def test_latex_never_crashes(e):
    assert format_expr(e, "latex")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty"),
        ("T^0", "exponent 0"),
        ("S*", "expected"),
        ("T(g^0)", "power"),
        ("3/2", "no operator"),
        ("T + 1", "scalar"),
        ("S**T", "expected"),
        ("Q", "unknown symbol"),
        ("(S", "expected"),
        ("d0{S}", ""),
    ],
)
def test_rejections(text, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert fragment in str(info.value)
    assert 0 <= info.value.offset <= len(text)
