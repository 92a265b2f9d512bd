"""Presentation file format: parsing, error positions, round trips."""

import pytest

from coniveau.parser import ParseError, parse_expression, parse_presentation, render_presentation

SAMPLE = """\
# rank-2 exterior quotient
prime 3
cap 10
gen x1 1 odd
gen x2 1 odd
gen x3 1 odd
gen x4 1 odd
rel x1*x2 + x3*x4
Q 0 x1 = 0
alias top = x1*x3
"""


def test_parse_basic():
    data = parse_presentation(SAMPLE)
    pres = data.presentation
    assert pres.prime == 3 and pres.degree_cap == 10
    assert [g.name for g in pres.generators] == ["x1", "x2", "x3", "x4"]
    assert len(pres.relations) == 1
    assert (pres.gen("x1") * pres.gen("x2") + pres.gen("x3") * pres.gen("x4")).is_zero()
    assert data.aliases["top"] == pres.gen("x1") * pres.gen("x3")
    assert data.q_table[(0, "x1")].is_zero()


def test_weights_and_parity():
    data = parse_presentation("prime 2\ncap 8\ngen t 1 weight 1\ngen u 2 even weight -1\n")
    g = data.presentation.generators
    assert g[0].weight == 1 and g[1].weight == -1


def test_expression_parsing():
    data = parse_presentation("prime 5\ncap 12\ngen y 2\ngen z 2\n")
    pres = data.presentation
    names = {"y": pres.gen("y"), "z": pres.gen("z")}
    e = parse_expression(pres, names, "(y + 2*z)^2 - y^2")
    y, z = pres.gen("y"), pres.gen("z")
    assert e == 4 * y * z + 4 * z * z


def test_error_positions():
    with pytest.raises(ParseError) as exc:
        parse_presentation("prime 3\ncap 8\ngen x 1\nrel x $ x\n")
    assert exc.value.line == 4
    assert exc.value.column > 0

    with pytest.raises(ParseError) as exc:
        parse_presentation("prime 3\ncap 8\ngen x 1\nrel x + nope\n")
    assert "nope" in str(exc.value) and exc.value.line == 4


def test_statement_order_enforced():
    with pytest.raises(ParseError):
        parse_presentation("gen x 1\nprime 3\ncap 8\n")
    with pytest.raises(ParseError):
        parse_presentation("prime 3\ncap 8\nbogus x\n")


def test_relation_must_be_homogeneous():
    text = "prime 3\ncap 8\ngen y 2\ngen x 1\nrel y + x\n"
    with pytest.raises(ParseError):
        parse_presentation(text)


def test_q_line_shape():
    text = "prime 3\ncap 12\ngen y 2\ngen x 1\nQ 0 x = y\nQ 1 x = y^3\n"
    data = parse_presentation(text)
    assert data.max_q_index == 1
    assert data.q_table[(1, "x")] == data.presentation.gen("y") ** 3
    with pytest.raises(ParseError):
        parse_presentation("prime 3\ncap 8\ngen x 1\nQ x = x\n")


def test_render_parse_round_trip():
    data = parse_presentation(SAMPLE)
    text = render_presentation(
        data.presentation, q_table=data.q_table, aliases=data.aliases
    )
    again = parse_presentation(text)
    assert render_presentation(
        again.presentation, q_table=again.q_table, aliases=again.aliases
    ) == text


def test_unknown_name_error():
    data = parse_presentation("prime 2\ncap 6\ngen x 1\n")
    with pytest.raises(ParseError):
        parse_expression(data.presentation, {"x": data.presentation.gen("x")}, "x * w")
