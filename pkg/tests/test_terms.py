import pytest
from hypothesis import given, strategies as st

from relalg.errors import ParseError
from relalg.terms import (
    Comp, Compl, Conv, Equation, Ident, Join, Meet, One, Var, Zero, parse_equation, parse_term,
    to_text,
)

x, y, z = Var("x"), Var("y"), Var("z")


@pytest.mark.parametrize("text, term", [
    ("x", x),
    ("x + y . z", Join(x, Meet(y, z))),
    ("x;y + z", Join(Comp(x, y), z)),
    ("-x;y", Comp(Compl(x), y)),
    ("x~~", Conv(Conv(x))),
    ("-x~", Compl(Conv(x))),
    ("(x + y);z", Comp(Join(x, y), z)),
    ("x;y;z", Comp(Comp(x, y), z)),
    ("1' + 0 . 1", Join(Ident(), Meet(Zero(), One()))),
    ("  x  ;  1'  ", Comp(x, Ident())),
])
def test_precedence_and_associativity(text, term):
    assert parse_term(text) == term


def test_equation_variables_in_first_occurrence_order():
    eq = parse_equation("y;x = x + z")
    assert eq.variables == ["y", "x", "z"]
    assert str(eq) == "y;x = x + z"


@pytest.mark.parametrize("text, pos", [
    ("x +", 3), ("x ; * y", 4), ("(x", 2), ("x y", 2), ("", 0), ("x $ y", 2),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_term(text)
    assert info.value.position == pos


def test_equation_errors():
    with pytest.raises(ParseError):
        parse_equation("x + y")
    with pytest.raises(ParseError):
        parse_equation("x = y = z")


def test_depth_limit():
    parse_term("-" * 30 + "x")
    with pytest.raises(ParseError):
        parse_term("-" * 40 + "x")
    with pytest.raises(ParseError):
        parse_term("(" * 40 + "x" + ")" * 40)


leaves = st.sampled_from([x, y, z, Zero(), One(), Ident()])
terms = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Join, sub, sub), st.builds(Meet, sub, sub), st.builds(Comp, sub, sub),
        st.builds(Compl, sub), st.builds(Conv, sub),
    ),
    max_leaves=12,
)


@given(terms)
def test_print_parse_roundtrip(t):
    assert parse_term(to_text(t)) == t


@given(terms, terms)
def test_equation_roundtrip(a, b):
    eq = Equation(a, b)
    assert parse_equation(str(eq)) == eq


def test_minimal_parentheses():
    assert to_text(Comp(Join(x, y), z)) == "(x + y);z"
    assert to_text(Join(Join(x, y), z)) == "x + y + z"
    assert to_text(Join(x, Join(y, z))) == "x + (y + z)"
    assert to_text(Conv(Comp(x, y))) == "(x;y)~"
    assert to_text(Compl(Conv(x))) == "-x~"
    assert to_text(Conv(Compl(x))) == "(-x)~"
