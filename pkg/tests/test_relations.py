import pytest
from hypothesis import given, strategies as st

from relalg.errors import BaseMismatch, FormatError, NotEquivalence
from relalg.relations import (
    ConcreteRelation, format_relation, parse_classes, parse_relation, require_equivalence,
)

N = 4


@st.composite
def relations(draw, n=N):
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    return ConcreteRelation.from_pairs(n, pairs)


def as_set(R):
    return set(R.pairs())


def compose_sets(R, S):
    return {(i, k) for i, j in R for j2, k in S if j == j2}


@given(relations(), relations())
def test_compose_matches_set_definition(R, S):
    assert as_set(R.compose(S)) == compose_sets(as_set(R), as_set(S))
    assert as_set(R @ S) == as_set(R.compose(S))


@given(relations())
def test_converse_matches_set_definition(R):
    assert as_set(R.converse()) == {(j, i) for i, j in as_set(R)}
    assert R.converse().converse() == R


@given(relations(), relations(), relations())
def test_relation_algebra_laws(R, S, T):
    assert R.compose(S.compose(T)) == R.compose(S).compose(T)
    assert R.compose(S | T) == R.compose(S) | R.compose(T)
    assert R.compose(S).converse() == S.converse().compose(R.converse())
    assert R.compose(ConcreteRelation.identity(N)) == R
    assert (R & S) <= R and R <= (R | S)
    assert as_set(R - S) == as_set(R) - as_set(S)


def test_boolean_ops_and_sizes():
    R = ConcreteRelation.from_pairs(3, [(0, 1), (1, 2)])
    assert len(R) == 2 and (0, 1) in R and (1, 0) not in R
    assert not ConcreteRelation.empty(3)
    assert len(ConcreteRelation.full(3)) == 9
    assert R.complement_in(ConcreteRelation.full(3)) == ConcreteRelation.full(3) - R


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        ConcreteRelation.full(2) | ConcreteRelation.full(3)


def test_bounds():
    with pytest.raises(ValueError):
        ConcreteRelation.empty(17)
    with pytest.raises(ValueError):
        ConcreteRelation.from_pairs(2, [(0, 2)])


def test_equivalences_and_classes():
    E = ConcreteRelation.from_classes([2, 1, 3])
    assert E.is_equivalence()
    assert E.classes() == [[0, 1], [2], [3, 4, 5]]
    require_equivalence(E)
    partial = ConcreteRelation.from_pairs(3, [(0, 0), (0, 2), (2, 0), (2, 2)])
    assert partial.is_equivalence()   # reflexive on its field only
    assert partial.classes() == [[0, 2]]
    with pytest.raises(NotEquivalence):
        require_equivalence(ConcreteRelation.from_pairs(2, [(0, 1)]))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_from_classes_is_equivalence(sizes):
    E = ConcreteRelation.from_classes(sizes)
    assert E.is_equivalence()
    assert [len(c) for c in E.classes()] == sizes


@given(relations())
def test_literal_roundtrip(R):
    assert parse_relation(format_relation(R)) == R


def test_literals():
    assert parse_relation("classes=[2,3]") == ConcreteRelation.from_classes([2, 3])
    assert parse_relation("n=2; pairs=(0,1) (1,0)").pairs() == [(0, 1), (1, 0)]
    assert parse_classes("[2, 2, 3]") == [2, 2, 3]
    for bad in ("n=2; pairs=(0,5)", "pairs=(0,1)", "classes=[]"):
        with pytest.raises(FormatError):
            parse_relation(bad)
    with pytest.raises(FormatError):
        parse_classes("2,x")
