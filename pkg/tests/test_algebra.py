import numpy as np
import pytest
from hypothesis import given, strategies as st

from relalg.algebra import (
    AtomStructure, FiniteRelationAlgebra, bits_of, find_isomorphism, make_algebra, popcount,
    product,
)
from relalg.constructions import mackenzie
from relalg.errors import AlgebraMismatch, InvalidStructure, SizeLimit
from relalg.proper import abstract, full_re, full_sb
from relalg.relations import ConcreteRelation

from oracles import element_tables


def test_bits_helpers():
    assert list(bits_of(0)) == []
    assert list(bits_of(0b10110)) == [1, 2, 4]
    assert popcount(0b10110) == 3


def test_identity_three_way_composition_is_meet(sb_id3):
    # three identity atoms: composition of two elements is their meet
    A = sb_id3
    assert A.m == 3 and A.size == 8
    for x in range(A.size):
        for y in range(A.size):
            assert A.comp_bits(x, y) == x & y
    assert A.identity.bits == A.full


def test_mackenzie_table(mck):
    a, ac, b = mck.atom("a"), mck.atom("a~"), mck.atom("b")
    e = mck.identity
    assert b @ b == e + a + ac
    assert ~a == ac
    assert a @ ac == mck.one
    assert a @ a == a
    assert mck.is_integral() and mck.is_simple() and not mck.is_symmetric()


def test_element_operations(mck):
    a, b = mck.atom("a"), mck.atom("b")
    x = a + b
    assert x * a == a
    assert -x == mck.identity + mck.atom("a~")
    assert x ^ a == b
    assert a <= x and not x <= a
    assert mck.element("a+b") == x
    assert mck.element(["a", "b"]) == x
    assert str(mck.element(0)) == "0"


def test_elements_of_different_algebras_do_not_mix(mck, re2):
    with pytest.raises(AlgebraMismatch):
        mck.atom("a") + re2.atoms()[0]


def test_trivial_one_atom_algebra():
    s = AtomStructure(("1'",), 1, (0,), ((1,),))
    A = make_algebra(s)
    assert A.size == 2
    assert A.is_integral() and A.is_simple() and A.is_symmetric()


def test_malformed_structures_rejected():
    s = mackenzie()
    bad_conv = AtomStructure(s.atom_names, s.identity, (0, 1, 1, 3), s.comp)
    with pytest.raises(InvalidStructure) as info:
        make_algebra(bad_conv)
    assert info.value.invariant in ("well-formed", "involution")
    with pytest.raises(InvalidStructure) as info:
        make_algebra(s.with_entry(1, 2, 0b0010))
    assert info.value.invariant == "cycle"


def test_numpy_table_matches_element_oracle(mck):
    comp, conv = element_tables(mck.structure)
    assert np.array_equal(np.asarray(mck.table, dtype=np.int64), comp)
    assert [mck.conv_bits(x) for x in range(mck.size)] == list(conv)


def test_compose_vec_matches_scalar(mck):
    xs = np.arange(mck.size, dtype=np.uint32)
    grid = mck.compose_vec(xs[:, None], xs[None, :])
    for x in range(mck.size):
        for y in range(mck.size):
            assert int(grid[x, y]) == mck.comp_bits(x, y)


def test_chunked_path_for_larger_algebras():
    # 13 atoms is above the size where a full table is built
    A = make_algebra(abstract(full_sb(ConcreteRelation.from_classes([2, 3]))))
    assert A.m == 13
    rng = np.random.default_rng(0)
    xs = rng.integers(0, A.size, 200, dtype=np.uint32)
    ys = rng.integers(0, A.size, 200, dtype=np.uint32)
    vec = A.compose_vec(xs, ys)
    for x, y, z in zip(xs, ys, vec):
        acc = 0
        for a in bits_of(int(x)):
            for b in bits_of(int(y)):
                acc |= A.structure.comp[a][b]
        assert int(z) == acc


def test_product_and_factors(re2, mck):
    P = product(mck, re2)
    assert P.m == mck.m + re2.m
    assert not P.is_simple()
    assert len(P.factor_blocks()) == 2
    assert mck.factor_blocks() == [mck.full]


def test_product_size_limit():
    big = make_algebra(abstract(full_re(4)))  # 16 atoms
    with pytest.raises(SizeLimit):
        product(big, big)


def test_isomorphism_detects_relabeling(re2):
    s = re2.structure
    perm = [3, 2, 0, 1]
    inv = {p: i for i, p in enumerate(perm)}

    def remap(mask):
        return sum(1 << inv[a] for a in bits_of(mask))

    shuffled = AtomStructure(
        tuple(s.atom_names[p] for p in perm),
        remap(s.identity),
        tuple(inv[s.converse[p]] for p in perm),
        tuple(tuple(remap(s.comp[p][q]) for q in perm) for p in perm),
    )
    make_algebra(shuffled)
    assert find_isomorphism(s, shuffled) is not None
    assert find_isomorphism(s, mackenzie()) is None


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_mackenzie_element_laws(x, y, z):
    A = FiniteRelationAlgebra(mackenzie())
    X, Y, Z = A.element(x), A.element(y), A.element(z)
    assert X @ (Y + Z) == X @ Y + X @ Z
    assert ~(X @ Y) == ~Y @ ~X
    assert (X @ Y) @ Z == X @ (Y @ Z)
    if X <= Y:
        assert X @ Z <= Y @ Z
