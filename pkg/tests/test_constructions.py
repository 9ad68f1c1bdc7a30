import warnings

import pytest

from relalg.algebra import make_algebra
from relalg.constructions import (
    PrimeField, bruck_ryser_excluded, fused_subalgebra, lyndon, mackenzie,
    non_representable_indices, slope_pairs, slope_representation,
)
from relalg.errors import BadParameters, NotPrime, QTooSmall
from relalg.representation import verify_representation


def sums_of_two_squares(n):
    return any((n - a * a) ** 0.5 == int((n - a * a) ** 0.5) for a in range(int(n ** 0.5) + 1))


def test_bruck_ryser_orders():
    assert [n for n in range(2, 31) if bruck_ryser_excluded(n)] == [6, 14, 21, 22, 30]
    for n in range(2, 200):
        expected = n % 4 in (1, 2) and not sums_of_two_squares(n)
        assert bruck_ryser_excluded(n) == expected
    assert non_representable_indices(25) == [7, 15, 22, 23]


def test_mackenzie_shape():
    s = mackenzie()
    assert s.atom_names == ("1'", "a", "a~", "b")
    A = make_algebra(s)
    assert A.format(A.comp_bits(s.mask(["b"]), s.mask(["b"]))) == "1'+a+a~"


def test_lyndon_composition_rule():
    s = lyndon(5)
    A = make_algebra(s)
    a = [s.mask([f"a{i}"]) for i in range(1, 6)]
    e = s.identity
    assert A.comp_bits(a[0], a[0]) == e | a[0]
    assert A.comp_bits(a[0], a[1]) == A.full & ~(e | a[0] | a[1])


def test_lyndon_parameters():
    with pytest.raises(BadParameters):
        lyndon(1)
    with pytest.raises(BadParameters):
        lyndon(13)
    with pytest.warns(UserWarning):
        lyndon(2, (1, 3))


@pytest.mark.parametrize("gamma", [(1,), (1, 2), (1, 2, 3), (2, 3), (3,), (1, 3)])
def test_other_gammas_build(gamma):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = lyndon(5, gamma)
    assert s.m == 6


def test_prime_field():
    F = PrimeField(5)
    assert F.add(3, 4) == 2 and F.mul(3, 4) == 2
    assert len(F.points()) == 25
    with pytest.raises(NotPrime):
        PrimeField(9)


def test_slope_pairs_partition_diversity():
    q = 5
    groups = slope_pairs(PrimeField(q))
    assert len(groups) == q + 1
    seen = set()
    for pairs in groups.values():
        assert len(pairs) == q * q * (q - 1)
        assert not seen & set(pairs)
        seen |= set(pairs)
    assert len(seen) == q ** 4 - q * q


@pytest.mark.parametrize("q", [3, 5])
def test_slope_representation_verifies(q):
    rep = slope_representation(q)
    assert rep.n == q * q
    report = verify_representation(rep.algebra, rep)
    assert report.ok, report.first_violation()


def test_slope_representation_rejects_small_or_composite():
    with pytest.raises(QTooSmall):
        slope_representation(2)
    with pytest.raises(NotPrime):
        slope_representation(4)


def test_fusion_five_into_eight():
    f = fused_subalgebra(5, 8)
    assert f.report.ok, f.report.failures()
    assert f.structure.atom_names[1] == "a1_2"
    assert f.report.info["fused_target"] == "a1+a2+a3+a4+a5"
    # images partition the unit of the larger algebra
    total = 0
    for mask in f.embedding:
        assert total & mask == 0
        total |= mask
    assert total == (1 << 9) - 1


def test_fusion_parameters():
    with pytest.raises(BadParameters):
        fused_subalgebra(4, 8)
    with pytest.raises(BadParameters):
        fused_subalgebra(5, 5)
    with pytest.raises(BadParameters):
        fused_subalgebra(5, 8, pair=(1, 1))
