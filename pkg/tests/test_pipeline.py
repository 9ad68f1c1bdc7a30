import pytest

from relalg.algebra import find_isomorphism, make_algebra
from relalg.errors import KernelNotMaximal, NotEquivalence, SizeLimit
from relalg.ideals import RelationalIdeal
from relalg.pipeline import block_ideal, represent_quotient, sigma_near_hom
from relalg.proper import abstract, full_re, full_sb
from relalg.relations import ConcreteRelation
from relalg.representation import representation_to_proper


@pytest.fixture(scope="module")
def e23():
    return ConcreteRelation.from_classes([2, 3])


def test_sigma_is_a_near_homomorphism(e23):
    sigma, report = sigma_near_hom(e23, block_ideal(e23, 0), samples=40, seed=1)
    assert report.ok, report.failures()
    assert sigma.k == 6
    ident = e23 & ConcreteRelation.identity(5)
    F = sigma(ident)
    assert F.is_equivalence()
    assert ConcreteRelation.identity(6) <= F


@pytest.mark.parametrize("block, expected", [(0, 3), (1, 2)])
def test_quotient_representation(e23, block, expected):
    # killing one class leaves the square on the other
    out = represent_quotient(e23, block_ideal(e23, block), samples=30, seed=2)
    assert out.ok, (out.report.failures(), out.sigma_report.failures())
    assert out.representation.n == expected
    P = representation_to_proper(out.quotient.algebra, out.representation)
    target = make_algebra(abstract(full_re(expected)))
    assert find_isomorphism(abstract(P), target.structure) is not None


def test_default_ideal_is_maximal(e23):
    out = represent_quotient(e23, samples=20)
    assert out.ok


def test_non_maximal_kernel_rejected(e23):
    A = make_algebra(abstract(full_sb(e23)))
    with pytest.raises(KernelNotMaximal):
        represent_quotient(e23, RelationalIdeal(A, 0))


def test_bad_inputs():
    with pytest.raises(NotEquivalence):
        represent_quotient(ConcreteRelation.from_pairs(2, [(0, 1)]))
    with pytest.raises(SizeLimit):
        represent_quotient(ConcreteRelation.from_classes([1, 1, 1, 1, 1, 1, 1]))


def test_single_class_is_its_own_quotient():
    E = ConcreteRelation.full(2)
    out = represent_quotient(E, samples=10)
    assert out.ok and out.representation.n == 2
