"""Workbench for finite relation algebras."""

__version__ = "0.1.0"

from .algebra import (
    AtomStructure, Element, FiniteRelationAlgebra, find_isomorphism, make_algebra, product,
)
from .axioms import check_ra_axioms, derived_laws, is_integral, is_simple, is_symmetric
from .constructions import (
    PrimeField, bruck_ryser_excluded, fused_subalgebra, lyndon, mackenzie,
    non_representable_indices, slope_representation,
)
from .equations import (
    check_birkhoff_closure, enumerate_ideal_quotients, enumerate_subalgebras, evaluate, holds, sg,
)
from .ideals import (
    RelationalIdeal, congruence_extension_check, extend_to_maximal, ideal_generate, quotient,
)
from .pipeline import represent_quotient, sigma_near_hom
from .proper import ProperAlgebra, abstract, check_points_lemma, decompose, full_re, full_sb, points
from .raformat import format_ra, parse_ra, read_ra, write_ra
from .relations import ConcreteRelation, parse_relation
from .representation import RepresentationMap, representation_to_proper, verify_representation
from .search import NotFoundWithinBounds, SearchConfig, find_square_representation
from .terms import Equation, Term, parse_equation, parse_term, to_text
