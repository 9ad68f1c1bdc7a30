"""Representing quotients of ``Sb(E)`` through the points of ``E``.

Given a maximal relational ideal ``J`` of the algebra of all subrelations
of ``E``, the map

    sigma(R) = {(p, q) in Pt_E x Pt_E : E|p|R|q|E is congruent to E mod J}

is a near-homomorphism into the square algebra on ``Pt_E``: it preserves
everything except that ``sigma(Id_E)`` may be a proper equivalence
containing the identity.  Collapsing ``Pt_E`` by ``sigma(Id_E)`` turns it
into an embedding of ``Sb(E)/J`` into a square algebra.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import FiniteRelationAlgebra, bits_of, make_algebra
from .errors import ImproperIdeal, KernelNotMaximal, SizeLimit
from .ideals import Quotient, RelationalIdeal, extend_to_maximal, ideal_generate, quotient
from .proper import ProperAlgebra, abstract, full_sb, points
from .relations import ConcreteRelation, require_equivalence
from .report import CheckReport
from .representation import (
    RepresentationMap, RepresentationReport, from_relations, verify_representation,
)

MAX_PIPELINE_BASE = 6


class Sigma:
    """``sigma`` for a fixed ``E`` and ideal ``J`` of ``Sb(E)``."""

    def __init__(self, P: ProperAlgebra, ideal: RelationalIdeal):
        self.P = P
        self.E = P.unit
        self.ideal = ideal
        self.points = points(self.E)
        self.k = len(self.points)
        self._left = [self.E.compose(p) for p in self.points]
        self._right = [q.compose(self.E) for q in self.points]
        self._cache = {}

    def in_ideal(self, R: ConcreteRelation) -> bool:
        return self.P.element_of(R) in self.ideal

    def __call__(self, R: ConcreteRelation) -> ConcreteRelation:
        key = R.rows
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        E = self.E
        pairs = []
        for i, left in enumerate(self._left):
            lr = left.compose(R)
            for j, right in enumerate(self._right):
                if self.in_ideal(E - lr.compose(right)):
                    pairs.append((i, j))
        out = ConcreteRelation.from_pairs(self.k, pairs)
        self._cache[key] = out
        return out


def _require_maximal(A: FiniteRelationAlgebra, ideal: RelationalIdeal) -> Quotient:
    if not ideal.proper:
        raise ImproperIdeal("the ideal contains E")
    Q = quotient(A, ideal)
    if not Q.algebra.is_simple():
        raise KernelNotMaximal(f"quotient by {ideal} is not simple")
    return Q


def _setup(E: ConcreteRelation, ideal: RelationalIdeal | None):
    require_equivalence(E)
    if E.n > MAX_PIPELINE_BASE:
        raise SizeLimit(f"the pipeline supports bases of at most {MAX_PIPELINE_BASE} points")
    P = full_sb(E)
    if ideal is None:
        A = make_algebra(abstract(P))
        ideal = extend_to_maximal(A, RelationalIdeal(A, 0))
    A = ideal.algebra
    if A.names != P.names:
        raise ValueError("the ideal must live on the algebra of all subrelations of E")
    return P, A, ideal


def sigma_near_hom(E: ConcreteRelation, ideal: RelationalIdeal | None = None,
                   samples: int = 100, seed: int = 0):
    """Compute sigma and check the nine near-homomorphism properties.

    Checked exhaustively over carrier atoms (single pairs of ``E``) and
    their pairs, then over ``samples`` random unions.
    Returns ``(sigma, report)``.
    """
    P, A, ideal = _setup(E, ideal)
    _require_maximal(A, ideal)
    sigma = Sigma(P, ideal)
    k = sigma.k
    full_pt = ConcreteRelation.full(k)
    empty_e = ConcreteRelation.empty(E.n)
    report = CheckReport("near-homomorphism", seed=seed)
    report.info.update(points=k, ideal_top=A.format(ideal.top, top=True))

    atoms = list(P.atoms)
    rng = random.Random(seed)
    pairs = E.pairs()
    randoms = [ConcreteRelation.from_pairs(E.n, [p for p in pairs if rng.random() < 0.5])
               for _ in range(samples)]
    singles = atoms + randoms

    c1 = report.check("i: sigma(0) = 0")
    c2 = report.check("ii: sigma(E) = Pt x Pt")
    c3 = report.check("iii: monotone")
    c4 = report.check("iv: preserves unions")
    c5 = report.check("v: sigma(E-R) and sigma(R) are disjoint")
    c6 = report.check("vi: sigma(E-R) and sigma(R) cover Pt x Pt")
    c7 = report.check("vii: preserves composition")
    c8 = report.check("viii: preserves converse")
    c9 = report.check("ix: sigma(Id_E) contains the identity on Pt")
    c1.record(not sigma(empty_e))
    c2.record(sigma(E) == full_pt)
    ident_e = E & ConcreteRelation.identity(E.n)
    c9.record(ConcreteRelation.identity(k) <= sigma(ident_e))
    for R in singles:
        sR, sC = sigma(R), sigma(E - R)
        c5.record(not (sR & sC), R)
        c6.record((sR | sC) == full_pt, R)
        c8.record(sigma(R.converse()) == sR.converse(), R)
    rel_pairs = [(R, S) for R in atoms for S in atoms]
    rel_pairs += [(randoms[t], randoms[(3 * t + 1) % len(randoms)]) for t in range(len(randoms))]
    for R, S in rel_pairs:
        sR, sS = sigma(R), sigma(S)
        c4.record(sigma(R | S) == (sR | sS), R, S)
        c7.record(sigma(R.compose(S)) == sR.compose(sS), R, S)
        c3.record(sR <= sigma(R | S), R, S)
    return sigma, report


@dataclass
class QuotientRepresentation:
    quotient: Quotient
    ideal: RelationalIdeal
    representation: RepresentationMap
    point_classes: list
    sigma_report: CheckReport
    report: CheckReport
    verification: RepresentationReport

    @property
    def ok(self) -> bool:
        return self.sigma_report.ok and self.report.ok and self.verification.ok


def represent_quotient(E: ConcreteRelation, ideal: RelationalIdeal | None = None,
                       samples: int = 100, seed: int = 0) -> QuotientRepresentation:
    """Embed ``Sb(E)/J`` into the square algebra on ``Pt_E / sigma(Id_E)``.

    With ``ideal=None`` the maximal ideal is chosen by greedy extension of
    ``{0}``.
    """
    P, A, ideal = _setup(E, ideal)
    Q = _require_maximal(A, ideal)
    sigma, sreport = sigma_near_hom(E, ideal, samples=samples, seed=seed)
    report = CheckReport("quotient representation", seed=seed)

    ident_e = E & ConcreteRelation.identity(E.n)
    F = sigma(ident_e)
    report.check("sigma(Id_E) is an equivalence relation").record(F.is_equivalence())
    classes = F.classes()
    cls_of = {}
    for c, members in enumerate(classes):
        for p in members:
            cls_of[p] = c
    base = len(classes)
    report.info.update(points=sigma.k, base=base, ideal_top=A.format(ideal.top, top=True))

    B = Q.algebra
    images = {}
    for t, src in enumerate(Q.kept_atoms):
        rel = sigma(P.atoms[src])
        images[t] = sorted({(cls_of[i], cls_of[j]) for i, j in rel.pairs()})

    def h(mask):
        out = set()
        for t in bits_of(mask):
            out.update(images[t])
        return ConcreteRelation.from_pairs(base, sorted(out))

    full_b = ConcreteRelation.full(base)
    hom = report.check("collapsed map is a homomorphism on atoms")
    hom.record(h(B.structure.identity) == ConcreteRelation.identity(base), "1'")
    for x in range(B.m):
        hx = h(1 << x)
        hom.record(h(B.full & ~(1 << x)) == full_b - hx, B.names[x], "complement")
        hom.record(h(B.conv_bits(1 << x)) == hx.converse(), B.names[x], "converse")
        for y in range(B.m):
            hom.record(h(B.comp_bits(1 << x, 1 << y)) == hx.compose(h(1 << y)),
                         B.names[x], B.names[y])
            hom.record(h((1 << x) | (1 << y)) == hx | h(1 << y), B.names[x], B.names[y])
    inj = report.check("collapsed map is injective")
    inj.record(all(images[t] for t in images), "empty image")
    inj.record(all(not set(images[s]) & set(images[t]) for s in images for t in images if s < t),
               "overlapping images")

    rep = from_relations(B, base, images)
    verification = verify_representation(B, rep)
    report.check("certificate verifies").record(verification.ok, verification.first_violation())
    return QuotientRepresentation(Q, ideal, rep, classes, sreport, report, verification)


def block_ideal(E: ConcreteRelation, block: int = 0) -> RelationalIdeal:
    """The ideal generated by the square of one class of ``E``, extended to
    a maximal ideal."""
    require_equivalence(E)
    P = full_sb(E)
    A = make_algebra(abstract(P))
    cls = E.classes()[block]
    square = ConcreteRelation.from_pairs(E.n, [(i, j) for i in cls for j in cls])
    return extend_to_maximal(A, ideal_generate(A, [P.element_of(square)]))
