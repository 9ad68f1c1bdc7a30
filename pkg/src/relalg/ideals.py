"""Relational ideals, quotients, and the congruence extension property.

In a finite relation algebra every relational ideal is principal: it is the
down-set of its largest member ``t``, and ``t`` is an ideal element
(``1;t;1 = t``).  Ideals are stored by that top element.  The quotient by
``down(t)`` is the relativization to ``-t``: its atoms are the atoms outside
``t`` and the quotient map is ``x -> x . -t``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from .algebra import AtomStructure, Element, FiniteRelationAlgebra, bits_of, make_algebra
from .errors import ImproperIdeal, SizeLimit
from .report import CheckReport


@dataclass(frozen=True)
class RelationalIdeal:
    algebra: FiniteRelationAlgebra
    top: int

    def __contains__(self, x) -> bool:
        bits = x.bits if isinstance(x, Element) else x
        return bits & ~self.top == 0

    @property
    def proper(self) -> bool:
        return self.top != self.algebra.full

    @property
    def size(self) -> int:
        return 1 << bin(self.top).count("1")

    def members(self) -> list:
        """All members as bit masks in increasing order."""
        t, out, sub = self.top, [], 0
        while True:
            out.append(sub)
            if sub == t:
                return out
            sub = (sub - t) & t

    def __str__(self):
        return f"down({self.algebra.format(self.top, top=True)})"


def _mask(A, x) -> int:
    if isinstance(x, Element):
        return A._bits(x)
    if isinstance(x, str):
        return A.structure.parse_element(x)
    return int(x)


def ideal_generate(A: FiniteRelationAlgebra, seeds: Iterable = ()) -> RelationalIdeal:
    """Least relational ideal containing ``seeds``.

    Fixpoint of joins and ``x -> 1;x;1``; the result is closed under
    ``x -> 1;x``, ``x;1`` and converse because it is the down-set of an
    ideal element.
    """
    t = 0
    for s in seeds:
        t |= _mask(A, s)
    while True:
        nxt = t | A.closure_bits(t) | A.conv_bits(t)
        if nxt == t:
            return RelationalIdeal(A, t)
        t = nxt


def is_relational_ideal(A: FiniteRelationAlgebra, members: set) -> bool:
    """Direct check of a set of masks against the ideal conditions."""
    if 0 not in members:
        return False
    full = A.full
    for x in members:
        sub = x
        while True:
            if sub not in members:
                return False
            if sub == 0:
                break
            sub = (sub - 1) & x
        if (A.comp_bits(full, x) not in members or A.comp_bits(x, full) not in members
                or A.conv_bits(x) not in members):
            return False
        for y in members:
            if x | y not in members:
                return False
    return True


def extend_to_maximal(A: FiniteRelationAlgebra, ideal: RelationalIdeal) -> RelationalIdeal:
    """A maximal proper ideal containing ``ideal``.

    Adds atoms in declaration order whenever the generated ideal stays
    proper.  A skipped atom stays excluded, since the ideal only grows.
    """
    if not ideal.proper:
        raise ImproperIdeal("ideal contains 1 and has no proper extension")
    t = ideal.top
    for a in range(A.m):
        if (t >> a) & 1:
            continue
        cand = ideal_generate(A, [t | (1 << a)]).top
        if cand != A.full:
            t = cand
    return RelationalIdeal(A, t)


def is_maximal(ideal: RelationalIdeal) -> bool:
    A = ideal.algebra
    if not ideal.proper:
        return False
    return all(
        ideal_generate(A, [ideal.top | (1 << a)]).top == A.full
        for a in range(A.m) if not (ideal.top >> a) & 1
    )


def enumerate_ideals(A: FiniteRelationAlgebra) -> list:
    """Every relational ideal: down-sets of joins of the minimal ideal
    elements, ordered by number of blocks then block order."""
    blocks = A.factor_blocks()
    if len(blocks) > 16:
        raise SizeLimit("too many ideal blocks to enumerate")
    out = []
    for k in range(len(blocks) + 1):
        for combo in combinations(blocks, k):
            t = 0
            for b in combo:
                t |= b
            out.append(RelationalIdeal(A, t))
    return out


@dataclass
class Quotient:
    algebra: FiniteRelationAlgebra
    kernel: RelationalIdeal
    kept_atoms: list
    project: Callable  # mask in the source algebra -> mask in the quotient
    report: CheckReport

    def __call__(self, x):
        if isinstance(x, Element):
            return Element(self.project(x.bits), self.algebra)
        return self.project(x)


def quotient_structure(A: FiniteRelationAlgebra, ideal: RelationalIdeal) -> AtomStructure:
    kept = [a for a in range(A.m) if not (ideal.top >> a) & 1]
    return A.structure.restrict(kept)


def quotient(A: FiniteRelationAlgebra, ideal: RelationalIdeal, samples: int = 300,
             seed: int = 0) -> Quotient:
    """``A / ideal`` with its quotient map, verified as a surjective
    homomorphism whose kernel is the ideal."""
    if not ideal.proper:
        raise ImproperIdeal("cannot take the quotient by an improper ideal")
    kept = [a for a in range(A.m) if not (ideal.top >> a) & 1]
    pos = {a: i for i, a in enumerate(kept)}
    B = make_algebra(A.structure.restrict(kept))

    def project(x: int) -> int:
        out = 0
        for a in bits_of(x & ~ideal.top):
            out |= 1 << pos[a]
        return out

    report = CheckReport("quotient", seed=seed)
    report.info["kernel_top"] = A.format(ideal.top, top=True)
    report.info["quotient_atoms"] = [A.names[a] for a in kept]
    rng = random.Random(seed)
    atoms = [1 << a for a in range(A.m)]
    elems = atoms + [rng.getrandbits(A.m) for _ in range(samples)]
    others = atoms + [rng.getrandbits(A.m) for _ in range(samples)]
    hom = report.check("h is a homomorphism")
    for x in elems:
        hx = project(x)
        hom.record(project(A.conv_bits(x)) == B.conv_bits(hx), A.format(x), "converse")
        hom.record(project(A.full & ~x) == B.full & ~hx, A.format(x), "complement")
        for y in others[: len(atoms)] if x in atoms else others[:8]:
            hom.record(project(A.comp_bits(x, y)) == B.comp_bits(hx, project(y)),
                       A.format(x), A.format(y))
            hom.record(project(x | y) == hx | project(y), A.format(x), A.format(y))
    hom.record(project(A.structure.identity) == B.structure.identity, "1'")
    surj = report.check("h is surjective")
    surj.record(all(project(1 << a) == 1 << pos[a] for a in kept))
    ker = report.check("kernel equals the ideal")
    for x in elems:
        ker.record((project(x) == 0) == (x in ideal), A.format(x))
    cong = report.check("x ~ y iff x symdiff y in the ideal")
    for x, y in zip(elems, others):
        cong.record((project(x) == project(y)) == ((x ^ y) in ideal), A.format(x), A.format(y))
    return Quotient(B, ideal, kept, project, report)


def congruence_extension_check(big: FiniteRelationAlgebra, sub_elements: Iterable[int],
                               ideal_elements: Iterable[int]) -> CheckReport:
    """Extend an ideal of a subalgebra to the down-set it generates in
    ``big`` and verify that it is an ideal there meeting the subalgebra in
    exactly the original ideal."""
    sub = set(sub_elements)
    I = set(ideal_elements)
    report = CheckReport("congruence extension")
    pre = report.check("I is a relational ideal of the subalgebra")
    closed_sub = all((x | y) in sub and big.comp_bits(x, y) in sub for x in sub for y in sub)
    pre.record(closed_sub, "subalgebra not closed")
    full = big.full
    ok_I = 0 in I and all(
        (x | y) in I and big.comp_bits(full, x) in I and big.comp_bits(x, full) in I
        and big.conv_bits(x) in I and all(z in I for z in sub if z & ~x == 0)
        for x in I for y in I
    )
    pre.record(ok_I, "I is not an ideal of the subalgebra")
    pre.record(full not in I, "I is improper")
    top = 0
    for x in I:
        top |= x
    J = RelationalIdeal(big, top)
    report.info["extension_top"] = big.format(top, top=True)
    report.check("J is a relational ideal of the whole algebra").record(
        big.closure_bits(top) == top and big.conv_bits(top) == top, big.format(top))
    report.check("J meets the subalgebra in I").record(
        {x for x in sub if x in J} == I)
    return report
