"""Algebras of actual binary relations, their abstraction to atom tables,
the decomposition into squares, and the points of an equivalence relation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable

from .algebra import AtomStructure
from .errors import InvalidStructure, NotClosed, SizeLimit
from .relations import ConcreteRelation, require_equivalence
from .report import CheckReport

MAX_SB_PAIRS = 24


@dataclass(frozen=True)
class ProperAlgebra:
    """An atomic algebra of relations with unit ``unit``.

    ``atoms`` partition the unit; the identity ``Id`` restricted to the unit
    must be a union of atoms.  Closure under composition and converse is
    checked by :func:`abstract`.
    """

    unit: ConcreteRelation
    atoms: tuple
    names: tuple

    def __post_init__(self):
        require_equivalence(self.unit)
        if len(self.names) != len(self.atoms) or len(set(self.names)) != len(self.names):
            raise InvalidStructure("partition", "need one distinct name per carrier atom")
        n = self.unit.n
        seen = ConcreteRelation.empty(n)
        for i, R in enumerate(self.atoms):
            if R.n != n or not R:
                raise InvalidStructure("partition", "carrier atoms must be nonempty", (i,))
            if seen & R:
                raise InvalidStructure("partition", "carrier atoms overlap", (i,))
            seen = seen | R
        if seen != self.unit:
            raise InvalidStructure("partition", "carrier atoms do not cover the unit")
        ident = self.identity
        for i, R in enumerate(self.atoms):
            if R & ident and not R <= ident:
                raise InvalidStructure("partition", "identity splits a carrier atom", (i,))

    @property
    def n(self) -> int:
        return self.unit.n

    @property
    def identity(self) -> ConcreteRelation:
        return self.unit & ConcreteRelation.identity(self.unit.n)

    def relation(self, mask: int) -> ConcreteRelation:
        """The relation denoted by a bit mask over the carrier atoms."""
        out = ConcreteRelation.empty(self.n)
        for i, R in enumerate(self.atoms):
            if (mask >> i) & 1:
                out = out | R
        return out

    def element_of(self, R: ConcreteRelation) -> int:
        """Bit mask of ``R``; raises ``ValueError`` if ``R`` is not a union
        of carrier atoms."""
        mask, cover = 0, ConcreteRelation.empty(self.n)
        for i, A in enumerate(self.atoms):
            if A & R:
                mask |= 1 << i
                cover = cover | A
        if cover != R:
            raise ValueError("relation is not a union of carrier atoms")
        return mask


def full_sb(E: ConcreteRelation) -> ProperAlgebra:
    """All subrelations of ``E``; carrier atoms are its singleton pairs."""
    require_equivalence(E)
    pairs = E.pairs()
    if len(pairs) > MAX_SB_PAIRS:
        raise SizeLimit(f"|E| = {len(pairs)} pairs exceeds the limit of {MAX_SB_PAIRS}")
    atoms = tuple(ConcreteRelation.from_pairs(E.n, [p]) for p in pairs)
    names = tuple(f"p{i}_{j}" for i, j in pairs)
    return ProperAlgebra(E, atoms, names)


def full_re(n: int) -> ProperAlgebra:
    """The square algebra of all relations on ``n`` points."""
    return full_sb(ConcreteRelation.full(n))


def abstract(P: ProperAlgebra) -> AtomStructure:
    """Read the atom table off a proper algebra."""
    comp_rows = []
    for i, R in enumerate(P.atoms):
        row = []
        for j, S in enumerate(P.atoms):
            try:
                row.append(P.element_of(R.compose(S)))
            except ValueError:
                raise NotClosed(
                    f"{P.names[i]}|{P.names[j]} is not a union of carrier atoms",
                    (P.names[i], P.names[j]),
                ) from None
        comp_rows.append(tuple(row))
    conv = []
    for i, R in enumerate(P.atoms):
        try:
            mask = P.element_of(R.converse())
        except ValueError:
            raise NotClosed(f"converse of {P.names[i]} is not a union of carrier atoms",
                            (P.names[i],)) from None
        if mask & (mask - 1):
            raise NotClosed(f"converse of {P.names[i]} is not an atom", (P.names[i],))
        conv.append(mask.bit_length() - 1)
    return AtomStructure(P.names, P.element_of(P.identity), tuple(conv), tuple(comp_rows))


# ---- decomposition into squares -------------------------------------------


def _localize(R: ConcreteRelation, cls: list) -> ConcreteRelation:
    pos = {u: k for k, u in enumerate(cls)}
    pairs = [(pos[i], pos[j]) for i, j in R.pairs() if i in pos and j in pos]
    return ConcreteRelation.from_pairs(len(cls), pairs)


def _globalize(parts, classes, n) -> ConcreteRelation:
    pairs = []
    for part, cls in zip(parts, classes):
        pairs.extend((cls[i], cls[j]) for i, j in part.pairs())
    return ConcreteRelation.from_pairs(n, pairs)


@dataclass
class Decomposition:
    """Sb(E) split into the product of the squares on its classes."""

    unit: ConcreteRelation
    classes: list
    forward: Callable
    backward: Callable
    report: CheckReport


def decompose(E: ConcreteRelation, samples: int = 500, seed: int = 0) -> Decomposition:
    """``R -> (R restricted to each class square)`` and its inverse.

    Both maps are verified to be mutually inverse homomorphisms on all
    carrier atoms (singleton pairs of ``E``) and ``samples`` random
    subrelations.
    """
    require_equivalence(E)
    classes = E.classes()
    n = E.n

    def forward(R):
        return tuple(_localize(R, cls) for cls in classes)

    def backward(parts):
        return _globalize(parts, classes, n)

    squares = [ConcreteRelation.full(len(c)) for c in classes]
    idents = [ConcreteRelation.identity(len(c)) for c in classes]
    report = CheckReport("decompose", seed=seed)
    report.info["classes"] = [len(c) for c in classes]
    pairs = E.pairs()
    atoms = [ConcreteRelation.from_pairs(n, [p]) for p in pairs]
    report.info["carrier_atoms"] = len(atoms)

    rng = random.Random(seed)
    randoms = [ConcreteRelation.from_pairs(n, [p for p in pairs if rng.random() < 0.5])
               for _ in range(samples)]

    inverse = report.check("backward(forward(R)) = R")
    inverse2 = report.check("forward(backward(t)) = t")
    hom_join = report.check("forward preserves union")
    hom_comp = report.check("forward preserves composition")
    hom_conv = report.check("forward preserves converse")
    hom_compl = report.check("forward preserves complement")
    hom_id = report.check("forward maps Id_E to the identities")
    atom_bij = report.check("carrier atoms correspond to product atoms")

    hom_id.record(forward(E & ConcreteRelation.identity(n)) == tuple(idents))
    image_atoms = set()
    for R in atoms:
        img = forward(R)
        nonzero = [k for k, part in enumerate(img) if part]
        atom_bij.record(len(nonzero) == 1 and len(img[nonzero[0]]) == 1, R)
        image_atoms.add(img)
    atom_bij.record(len(image_atoms) == sum(len(c) ** 2 for c in classes))

    def check_pair(R, S):
        fR, fS = forward(R), forward(S)
        hom_join.record(forward(R | S) == tuple(a | b for a, b in zip(fR, fS)), R, S)
        hom_comp.record(forward(R.compose(S)) == tuple(a.compose(b) for a, b in zip(fR, fS)), R, S)

    def check_one(R):
        fR = forward(R)
        inverse.record(backward(fR) == R, R)
        inverse2.record(forward(backward(fR)) == fR, R)
        hom_conv.record(forward(R.converse()) == tuple(a.converse() for a in fR), R)
        hom_compl.record(forward(E - R) == tuple(sq - a for sq, a in zip(squares, fR)), R)

    for R in atoms:
        check_one(R)
        for S in atoms:
            check_pair(R, S)
    for k, R in enumerate(randoms):
        check_one(R)
        check_pair(R, randoms[(k * 7 + 3) % len(randoms)])
    return Decomposition(E, classes, forward, backward, report)


# ---- points ---------------------------------------------------------------


def points(E: ConcreteRelation) -> list:
    """The points of ``E``: one diagonal pair per class, lexicographic in
    the per-class choices."""
    require_equivalence(E)
    return [
        ConcreteRelation.from_pairs(E.n, [(u, u) for u in choice])
        for choice in cartesian(*E.classes())
    ]


def is_point(E: ConcreteRelation, p: ConcreteRelation) -> bool:
    """The defining predicates ``p <= E``, ``E|p|E = E``, ``p|E|p <= Id_E``."""
    ident = E & ConcreteRelation.identity(E.n)
    return p <= E and E.compose(p).compose(E) == E and p.compose(E).compose(p) <= ident


def _eprq(E, p, R, q):
    return E.compose(p).compose(R).compose(q).compose(E)


def choose_points_for(E: ConcreteRelation, R: ConcreteRelation):
    """Points ``p, q`` with ``E|R|E = E|p|R|q|E`` (pick a pair of ``R`` per class)."""
    us, vs = [], []
    for cls in E.classes():
        members = set(cls)
        local = [(i, j) for i, j in R.pairs() if i in members and j in members]
        u, v = local[0] if local else (cls[0], cls[0])
        us.append(u)
        vs.append(v)
    n = E.n
    return (ConcreteRelation.from_pairs(n, [(u, u) for u in us]),
            ConcreteRelation.from_pairs(n, [(v, v) for v in vs]))


def choose_point_between(E: ConcreteRelation, R: ConcreteRelation, S: ConcreteRelation):
    """A point ``p`` with ``E|R|S|E = E|R|p|S|E`` (a middle point per class)."""
    RS = R.compose(S)
    chosen = []
    for cls in E.classes():
        members = set(cls)
        local = [(x, y) for x, y in RS.pairs() if x in members and y in members]
        u = cls[0]
        if local:
            x, y = local[0]
            u = next(w for w in cls if (x, w) in R and (w, y) in S)
        chosen.append(u)
    return ConcreteRelation.from_pairs(E.n, [(u, u) for u in chosen])


def check_points_lemma(E: ConcreteRelation, trials: int = 200, seed: int = 0) -> CheckReport:
    """Verify the structural properties of the points of ``E``.

    Checks the defining predicates of every point, the one-diagonal-pair
    characterization (exhaustively when ``|E| <= 12``), the three
    intersection/converse identities on random draws, and the two
    existence statements through their explicit choices.
    """
    require_equivalence(E)
    if E.n > 8:
        raise SizeLimit("check_points_lemma supports bases of at most 8 points")
    n = E.n
    ident = E & ConcreteRelation.identity(n)
    pts = points(E)
    report = CheckReport("points lemma", seed=seed)
    classes = E.classes()
    expected = 1
    for c in classes:
        expected *= len(c)
    report.info.update(classes=[len(c) for c in classes], points=len(pts))
    report.check("|Pt_E| = product of class sizes").record(len(pts) == expected, len(pts))

    defn = report.check("every point satisfies E|p|E = E and p|E|p <= Id_E")
    sym = report.check("p = p^-1 <= Id_E")
    for p in pts:
        defn.record(is_point(E, p), p)
        sym.record(p == p.converse() and p <= ident, p)

    pairs = E.pairs()
    if len(pairs) <= 12:
        char = report.check("points are exactly the one-diagonal-pair-per-class relations")
        found = []
        for mask in range(1 << len(pairs)):
            p = ConcreteRelation.from_pairs(n, [pairs[k] for k in range(len(pairs)) if (mask >> k) & 1])
            if is_point(E, p):
                found.append(p)
        char.record(sorted(f.rows for f in found) == sorted(p.rows for p in pts), len(found))

    rng = random.Random(seed)

    def rand_rel():
        return ConcreteRelation.from_pairs(n, [p for p in pairs if rng.random() < 0.5])

    ia = report.check("E|p|R|q|E & E|p|S|q|E = E|p|(R&S)|q|E")
    ib = report.check("E|R|p|E & E|p|S|E = E|R|p|S|E")
    ic = report.check("E|p|R|q|E = E|q|R^-1|p|E")
    iv = report.check("E|R|E = E|p|R|q|E for the chosen p, q")
    v = report.check("E|R|S|E = E|R|p|S|E for the chosen p")
    for _ in range(trials):
        R, S = rand_rel(), rand_rel()
        p, q = rng.choice(pts), rng.choice(pts)
        ia.record(_eprq(E, p, R, q) & _eprq(E, p, S, q) == _eprq(E, p, R & S, q), R, S, p, q)
        ib.record(
            E.compose(R).compose(p).compose(E) & E.compose(p).compose(S).compose(E)
            == E.compose(R).compose(p).compose(S).compose(E), R, S, p)
        ic.record(_eprq(E, p, R, q) == _eprq(E, q, R.converse(), p), R, p, q)
        pp, qq = choose_points_for(E, R)
        iv.record(E.compose(R).compose(E) == _eprq(E, pp, R, qq), R)
        m = choose_point_between(E, R, S)
        v.record(E.compose(R).compose(S).compose(E) == E.compose(R).compose(m).compose(S).compose(E), R, S)
    empty = ConcreteRelation.empty(n)
    pp, qq = choose_points_for(E, empty)
    iv.record(_eprq(E, pp, empty, qq) == empty, "R=0")
    return report
