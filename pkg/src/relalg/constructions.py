"""Named algebras and the projective-geometry constructions.

* :func:`mackenzie` - the four-atom integral algebra with no representation.
* :func:`lyndon` - the symmetric integral algebras ``E_{n+1}^gamma`` on
  ``n`` diversity atoms; ``gamma = {1, 3}`` gives the algebra of a
  projective line with ``n`` points.
* :func:`bruck_ryser_excluded` - the arithmetic test that rules out
  projective planes of certain orders.
* :func:`fused_subalgebra` - embedding a subalgebra of ``E_{n+1}`` with two
  fused atoms into ``E_{k+1}``.
* :func:`slope_representation` - a square representation of
  ``E_{q+2}^{1,3}`` by slopes of lines in the affine plane over GF(q).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product as cartesian

from .algebra import AtomStructure, FiniteRelationAlgebra, bits_of, make_algebra
from .errors import BadParameters, NotPrime, QTooSmall
from .report import CheckReport
from .representation import RepresentationMap, from_relations

IDENT = "1'"


def mackenzie() -> AtomStructure:
    names = (IDENT, "a", "a~", "b")
    table = {
        ("a", "a"): ["a"],
        ("a", "a~"): list(names),
        ("a", "b"): ["a", "b"],
        ("a~", "a"): list(names),
        ("a~", "a~"): ["a~"],
        ("a~", "b"): ["a~", "b"],
        ("b", "a"): ["a", "b"],
        ("b", "a~"): ["a~", "b"],
        ("b", "b"): [IDENT, "a", "a~"],
    }
    for x in names:
        table[(IDENT, x)] = [x]
        table[(x, IDENT)] = [x]
    converse = {IDENT: IDENT, "a": "a~", "a~": "a", "b": "b"}
    return AtomStructure.from_names(names, [IDENT], converse, table)


def lyndon(n: int, gamma=(1, 3)) -> AtomStructure:
    """``E_{n+1}^gamma``: atoms ``1', a1..an``, all self-converse.

    ``a;a = 1' + sum{c : |{a,c}| in gamma}`` and, for ``a != b``,
    ``a;b = sum{c : |{a,b,c}| in gamma}``, with ``c`` ranging over the
    diversity atoms.  The result is returned even when it violates the
    axioms; a warning is issued when some diversity product is empty.
    """
    gamma = frozenset(gamma)
    if not gamma <= {1, 2, 3}:
        raise BadParameters(f"gamma must be a subset of {{1,2,3}}, got {sorted(gamma)}")
    if not 2 <= n <= 12:
        raise BadParameters(f"lyndon needs 2 <= n <= 12, got {n}")
    if not gamma:
        warnings.warn("empty gamma: every diversity product is 1' or 0", stacklevel=2)
    m = n + 1
    comp = [[0] * m for _ in range(m)]
    for x in range(m):
        comp[0][x] = comp[x][0] = 1 << x
    for a in range(1, m):
        for b in range(1, m):
            out = 1 if a == b else 0
            for c in range(1, m):
                if len({a, b, c}) in gamma:
                    out |= 1 << c
            comp[a][b] = out
    zero = [(a, b) for a in range(1, m) for b in range(1, m) if comp[a][b] == 0]
    if zero:
        a, b = zero[0]
        warnings.warn(
            f"a{a};a{b} = 0 in lyndon({n}, {sorted(gamma)}): the algebra is not integral",
            stacklevel=2,
        )
    names = (IDENT,) + tuple(f"a{i}" for i in range(1, m))
    return AtomStructure(names, 1, tuple(range(m)), tuple(tuple(r) for r in comp))


def _sum_of_two_squares(n: int) -> bool:
    for a in range(math.isqrt(n) + 1):
        b2 = n - a * a
        if math.isqrt(b2) ** 2 == b2:
            return True
    return False


def bruck_ryser_excluded(order: int) -> bool:
    """True iff the Bruck-Ryser theorem rules out a projective plane of
    this order: ``order = 1 or 2 (mod 4)`` and ``order`` is not a sum of
    two squares.  A False answer does not mean such a plane exists (order
    10 passes the test and has no plane)."""
    if order < 2:
        raise BadParameters("plane orders start at 2")
    return order % 4 in (1, 2) and not _sum_of_two_squares(order)


def non_representable_indices(limit: int) -> list:
    """``n <= limit`` with ``n >= 5`` whose line algebra ``E_n^{1,3}`` is
    certified non-representable because no plane of order ``n - 1`` exists
    by the Bruck-Ryser test."""
    return [n for n in range(5, limit + 1) if bruck_ryser_excluded(n - 1)]


# ---- fusion ----------------------------------------------------------------


@dataclass
class Fusion:
    structure: AtomStructure       # the subalgebra of E_{n+1} with a fused atom
    source_masks: list             # each sub-atom as a mask in E_{n+1}
    embedding: list                # each sub-atom as a mask in E_{k+1}
    fused_target: int              # mask of b in E_{k+1}
    report: CheckReport


def fused_subalgebra(n: int, k: int, pair=(1, 2), exhaustive: bool | None = None) -> Fusion:
    """Fuse two atoms of ``E_{n+1}^{1,3}`` and embed the resulting
    subalgebra into ``E_{k+1}^{1,3}``.

    The fused atom ``a = a_i + a_j`` goes to ``b = b_1 + ... + b_{k-n+2}``
    and the remaining diversity atoms, in order, go to ``b_{k-n+3}, ...,
    b_k``.  This makes the atom images partition the unit; ``b`` has to
    absorb one more atom than the remaining ``a``'s leave free.
    """
    if not (5 <= n < k <= 12):
        raise BadParameters(f"fusion needs 5 <= n < k <= 12, got n={n}, k={k}")
    i, j = pair
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise BadParameters(f"bad fused pair {pair}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        small = make_algebra(lyndon(n, (1, 3)))
        big = make_algebra(lyndon(k, (1, 3)))
    report = CheckReport("fusion")

    rest = [x for x in range(1, n + 1) if x not in (i, j)]
    fused = (1 << i) | (1 << j)
    source = [1, fused] + [1 << x for x in rest]
    names = [IDENT, f"a{i}_{j}"] + [f"a{x}" for x in rest]
    sub = _subalgebra_structure(small, source, names, report)

    full_s = small.full
    div_s = full_s & ~1
    report.check("a;a = 1 in E_{n+1}").record(small.comp_bits(fused, fused) == full_s)
    aj = report.check("a;a_j = 0'.-a_j in E_{n+1}")
    for x in rest:
        aj.record(small.comp_bits(fused, 1 << x) == div_s & ~(1 << x), f"a{x}")

    width = k - n + 2
    b = sum(1 << t for t in range(1, width + 1))
    full_b = big.full
    div_b = full_b & ~1
    report.info["fused_source"] = names[1]
    report.info["fused_target"] = big.format(b)
    report.check("b;b = 1 in E_{k+1}").record(big.comp_bits(b, b) == full_b)
    bj = report.check("b;b_j = 0'.-b_j for b_j outside b")
    for t in range(width + 1, k + 1):
        bj.record(big.comp_bits(b, 1 << t) == div_b & ~(1 << t), f"a{t}")

    embedding = [1, b] + [1 << (width + 1 + r) for r in range(len(rest))]
    report.info["embedding"] = {names[s]: big.format(embedding[s]) for s in range(len(names))}
    _check_embedding(sub, big, embedding, report, exhaustive if exhaustive is not None else n <= 6)
    return Fusion(sub, source, embedding, b, report)


def _subalgebra_structure(A: FiniteRelationAlgebra, masks, names, report) -> AtomStructure:
    """Atom table of the subalgebra whose atoms are the given disjoint masks."""
    closed = report.check("fused atoms form a subalgebra")
    pos = {mk: t for t, mk in enumerate(masks)}

    def decompose(x):
        out, cover = 0, 0
        for t, mk in enumerate(masks):
            if x & mk:
                out |= 1 << t
                cover |= mk
        closed.record(cover == x, A.format(x))
        return out

    comp = tuple(tuple(decompose(A.comp_bits(x, y)) for y in masks) for x in masks)
    conv = []
    for x in masks:
        cx = A.conv_bits(x)
        closed.record(cx in pos, A.format(x))
        conv.append(pos.get(cx, 0))
    return AtomStructure(tuple(names), decompose(A.structure.identity), tuple(conv), comp)


def _check_embedding(sub: AtomStructure, big: FiniteRelationAlgebra, embedding, report,
                     exhaustive: bool) -> None:
    S = make_algebra(sub)

    def f(x):
        out = 0
        for t in bits_of(x):
            out |= embedding[t]
        return out

    boolean = report.check("atom images are disjoint, nonzero and cover 1")
    cover = 0
    for t, e in enumerate(embedding):
        boolean.record(e != 0 and cover & e == 0, sub.atom_names[t])
        cover |= e
    boolean.record(cover == big.full)
    hom = report.check("f preserves ;, converse and 1' on atoms")
    hom.record(f(sub.identity) == big.structure.identity, IDENT)
    for x in range(S.m):
        hom.record(f(S.conv_bits(1 << x)) == big.conv_bits(embedding[x]), sub.atom_names[x])
        for y in range(S.m):
            hom.record(f(S.comp_bits(1 << x, 1 << y)) == big.comp_bits(embedding[x], embedding[y]),
                       sub.atom_names[x], sub.atom_names[y])
    if exhaustive:
        every = report.check("f is an injective homomorphism on all elements")
        images = set()
        for x in range(S.size):
            fx = f(x)
            images.add(fx)
            every.record(f(S.full & ~x) == big.full & ~fx and f(S.conv_bits(x)) == big.conv_bits(fx),
                         S.format(x))
            for y in range(S.size):
                every.record(f(S.comp_bits(x, y)) == big.comp_bits(fx, f(y)), S.format(x), S.format(y))
        every.record(len(images) == S.size, "not injective")


# ---- slope representation ---------------------------------------------------


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not _is_prime(self.q):
            raise NotPrime(f"{self.q} is not prime")
        if self.q > 13:
            raise BadParameters("prime fields are supported up to q = 13")

    def add(self, x, y):
        return (x + y) % self.q

    def mul(self, x, y):
        return (x * y) % self.q

    def points(self):
        return list(cartesian(range(self.q), repeat=2))


def slope_pairs(F: PrimeField) -> dict:
    """Map slope (``0..q-1`` or ``None`` for vertical) to the ordered pairs
    of distinct points of GF(q)^2 on a common line of that slope.  Point
    ``(x, y)`` has index ``x*q + y``."""
    q = F.q
    out = {}
    for s in list(range(q)) + [None]:
        step = (0, 1) if s is None else (1, s)
        pairs = []
        for x, y in F.points():
            for t in range(1, q):
                u, v = (x + t * step[0]) % q, (y + t * step[1]) % q
                pairs.append((x * q + y, u * q + v))
        out[s] = sorted(pairs)
    return out


def slope_representation(q) -> RepresentationMap:
    """Represent ``lyndon(q + 1, {1, 3})`` over the q^2 points of GF(q)^2.

    Slope ``s`` is atom ``a{s+1}``; vertical lines are ``a{q+1}``.  For
    ``q = 2`` each line has two points, so ``a;a`` cannot contain ``a`` and
    the construction fails.
    """
    F = q if isinstance(q, PrimeField) else None
    if F is None:
        if not _is_prime(q):
            raise NotPrime(f"{q} is not prime")
        if q == 2:
            raise QTooSmall("over GF(2) every line has 2 points, so a is not below a;a")
        F = PrimeField(q)
    q = F.q
    if q == 2:
        raise QTooSmall("over GF(2) every line has 2 points, so a is not below a;a")
    A = make_algebra(lyndon(q + 1, (1, 3)))
    pairs = {0: [(p, p) for p in range(q * q)]}
    for s, prs in slope_pairs(F).items():
        pairs[q + 1 if s is None else s + 1] = prs
    return from_relations(A, q * q, pairs)
