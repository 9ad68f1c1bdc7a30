"""Finite atomic relation algebras presented by atom structures.

An algebra with ``m`` atoms has ``2**m`` elements.  Elements are bit
vectors over the atoms, stored as Python ints, where bit ``i`` stands for
atom ``i`` in declaration order.  Composition and converse are defined on
atoms by the table and extended to arbitrary elements by complete
distributivity, which is how every finite atomic relation algebra is
determined by its atom structure.

Atom-level sufficiency
----------------------
Because ``;`` and converse are computed atomwise, both sides of
associativity and of ``(x;y)~ = y~;x~`` are joins of terms indexed by the
atoms below ``x``, ``y`` and ``z``, so checking them on atoms decides them
for all elements.  The residuation law ``-y + x~;-(x;y) = -y`` is antitone in
``y`` on its left-hand side and its right side is the meet of the
complements, so atoms ``y`` suffice; in ``x`` the left side splits into a
join over the atoms below ``x``, each bounded by its own instance.  The
checkers in :mod:`relalg.axioms` rely on this and keep random element-level
spot checks as an independent cross-check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import AlgebraMismatch, InvalidStructure, SizeLimit

MAX_ATOMS = 30

_NAME_RE = re.compile(r"[^\s;+=#]+")


def bits_of(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class AtomStructure:
    """The finite presentation of an atomic relation algebra.

    ``identity`` is the bit mask of the atoms below 1', ``converse`` the
    atom permutation, and ``comp[a][b]`` the bit mask of ``a;b``.
    """

    atom_names: tuple
    identity: int
    converse: tuple
    comp: tuple

    @property
    def m(self) -> int:
        return len(self.atom_names)

    @property
    def full(self) -> int:
        return (1 << self.m) - 1

    @classmethod
    def from_names(cls, atom_names, identity, converse, table):
        """Build from names.

        ``identity`` is an iterable of atom names, ``converse`` a mapping
        name -> name, and ``table`` a mapping ``(a, b) -> iterable of names``
        over all ordered pairs.
        """
        names = tuple(atom_names)
        index = {n: i for i, n in enumerate(names)}

        def mask(items):
            out = 0
            for item in items:
                out |= 1 << index[item]
            return out

        conv = tuple(index[converse[n]] for n in names)
        comp = tuple(
            tuple(mask(table[(a, b)]) for b in names) for a in names
        )
        return cls(names, mask(identity), conv, comp)

    def index(self, name: str) -> int:
        try:
            return self.atom_names.index(name)
        except ValueError:
            raise KeyError(f"unknown atom {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        out = 0
        for n in names:
            out |= 1 << self.index(n)
        return out

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text == "0":
            return 0
        if text == "1":
            return self.full
        return self.mask(part.strip() for part in text.split("+"))

    def format(self, mask: int, top: bool = False) -> str:
        """Render an element as ``+``-joined atom names (``0`` if empty)."""
        if mask == 0:
            return "0"
        if top and mask == self.full:
            return "1"
        return "+".join(self.atom_names[i] for i in bits_of(mask))

    def with_entry(self, a: int, b: int, mask: int) -> "AtomStructure":
        """Copy with ``comp[a][b]`` replaced; used to build mutants."""
        rows = [list(r) for r in self.comp]
        rows[a][b] = mask
        return AtomStructure(
            self.atom_names, self.identity, self.converse,
            tuple(tuple(r) for r in rows),
        )

    def restrict(self, atoms: Sequence[int], names=None) -> "AtomStructure":
        """Relativize to a set of atoms, dropping every other atom.

        Compositions are intersected with the kept atoms and re-indexed.
        The converse must map kept atoms to kept atoms.
        """
        atoms = list(atoms)
        pos = {a: i for i, a in enumerate(atoms)}

        def remap(mask):
            out = 0
            for a in bits_of(mask):
                if a in pos:
                    out |= 1 << pos[a]
            return out

        if names is None:
            names = [self.atom_names[a] for a in atoms]
        return AtomStructure(
            tuple(names),
            remap(self.identity),
            tuple(pos[self.converse[a]] for a in atoms),
            tuple(tuple(remap(self.comp[a][b]) for b in atoms) for a in atoms),
        )


def check_well_formed(s: AtomStructure) -> None:
    """Shape checks: names, index ranges, converse is a permutation."""
    m = s.m
    if m < 1:
        raise InvalidStructure("well-formed", "at least one atom is required")
    if m > MAX_ATOMS:
        raise InvalidStructure("well-formed", f"{m} atoms exceeds the cap of {MAX_ATOMS}")
    if len(set(s.atom_names)) != m:
        raise InvalidStructure("well-formed", "atom names must be distinct")
    for name in s.atom_names:
        if not isinstance(name, str) or not _NAME_RE.fullmatch(name) or name in ("0", "1"):
            raise InvalidStructure("well-formed", f"bad atom name {name!r}")
    full = s.full
    if s.identity == 0 or s.identity & ~full:
        raise InvalidStructure("well-formed", "identity must be a nonempty set of atoms")
    if len(s.converse) != m or sorted(s.converse) != list(range(m)):
        raise InvalidStructure("well-formed", "converse must be a permutation of the atoms")
    if len(s.comp) != m or any(len(row) != m for row in s.comp):
        raise InvalidStructure("well-formed", "composition table must be m x m")
    for a in range(m):
        for b in range(m):
            entry = s.comp[a][b]
            if not isinstance(entry, int) or entry < 0 or entry & ~full:
                raise InvalidStructure("well-formed", "table entry out of range", (a, b))


def _compose_masks(s: AtomStructure, x: int, y: int) -> int:
    out = 0
    for a in bits_of(x):
        row = s.comp[a]
        for b in bits_of(y):
            out |= row[b]
    return out


def check_invariants(s: AtomStructure) -> None:
    """Raise :class:`InvalidStructure` at the first failing atom-level law.

    Order: involution, self-converse identity atoms, identity law, cycle
    (Peircean) condition, converse of composition, associativity.
    """
    m, conv, comp, ident = s.m, s.converse, s.comp, s.identity
    for i in range(m):
        if conv[conv[i]] != i:
            raise InvalidStructure("involution", "converse is not an involution", (i,))
    for e in bits_of(ident):
        if conv[e] != e:
            raise InvalidStructure("identity-converse", "identity atom is not self-converse", (e,))
    for a in range(m):
        left = right = 0
        for e in bits_of(ident):
            left |= comp[e][a]
            right |= comp[a][e]
        if left != 1 << a:
            raise InvalidStructure("identity", "1';a != a", (a,))
        if right != 1 << a:
            raise InvalidStructure("identity", "a;1' != a", (a,))
    for a in range(m):
        for b in range(m):
            ab = comp[a][b]
            for c in range(m):
                p = (ab >> c) & 1
                q = (comp[b][conv[c]] >> conv[a]) & 1
                r = (comp[conv[a]][c] >> b) & 1
                if not p == q == r:
                    raise InvalidStructure(
                        "cycle", "c in a;b, a~ in b;c~, b in a~;c disagree", (a, b, c)
                    )
    for a in range(m):
        for b in range(m):
            for c in range(m):
                lhs = (comp[a][b] >> c) & 1
                rhs = (comp[conv[b]][conv[a]] >> conv[c]) & 1
                if lhs != rhs:
                    raise InvalidStructure(
                        "converse-composition", "(a;b)~ != b~;a~", (a, b, c)
                    )
    for a in range(m):
        for b in range(m):
            ab = comp[a][b]
            for c in range(m):
                if _compose_masks(s, ab, 1 << c) != _compose_masks(s, 1 << a, comp[b][c]):
                    raise InvalidStructure("associativity", "(a;b);c != a;(b;c)", (a, b, c))


@dataclass(frozen=True, eq=False)
class Element:
    """An element of a finite algebra: the join of the atoms in ``bits``."""

    bits: int
    algebra: "FiniteRelationAlgebra"

    def _other(self, other) -> int:
        if not isinstance(other, Element):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")
        return other.bits

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.bits == other.bits

    def __hash__(self):
        return hash((id(self.algebra), self.bits))

    def __add__(self, other):
        return self.algebra.join(self, other)

    def __mul__(self, other):
        return self.algebra.meet(self, other)

    def __neg__(self):
        return self.algebra.complement(self)

    def __xor__(self, other):
        return self.algebra.symdiff(self, other)

    def __matmul__(self, other):
        return self.algebra.compose(self, other)

    def __invert__(self):
        return self.algebra.converse(self)

    def __le__(self, other):
        return self.bits & ~self._other(other) == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __bool__(self):
        return self.bits != 0

    def atoms(self) -> list:
        return list(bits_of(self.bits))

    def __str__(self):
        return self.algebra.format(self.bits)

    def __repr__(self):
        return f"Element({self.algebra.format(self.bits)})"


class FiniteRelationAlgebra:
    """The complex algebra of an atom structure.

    Use :func:`make_algebra` for a validated instance.  ``validate=False``
    builds the algebra of an arbitrary table so that the axiom checker can
    report on broken tables instead of refusing them.
    """

    def __init__(self, structure: AtomStructure, *, validate: bool = True):
        check_well_formed(structure)
        if validate:
            check_invariants(structure)
        self.structure = structure
        self.validated = validate
        self.m = structure.m
        self.size = 1 << self.m
        self.full = structure.full
        self.names = structure.atom_names
        self._nchunks = (self.m + 7) // 8

    def __repr__(self):
        return f"FiniteRelationAlgebra({' '.join(self.names)})"

    # ---- tables -----------------------------------------------------------

    @cached_property
    def _right_chunks(self):
        # _right_chunks[a][k][byte] = a ; (atoms of byte placed at chunk k)
        s = self.structure
        out = []
        for a in range(self.m):
            row = s.comp[a]
            per_chunk = []
            for k in range(self._nchunks):
                t = [0] * 256
                for byte in range(1, 256):
                    low = byte & -byte
                    b = 8 * k + low.bit_length() - 1
                    t[byte] = t[byte ^ low] | (row[b] if b < self.m else 0)
                per_chunk.append(t)
            out.append(per_chunk)
        return out

    @cached_property
    def _conv_chunks(self):
        conv = self.structure.converse
        out = []
        for k in range(self._nchunks):
            t = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                a = 8 * k + low.bit_length() - 1
                t[byte] = t[byte ^ low] | ((1 << conv[a]) if a < self.m else 0)
            out.append(t)
        return out

    @cached_property
    def table(self):
        """Full element-level composition table as a numpy array (m <= 11)."""
        if self.m > 11:
            return None
        s = self.structure
        dtype = np.uint16 if self.m <= 16 else np.uint32
        rows = []
        for a in range(self.m):
            r = np.zeros(1, dtype=dtype)
            for b in range(self.m):
                r = np.concatenate([r, r | dtype(s.comp[a][b])])
            rows.append(r)
        t = np.zeros((1, self.size), dtype=dtype)
        for a in range(self.m):
            t = np.concatenate([t, t | rows[a][None, :]], axis=0)
        return t

    @cached_property
    def _table_list(self):
        return self.table.tolist() if self.m <= 9 else None

    @cached_property
    def conv_array(self):
        if self.m > 16:
            return None
        return np.array([self.conv_bits(x) for x in range(self.size)], dtype=np.uint32)

    # ---- int-level operations --------------------------------------------

    def comp_bits(self, x: int, y: int) -> int:
        t = self._table_list
        if t is not None:
            return t[x][y]
        chunks = self._right_chunks
        ys = [(y >> (8 * k)) & 255 for k in range(self._nchunks)]
        out = 0
        while x:
            low = x & -x
            x ^= low
            per = chunks[low.bit_length() - 1]
            for k, yb in enumerate(ys):
                out |= per[k][yb]
        return out

    def conv_bits(self, x: int) -> int:
        out = 0
        for k, t in enumerate(self._conv_chunks):
            out |= t[(x >> (8 * k)) & 255]
        return out

    def compl_bits(self, x: int) -> int:
        return self.full & ~x

    def closure_bits(self, x: int) -> int:
        return self.comp_bits(self.full, self.comp_bits(x, self.full))

    # ---- vectorized operations (numpy uint32 arrays) ---------------------

    def compose_vec(self, xs, ys):
        t = self.table
        if t is not None:
            return t[xs, ys].astype(np.uint32)
        xs = np.asarray(xs, dtype=np.uint32)
        ys = np.asarray(ys, dtype=np.uint32)
        out =np.zeros(np.broadcast(xs, ys).shape, dtype=np.uint32)
        ybytes = [((ys >> np.uint32(8 * k)) & np.uint32(255)).astype(np.intp)
                  for k in range(self._nchunks)]
        for a in range(self.m):
            sel = ((xs >> np.uint32(a)) & np.uint32(1)).astype(bool)
            if not sel.any():
                continue
            row = np.zeros(out.shape, dtype=np.uint32)
            for k, yb in enumerate(ybytes):
                row |= self._chunk_arrays[a][k][yb]
            out |= np.where(sel, row, np.uint32(0))
        return out

    @cached_property
    def _chunk_arrays(self):
        return [[np.array(t, dtype=np.uint32) for t in per] for per in self._right_chunks]

    def converse_vec(self, xs):
        xs = np.asarray(xs, dtype=np.uint32)
        if self.conv_array is not None:
            return self.conv_array[xs]
        out = np.zeros(xs.shape, dtype=np.uint32)
        for k, t in enumerate(self._conv_chunks):
            out |= np.array(t, dtype=np.uint32)[((xs >> np.uint32(8 * k)) & np.uint32(255)).astype(np.intp)]
        return out

    # ---- element API -----------------------------------------------------

    def _bits(self, x) -> int:
        if isinstance(x, Element):
            if x.algebra is not self:
                raise AlgebraMismatch("element belongs to a different algebra")
            return x.bits
        raise TypeError(f"expected an Element, got {type(x).__name__}")

    def element(self, spec) -> Element:
        """Element from a bit mask, a ``+``-joined string, or atom names."""
        if isinstance(spec, Element):
            self._bits(spec)
            return spec
        if isinstance(spec, int):
            if spec < 0 or spec & ~self.full:
                raise ValueError(f"mask {spec} out of range for {self.m} atoms")
            return Element(spec, self)
        if isinstance(spec, str):
            return Element(self.structure.parse_element(spec), self)
        return Element(self.structure.mask(spec), self)

    def atom(self, name) -> Element:
        i = name if isinstance(name, int) else self.structure.index(name)
        return Element(1 << i, self)

    def atoms(self) -> list:
        return [Element(1 << i, self) for i in range(self.m)]

    def elements(self) -> Iterator[Element]:
        for x in range(self.size):
            yield Element(x, self)

    @property
    def zero(self) -> Element:
        return Element(0, self)

    @property
    def one(self) -> Element:
        return Element(self.full, self)

    @property
    def identity(self) -> Element:
        return Element(self.structure.identity, self)

    @property
    def diversity(self) -> Element:
        return Element(self.full & ~self.structure.identity, self)

    def join(self, x, y) -> Element:
        return Element(self._bits(x) | self._bits(y), self)

    def meet(self, x, y) -> Element:
        return Element(self._bits(x) & self._bits(y), self)

    def complement(self, x) -> Element:
        return Element(self.full & ~self._bits(x), self)

    def symdiff(self, x, y) -> Element:
        return Element(self._bits(x) ^ self._bits(y), self)

    def compose(self, x, y) -> Element:
        return Element(self.comp_bits(self._bits(x), self._bits(y)), self)

    def converse(self, x) -> Element:
        return Element(self.conv_bits(self._bits(x)), self)

    def closure(self, x) -> Element:
        """``1;x;1``; always converse-fixed in a relation algebra."""
        return Element(self.closure_bits(self._bits(x)), self)

    def leq(self, x, y) -> bool:
        return self._bits(x) & ~self._bits(y) == 0

    def format(self, x, top: bool = False) -> str:
        bits = x if isinstance(x, int) else self._bits(x)
        return self.structure.format(bits, top=top)

    # ---- classification --------------------------------------------------

    def is_integral(self) -> bool:
        return popcount(self.structure.identity) == 1

    def is_symmetric(self) -> bool:
        return all(c == i for i, c in enumerate(self.structure.converse))

    def is_simple(self) -> bool:
        # closure is monotone, so atoms suffice
        return all(self.closure_bits(1 << a) == self.full for a in range(self.m))

    def factor_blocks(self) -> list:
        """Distinct closures of atoms, ordered by lowest atom.

        In a relation algebra these are the atoms of the boolean algebra of
        ideal elements; they partition the unit and the algebra is the
        direct product of its relativizations to them.
        """
        seen = []
        for a in range(self.m):
            c = self.closure_bits(1 << a)
            if c not in seen:
                seen.append(c)
        return seen


def make_algebra(structure: AtomStructure) -> FiniteRelationAlgebra:
    """Validate every atom-level invariant and return the algebra."""
    return FiniteRelationAlgebra(structure, validate=True)


def as_algebra(a) -> FiniteRelationAlgebra:
    if isinstance(a, FiniteRelationAlgebra):
        return a
    if isinstance(a, AtomStructure):
        return make_algebra(a)
    raise TypeError(f"expected an algebra or atom structure, got {type(a).__name__}")


def product(a, b) -> FiniteRelationAlgebra:
    """Direct product: disjoint union of atoms, cross compositions zero."""
    sa = a.structure if isinstance(a, FiniteRelationAlgebra) else a
    sb = b.structure if isinstance(b, FiniteRelationAlgebra) else b
    m1, m2 = sa.m, sb.m
    if m1 + m2 > MAX_ATOMS:
        raise SizeLimit(f"product would have {m1 + m2} atoms (cap {MAX_ATOMS})")
    names1, names2 = list(sa.atom_names), list(sb.atom_names)
    if set(names1) & set(names2):
        names1 = [f"{n}_1" for n in names1]
        names2 = [f"{n}_2" for n in names2]
    comp = []
    for a_ in range(m1):
        comp.append(tuple(sa.comp[a_]) + (0,) * m2)
    for b_ in range(m2):
        comp.append((0,) * m1 + tuple(x << m1 for x in sb.comp[b_]))
    s = AtomStructure(
        tuple(names1 + names2),
        sa.identity | (sb.identity << m1),
        tuple(sa.converse) + tuple(c + m1 for c in sb.converse),
        tuple(comp),
    )
    return make_algebra(s)


def factor_structures(A: FiniteRelationAlgebra) -> list:
    """Split ``A`` into the atom structures of its directly indecomposable
    relativizations.  Returns ``[(atom_indices, structure), ...]``.

    Raises ``ValueError`` if the cross compositions are not zero, which can
    only happen for tables that are not relation algebras.
    """
    blocks = A.factor_blocks()
    s = A.structure
    for i, bi in enumerate(blocks):
        for j, bj in enumerate(blocks):
            if i != j and A.comp_bits(bi, bj):
                raise ValueError("blocks do not split the table into a product")
    return [(list(bits_of(b)), s.restrict(list(bits_of(b)))) for b in blocks]


def _atom_profile(s: AtomStructure, a: int):
    return (
        (s.identity >> a) & 1,
        s.converse[a] == a,
        popcount(s.comp[a][a]),
        tuple(sorted(popcount(s.comp[a][b]) for b in range(s.m))),
        tuple(sorted(popcount(s.comp[b][a]) for b in range(s.m))),
    )


def find_isomorphism(s1, s2):
    """Return an atom bijection ``f`` (tuple) with ``f`` an isomorphism of
    the atom structures, or ``None``."""
    if isinstance(s1, FiniteRelationAlgebra):
        s1 = s1.structure
    if isinstance(s2, FiniteRelationAlgebra):
        s2 = s2.structure
    m = s1.m
    if m != s2.m or popcount(s1.identity) != popcount(s2.identity):
        return None
    p1 = [_atom_profile(s1, a) for a in range(m)]
    p2 = [_atom_profile(s2, a) for a in range(m)]
    if sorted(p1) != sorted(p2):
        return None
    cands = [[b for b in range(m) if p2[b] == p1[a]] for a in range(m)]
    order = sorted(range(m), key=lambda a: len(cands[a]))
    f = [-1] * m
    used = [False] * m

    def consistent(a):
        fa = f[a]
        if s2.converse[fa] != f[s1.converse[a]] and f[s1.converse[a]] != -1:
            return False
        for x in range(m):
            fx = f[x]
            if fx == -1:
                continue
            for (u, v, fu, fv) in ((a, x, fa, fx), (x, a, fx, fa)):
                src, dst = s1.comp[u][v], s2.comp[fu][fv]
                for c in range(m):
                    fc = f[c]
                    if fc != -1 and ((src >> c) & 1) != ((dst >> fc) & 1):
                        return False
        return True

    def extend(k):
        if k == m:
            return True
        a = order[k]
        for b in cands[a]:
            if used[b]:
                continue
            f[a] = b
            used[b] = True
            if consistent(a) and extend(k + 1):
                return True
            f[a] = -1
            used[b] = False
        return False

    return tuple(f) if extend(0) else None
