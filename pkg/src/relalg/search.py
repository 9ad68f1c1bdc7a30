"""Backtracking search for square representations.

A square representation over ``n`` points of a simple atomic algebra is an
atom labeling of the ``n x n`` pairs satisfying the triangle and witness
conditions of :mod:`relalg.representation`.  The search assigns the pairs
``(i, j)`` with ``i <= j`` in lexicographic order (``(j, i)`` gets the
converse), trying atoms in declaration order.  After every assignment the
candidate sets of all pairs are narrowed to a path-consistent fixpoint and
every decided pair is checked for a still-possible witness of each
decomposition of its label.  Labels of ``(0, 1), (0, 2), ...`` are forced
to be nondecreasing, which loses nothing since permuting points
``1..n-1`` maps representations to representations.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .algebra import FiniteRelationAlgebra, bits_of
from .errors import BadParameters, NotSimple
from .representation import RepresentationMap, verify_representation

MAX_SEARCH_BASE = 10


@dataclass(frozen=True)
class SearchConfig:
    max_base: int = 6
    min_base: int = 1
    budget: float = 60.0          # seconds per base size
    deterministic: bool = True
    jobs: int = 1
    split_depth: int = 3          # prefix length handed to parallel workers

    def __post_init__(self):
        if not 1 <= self.min_base <= self.max_base <= MAX_SEARCH_BASE:
            raise BadParameters(f"need 1 <= min_base <= max_base <= {MAX_SEARCH_BASE}")
        if self.budget <= 0:
            raise BadParameters("budget must be positive")
        if self.jobs < 1:
            raise BadParameters("jobs must be at least 1")


@dataclass
class SizeOutcome:
    n: int
    found: bool
    exhausted: bool
    nodes: int
    seconds: float

    def to_dict(self, timings: bool = True) -> dict:
        d = {"n": self.n, "found": self.found, "exhausted": self.exhausted, "nodes": self.nodes}
        if timings:
            d["seconds"] = round(self.seconds, 4)
        return d


@dataclass
class NotFoundWithinBounds:
    """No representation over any base size tried.  ``exhausted`` per size
    separates a complete search from one cut off by the time budget."""

    max_base: int
    sizes: list = field(default_factory=list)

    @property
    def all_exhausted(self) -> bool:
        return all(s.exhausted for s in self.sizes)

    def __str__(self):
        parts = [f"n={s.n}:{'exhausted' if s.exhausted else 'timed out'}" for s in self.sizes]
        return f"no representation over bases 1..{self.max_base} ({', '.join(parts)})"


@dataclass
class SearchResult:
    representation: RepresentationMap | None
    sizes: list

    @property
    def found(self) -> bool:
        return self.representation is not None


class _Budget(Exception):
    pass


class _Search:
    """Search state for one base size."""

    def __init__(self, A: FiniteRelationAlgebra, n: int, deadline: float):
        self.A = A
        self.n = n
        self.deadline = deadline
        self.nodes = 0
        s = A.structure
        self.conv = s.converse
        self.comp = A.comp_bits
        self.conv_mask = A.conv_bits
        m = A.m
        # decompositions[c] = atom pairs (a, b) with c below a;b
        self.decompositions = [
            [(a, b) for a in range(m) for b in range(m) if (s.comp[a][b] >> c) & 1]
            for c in range(m)
        ]
        self.vars = [(i, j) for i in range(n) for j in range(i, n)]
        ident, div = s.identity, A.full & ~s.identity
        self.initial = [[ident if i == j else div for j in range(n)] for i in range(n)]

    def _tick(self):
        self.nodes += 1
        if self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Budget()

    def _set(self, D, i, j, mask, queue):
        if D[i][j] == mask:
            return True
        if mask == 0:
            return False
        D[i][j] = mask
        D[j][i] = self.conv_mask(mask)
        queue.append((i, j))
        return True

    def propagate(self, D, queue) -> bool:
        comp, n = self.comp, self.n
        while queue:
            i, j = queue.pop()
            dij = D[i][j]
            for k in range(n):
                if not self._set(D, i, k, D[i][k] & comp(dij, D[j][k]), queue):
                    return False
                if not self._set(D, k, j, D[k][j] & comp(D[k][i], dij), queue):
                    return False
        return True

    def witnesses_possible(self, D) -> bool:
        n = self.n
        for i in range(n):
            Di = D[i]
            for k in range(n):
                c = Di[k]
                if c & (c - 1):
                    continue
                for a, b in self.decompositions[c.bit_length() - 1]:
                    abit, bbit = 1 << a, 1 << b
                    if not any(Di[j] & abit and D[j][k] & bbit for j in range(n)):
                        return False
        return True

    def start(self):
        D = [row[:] for row in self.initial]
        queue = [(i, j) for i in range(self.n) for j in range(self.n)]
        if not self.propagate(D, queue) or not self.witnesses_possible(D):
            return None
        return D

    def children(self, D, v):
        """Consistent states after assigning variable ``v`` each way."""
        i, j = self.vars[v]
        floor = 0
        if i == 0 and j >= 2:
            prev = D[0][j - 1]
            floor = prev.bit_length() - 1
        for a in bits_of(D[i][j]):
            if a < floor:
                continue
            self._tick()
            child = [row[:] for row in D]
            queue = []
            self._set(child, i, j, 1 << a, queue)
            if self.propagate(child, queue) and self.witnesses_possible(child):
                yield child

    def dfs(self, D, v):
        while v < len(self.vars):
            i, j = self.vars[v]
            if D[i][j] & (D[i][j] - 1):
                break
            v += 1
        if v == len(self.vars):
            return D
        for child in self.children(D, v):
            found = self.dfs(child, v + 1)
            if found is not None:
                return found
        return None

    def prefixes(self, depth):
        """States after assigning the first ``depth`` open variables, in
        canonical order."""
        D0 = self.start()
        if D0 is None:
            return []
        level = [(D0, 0)]
        for _ in range(depth):
            nxt = []
            for D, v in level:
                while v < len(self.vars) and not (D[self.vars[v][0]][self.vars[v][1]]
                                                  & (D[self.vars[v][0]][self.vars[v][1]] - 1)):
                    v += 1
                if v == len(self.vars):
                    nxt.append((D, v))
                    continue
                nxt.extend((child, v + 1) for child in self.children(D, v))
            level = nxt
        return level

    def labeling(self, D) -> RepresentationMap:
        labels = tuple(tuple(D[i][j].bit_length() - 1 for j in range(self.n)) for i in range(self.n))
        return RepresentationMap(self.A, self.n, labels)


def _run_branch(args):
    structure, n, deadline, D, v = args
    A = FiniteRelationAlgebra(structure, validate=False)
    s = _Search(A, n, deadline)
    try:
        found = s.dfs(D, v)
    except _Budget:
        return None, False, s.nodes
    return (None if found is None else [row[:] for row in found]), True, s.nodes


def _search_size(A: FiniteRelationAlgebra, n: int, cfg: SearchConfig, pool=None):
    t0 = time.monotonic()
    deadline = t0 + cfg.budget
    s = _Search(A, n, deadline)
    found, exhausted = None, True
    if pool is None:
        try:
            D0 = s.start()
            found = None if D0 is None else s.dfs(D0, 0)
        except _Budget:
            exhausted = False
        nodes = s.nodes
    else:
        try:
            branches = s.prefixes(cfg.split_depth)
        except _Budget:
            branches, exhausted = [], False
        nodes = s.nodes
        args = [(A.structure, n, deadline, D, v) for D, v in branches]
        # every branch runs to completion, so the winner (lowest index) and
        # the node count do not depend on scheduling
        for result, done, count in pool.map(_run_branch, args):
            nodes += count
            exhausted = exhausted and done
            if found is None and result is not None:
                found = result
    rep = None
    if found is not None:
        rep = s.labeling(found)
        if not verify_representation(A, rep).ok:
            raise AssertionError("search produced an invalid certificate")
    return rep, SizeOutcome(n, rep is not None, exhausted or rep is not None, nodes,
                            time.monotonic() - t0)


def search(A: FiniteRelationAlgebra, cfg: SearchConfig | None = None) -> SearchResult:
    """Try base sizes ``min_base..max_base`` in turn; stop at the first hit."""
    cfg = cfg or SearchConfig()
    if not A.is_simple():
        raise NotSimple("algebra is not simple; decompose it and search each factor")
    sizes = []
    pool = ProcessPoolExecutor(max_workers=cfg.jobs) if cfg.jobs > 1 else None
    try:
        for n in range(cfg.min_base, cfg.max_base + 1):
            rep, outcome = _search_size(A, n, cfg, pool)
            sizes.append(outcome)
            if rep is not None:
                return SearchResult(rep, sizes)
    finally:
        if pool is not None:
            pool.shutdown()
    return SearchResult(None, sizes)


def find_square_representation(A: FiniteRelationAlgebra, cfg: SearchConfig | None = None):
    """A verified :class:`RepresentationMap`, or :class:`NotFoundWithinBounds`."""
    cfg = cfg or SearchConfig()
    result = search(A, cfg)
    if result.found:
        return result.representation
    return NotFoundWithinBounds(cfg.max_base, result.sizes)


def all_labelings(A: FiniteRelationAlgebra, n: int):
    """Every converse-compatible labeling with identity atoms on the
    diagonal; brute-force oracle for tiny cases."""
    from itertools import product as cartesian

    s = A.structure
    ident = list(bits_of(s.identity))
    div = list(bits_of(A.full & ~s.identity))
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in cartesian(ident, repeat=n):
        for offs in cartesian(div, repeat=len(upper)):
            L = [[0] * n for _ in range(n)]
            for i in range(n):
                L[i][i] = diag[i]
            for (i, j), a in zip(upper, offs):
                L[i][j] = a
                L[j][i] = s.converse[a]
            yield RepresentationMap(A, n, tuple(tuple(r) for r in L))
