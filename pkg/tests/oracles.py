"""Brute-force reference implementations used to cross-check the library.

Everything here works element by element from the raw atom table, without
touching the library's precomputed tables, so agreement is meaningful.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from relalg.terms import Comp, Compl, Conv, Ident, Join, Meet, One, Var, Zero


def element_tables(s):
    """Composition and converse over all 2^m elements, built from atom pairs."""
    m = len(s.atom_names)
    size = 1 << m
    conv = [0] * size
    for x in range(size):
        for a in range(m):
            if x >> a & 1:
                conv[x] |= 1 << s.converse[a]
    comp = np.zeros((size, size), dtype=np.int64)
    atom_sets = [[a for a in range(m) if x >> a & 1] for x in range(size)]
    for x in range(size):
        for y in range(size):
            acc = 0
            for a in atom_sets[x]:
                row = s.comp[a]
                for b in atom_sets[y]:
                    acc |= row[b]
            comp[x, y] = acc
    return comp, np.array(conv, dtype=np.int64)


def is_relation_algebra(s) -> bool:
    """Check the defining laws on every element (pair, triple) of the complex
    algebra.  Boolean laws hold by construction for bit masks."""
    m = len(s.atom_names)
    size = 1 << m
    full = size - 1
    e = s.identity
    comp, conv = element_tables(s)
    xs = np.arange(size)
    # associativity over all triples
    left = comp[comp[:, :, None], xs[None, None, :]]
    right = comp[xs[:, None, None], comp[None, :, :]]
    if not np.array_equal(left, right):
        return False
    # x;1' = x
    if not np.array_equal(comp[:, e], xs):
        return False
    # converse is an involution distributing over ;
    if not np.array_equal(conv[conv], xs):
        return False
    if not np.array_equal(conv[comp], comp[conv[None, :], conv[:, None]]):
        return False
    # x~;-(x;y) <= -y
    lhs = comp[conv[:, None], full ^ comp]
    if np.any(lhs & xs[None, :]):
        return False
    return True


def evaluate(t, s, tables, asg):
    comp, conv = tables
    full = (1 << len(s.atom_names)) - 1
    if isinstance(t, Var):
        return asg[t.name]
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return full
    if isinstance(t, Ident):
        return s.identity
    if isinstance(t, Join):
        return evaluate(t.left, s, tables, asg) | evaluate(t.right, s, tables, asg)
    if isinstance(t, Meet):
        return evaluate(t.left, s, tables, asg) & evaluate(t.right, s, tables, asg)
    if isinstance(t, Comp):
        return int(comp[evaluate(t.left, s, tables, asg), evaluate(t.right, s, tables, asg)])
    if isinstance(t, Compl):
        return full ^ evaluate(t.arg, s, tables, asg)
    if isinstance(t, Conv):
        return int(conv[evaluate(t.arg, s, tables, asg)])
    raise TypeError(t)


def holds_naive(eq, s, tables=None):
    """Nested loops over every assignment; returns (valid, first failure)."""
    tables = tables or element_tables(s)
    names = eq.variables
    size = 1 << len(s.atom_names)
    for values in product(range(size), repeat=len(names)):
        asg = dict(zip(names, values))
        if evaluate(eq.lhs, s, tables, asg) != evaluate(eq.rhs, s, tables, asg):
            return False, asg
    return True, None


def congruence_classes(A):
    """All congruences of a small algebra, as partitions of element masks,
    found by brute force over partitions generated from single pairs."""
    size = A.size
    comp = [[A.comp_bits(x, y) for y in range(size)] for x in range(size)]
    conv = [A.conv_bits(x) for x in range(size)]

    def close(pairs):
        parent = list(range(size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
                return True
            return False

        for x, y in pairs:
            union(x, y)
        changed = True
        while changed:
            changed = False
            classes = {}
            for x in range(size):
                classes.setdefault(find(x), []).append(x)
            reps = [(x, c[0]) for c in classes.values() for x in c[1:]]
            for x, y in reps:
                for z in range(size):
                    changed |= union(x | z, y | z)
                    changed |= union(comp[x][z], comp[y][z])
                    changed |= union(comp[z][x], comp[z][y])
                changed |= union(A.full ^ x, A.full ^ y)
                changed |= union(conv[x], conv[y])
        return frozenset(frozenset(x for x in range(size) if find(x) == r)
                         for r in {find(x) for x in range(size)})

    out = {close([])}
    for x in range(size):
        for y in range(x + 1, size):
            out.add(close([(x, y)]))
    # joins of principal congruences
    frontier = list(out)
    while frontier:
        nxt = []
        for c in frontier:
            for d in list(out):
                pairs = [(min(k), x) for k in c for x in k] + [(min(k), x) for k in d for x in k]
                j = close(pairs)
                if j not in out:
                    out.add(j)
                    nxt.append(j)
        frontier = nxt
    return out


def mutate(s, rng):
    """Replace one composition entry with a different random mask."""
    m = len(s.atom_names)
    a, b = rng.randrange(m), rng.randrange(m)
    old = s.comp[a][b]
    new = old
    while new == old:
        new = rng.getrandbits(m)
    return s.with_entry(a, b, new), (a, b, old, new)
