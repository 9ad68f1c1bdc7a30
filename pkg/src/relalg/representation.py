"""Square representations given as atom labelings of a finite base.

A labeling assigns one atom to every ordered pair of base points.  It
represents the algebra exactly when

* (triangles) ``label(i,k)`` is below ``label(i,j);label(j,k)`` for all
  ``i, j, k``, and
* (witnesses) whenever ``label(i,k)`` is below ``a;b`` some ``j`` has
  ``label(i,j) = a`` and ``label(j,k) = b``.

Since every element is the join of the atoms below it and composition is
computed atomwise on both sides, these two conditions say precisely that
``rep(x);rep(y) = rep(x;y)`` for all elements; with converse-compatible
labels, identity atoms on the diagonal and every atom used, the map
``x -> union of the pairs labeled by atoms of x`` is an embedding into the
full relation algebra on the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import FiniteRelationAlgebra, bits_of
from .errors import FormatError, InvalidCertificate, SizeLimit
from .proper import ProperAlgebra
from .relations import MAX_BASE, ConcreteRelation

MAX_REPORTED = 50


@dataclass(frozen=True)
class RepresentationMap:
    algebra: FiniteRelationAlgebra
    n: int
    labels: tuple  # labels[i][j] = atom index of the pair <i, j>

    def label(self, i: int, j: int) -> int:
        return self.labels[i][j]

    def relation_pairs(self, atom: int) -> list:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.labels[i][j] == atom]

    def image_pairs(self, mask: int) -> list:
        """Pairs of the relation representing the element ``mask``."""
        return [(i, j) for i in range(self.n) for j in range(self.n)
                if (mask >> self.labels[i][j]) & 1]

    def permuted(self, perm) -> "RepresentationMap":
        """Relabel base points: new point ``perm[i]`` plays old point ``i``."""
        inv = [0] * self.n
        for i, p in enumerate(perm):
            inv[p] = i
        return RepresentationMap(self.algebra, self.n, tuple(
            tuple(self.labels[inv[i]][inv[j]] for j in range(self.n)) for i in range(self.n)
        ))

    def rows_as_names(self) -> list:
        names = self.algebra.names
        return [[names[a] for a in row] for row in self.labels]


def from_relations(A: FiniteRelationAlgebra, n: int, pairs_by_atom: dict) -> RepresentationMap:
    """Build a labeling from per-atom pair sets; each pair must get
    exactly one atom."""
    labels = [[-1] * n for _ in range(n)]
    for atom, pairs in pairs_by_atom.items():
        for i, j in pairs:
            if labels[i][j] != -1:
                raise InvalidCertificate(f"pair ({i},{j}) is assigned two atoms")
            labels[i][j] = atom
    missing = [(i, j) for i in range(n) for j in range(n) if labels[i][j] == -1]
    if missing:
        raise InvalidCertificate(f"pair {missing[0]} is not assigned an atom")
    return RepresentationMap(A, n, tuple(tuple(r) for r in labels))


@dataclass
class RepresentationReport:
    base: int
    problems: list = field(default_factory=list)
    triangle_violations: list = field(default_factory=list)
    witness_violations: list = field(default_factory=list)
    triangle_count: int = 0
    witness_count: int = 0
    unused_atoms: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.problems or self.triangle_count or self.witness_count or self.unused_atoms)

    def first_violation(self):
        if self.problems:
            return ("well-formed", self.problems[0])
        if self.triangle_violations:
            return ("triangle", self.triangle_violations[0])
        if self.witness_violations:
            return ("witness", self.witness_violations[0])
        if self.unused_atoms:
            return ("unused", self.unused_atoms[0])
        return None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "base": self.base,
            "problems": self.problems,
            "triangle_count": self.triangle_count,
            "triangle_violations": [list(v) for v in self.triangle_violations],
            "witness_count": self.witness_count,
            "witness_violations": [list(v) for v in self.witness_violations],
            "unused_atoms": self.unused_atoms,
        }


def composition_cube(A: FiniteRelationAlgebra) -> np.ndarray:
    """``C[a, b, c]`` is True iff atom ``c`` is below ``a;b``."""
    m = A.m
    C = np.zeros((m, m, m), dtype=bool)
    for a in range(m):
        for b in range(m):
            for c in bits_of(A.structure.comp[a][b]):
                C[a, b, c] = True
    return C


def verify_representation(A: FiniteRelationAlgebra, rep: RepresentationMap) -> RepresentationReport:
    """Check a labeling for well-formedness, triangle consistency, witness
    saturation and use of every atom.  Violations are listed in
    lexicographic order (at most 50 of each kind are kept)."""
    n, m = rep.n, A.m
    names = A.names
    report = RepresentationReport(n)
    s = A.structure
    if n < 1 or len(rep.labels) != n or any(len(r) != n for r in rep.labels):
        report.problems.append("labeling is not an n x n table")
        return report
    L = np.array(rep.labels, dtype=np.int64)
    if L.min() < 0 or L.max() >= m:
        report.problems.append("label out of range")
        return report
    for i in range(n):
        for j in range(n):
            a = rep.labels[i][j]
            if s.converse[a] != rep.labels[j][i]:
                report.problems.append(f"label({j},{i}) is not the converse of label({i},{j})")
            is_id = bool((s.identity >> a) & 1)
            if i == j and not is_id:
                report.problems.append(f"diagonal pair ({i},{i}) carries diversity atom {names[a]}")
            if i != j and is_id:
                report.problems.append(f"pair ({i},{j}) carries identity atom {names[a]}")
    if report.problems:
        return report

    C = composition_cube(A)
    # ok[i, j, k] = label(i,k) <= label(i,j);label(j,k)
    ok = C[L[:, :, None], L[None, :, :], L[:, None, :]]
    bad = np.argwhere(~ok)
    report.triangle_count = len(bad)
    for i, j, k in bad[:MAX_REPORTED]:
        report.triangle_violations.append((
            int(i), int(j), int(k), names[L[i, j]], names[L[j, k]], names[L[i, k]]))

    # realized[i*n+k, a*m+b] = some j has label(i,j)=a and label(j,k)=b
    codes = L[:, :, None] * m + L[None, :, :]            # [i, j, k]
    rows = (np.arange(n)[:, None, None] * n + np.arange(n)[None, None, :])
    rows = np.broadcast_to(rows, (n, n, n))
    realized = np.zeros((n * n, m * m), dtype=bool)
    realized[rows.ravel(), codes.ravel()] = True
    required = C.reshape(m * m, m).T                      # [c, a*m+b]
    missing = required[L.ravel()] & ~realized
    miss = np.argwhere(missing)
    report.witness_count = len(miss)
    for ik, ab in miss[:MAX_REPORTED]:
        i, k = divmod(int(ik), n)
        a, b = divmod(int(ab), m)
        report.witness_violations.append((i, k, names[L[i, k]], names[a], names[b]))

    used = set(L.ravel().tolist())
    report.unused_atoms = [names[a] for a in range(m) if a not in used]
    return report


def representation_to_proper(A: FiniteRelationAlgebra, rep: RepresentationMap) -> ProperAlgebra:
    """Materialize the relations of a verified certificate."""
    report = verify_representation(A, rep)
    if not report.ok:
        raise InvalidCertificate(f"certificate fails verification: {report.first_violation()}")
    if rep.n > MAX_BASE:
        raise SizeLimit(f"base {rep.n} exceeds the relation size limit {MAX_BASE}")
    atoms = tuple(ConcreteRelation.from_pairs(rep.n, rep.relation_pairs(a)) for a in range(A.m))
    return ProperAlgebra(ConcreteRelation.full(rep.n), atoms, A.names)


# ---- .rep files ------------------------------------------------------------


def format_rep(rep: RepresentationMap, algebra_file: str) -> str:
    lines = [f"algebra: {algebra_file}", f"base: {rep.n}"]
    lines += [" ".join(row) for row in rep.rows_as_names()]
    return "\n".join(lines) + "\n"


def parse_rep(text: str, A: FiniteRelationAlgebra | None = None, loader=None):
    """Parse ``.rep`` text.  Returns ``(algebra_file, RepresentationMap)``.

    The algebra is ``A`` if given, otherwise ``loader(algebra_file)``.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2 or not lines[0].startswith("algebra:") or not lines[1].startswith("base:"):
        raise FormatError("expected 'algebra:' and 'base:' header lines")
    algebra_file = lines[0][len("algebra:"):].strip()
    try:
        n = int(lines[1][len("base:"):])
    except ValueError:
        raise FormatError("bad base size", 2) from None
    if A is None:
        A = loader(algebra_file)
    rows = lines[2:]
    if len(rows) != n:
        raise FormatError(f"expected {n} label rows, found {len(rows)}")
    index = {name: i for i, name in enumerate(A.names)}
    labels = []
    for r, row in enumerate(rows):
        toks = row.split()
        if len(toks) != n or any(t not in index for t in toks):
            raise FormatError(f"bad label row {r}", r + 3)
        labels.append(tuple(index[t] for t in toks))
    return algebra_file, RepresentationMap(A, n, tuple(labels))


def write_rep(rep: RepresentationMap, path, algebra_file: str) -> None:
    Path(path).write_text(format_rep(rep, algebra_file), encoding="utf-8")


def read_rep(path, A: FiniteRelationAlgebra | None = None):
    from .raformat import load_algebra

    path = Path(path)

    def loader(name):
        p = Path(name)
        return load_algebra(p if p.is_absolute() else path.parent / p)

    return parse_rep(path.read_text(encoding="utf-8"), A, loader)
