"""Evaluating equations over finite algebras, subalgebras and quotients.

``holds`` decides an equation by evaluating both sides on every assignment
at once with numpy: each variable gets its own array axis, so a subterm is
only computed over the variables it mentions and broadcasting fills in the
rest.  Assignments are ordered lexicographically by element bit mask with
the first variable (in order of first occurrence) most significant, and
the first failing assignment in that order is returned.

An algebra that splits as a direct product of smaller relativizations can
be decided factor by factor, since an equation holds in a product exactly
when it holds in every factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .algebra import AtomStructure, Element, FiniteRelationAlgebra, bits_of, make_algebra, product
from .errors import SearchSpaceTooLarge, SizeLimit, UnboundVariable
from .ideals import enumerate_ideals, quotient
from .terms import (
    Comp, Compl, Conv, Equation, Ident, Join, Meet, One, Term, Var, Zero, parse_equation,
)

DEFAULT_CAP = 1 << 24
CHUNK = 1 << 22

# A fixed mix of laws: most hold in every relation algebra, the last two
# (commutativity, symmetry) only in some.
LAW_SUITE = (
    "x;(y + z) = x;y + x;z",
    "(x;y);z = x;(y;z)",
    "(x;y)~ = y~;x~",
    "x~~ = x",
    "x;1' = x",
    "x~;-(x;y) + -y = -y",
    "x . y;z = x . y;(z . y~;x)",
    "x;y . z . (x . z;y~);(y . x~;z) = x;y . z",
    "x;y = y;x",
    "x~ = x",
)


def _as_equation(eq) -> Equation:
    return parse_equation(eq) if isinstance(eq, str) else eq


def evaluate(t: Term, A: FiniteRelationAlgebra, asg: dict) -> Element:
    """Evaluate ``t`` under ``asg`` (variable name -> Element or bit mask)."""
    def go(t):
        if isinstance(t, Var):
            if t.name not in asg:
                raise UnboundVariable(t.name)
            v = asg[t.name]
            return A._bits(v) if isinstance(v, Element) else int(v)
        if isinstance(t, Zero):
            return 0
        if isinstance(t, One):
            return A.full
        if isinstance(t, Ident):
            return A.structure.identity
        if isinstance(t, Join):
            return go(t.left) | go(t.right)
        if isinstance(t, Meet):
            return go(t.left) & go(t.right)
        if isinstance(t, Comp):
            return A.comp_bits(go(t.left), go(t.right))
        if isinstance(t, Compl):
            return A.full & ~go(t.arg)
        if isinstance(t, Conv):
            return A.conv_bits(go(t.arg))
        raise TypeError(f"not a term: {t!r}")

    return Element(go(t), A)


# so that ``from relalg.equations import eval`` reads like the operation name
eval = evaluate  # noqa: A001


@dataclass
class Verdict:
    valid: bool
    counterexample: dict | None = None  # variable -> element text
    checked: int = 0
    mode: str = "exhaustive"            # exhaustive | factors | sampled
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "counterexample": self.counterexample,
            "checked": self.checked,
            "mode": self.mode,
            "detail": self.detail,
        }


def _eval_grid(t, A, axes, shape_len, first_block):
    """Evaluate over a grid: variable ``axes[name]`` varies along that axis;
    axis 0 is restricted to ``first_block``."""
    size = A.size
    full = np.uint32(A.full)

    def go(t):
        if isinstance(t, Var):
            ax = axes[t.name]
            vals = first_block if ax == 0 else np.arange(size, dtype=np.uint32)
            shape = [1] * shape_len
            shape[ax] = len(vals)
            return vals.reshape(shape)
        if isinstance(t, Zero):
            return np.zeros([1] * shape_len, dtype=np.uint32)
        if isinstance(t, One):
            return np.full([1] * shape_len, full, dtype=np.uint32)
        if isinstance(t, Ident):
            return np.full([1] * shape_len, A.structure.identity, dtype=np.uint32)
        if isinstance(t, Join):
            return go(t.left) | go(t.right)
        if isinstance(t, Meet):
            return go(t.left) & go(t.right)
        if isinstance(t, Comp):
            return A.compose_vec(go(t.left), go(t.right))
        if isinstance(t, Compl):
            return go(t.arg) ^ full
        if isinstance(t, Conv):
            return A.converse_vec(go(t.arg))
        raise TypeError(f"not a term: {t!r}")

    return go(t)


def _exhaustive(eq: Equation, A: FiniteRelationAlgebra) -> Verdict:
    names = eq.variables
    k = len(names)
    size = A.size
    total = size ** k
    if k == 0:
        lhs = evaluate(eq.lhs, A, {}).bits
        rhs = evaluate(eq.rhs, A, {}).bits
        ok = lhs == rhs
        return Verdict(ok, None if ok else {}, 1)
    axes = {name: i for i, name in enumerate(names)}
    inner = size ** (k - 1)
    step = max(1, CHUNK // inner)
    for lo in range(0, size, step):
        block = np.arange(lo, min(size, lo + step), dtype=np.uint32)
        shape = (len(block),) + (size,) * (k - 1)
        lhs = np.broadcast_to(_eval_grid(eq.lhs, A, axes, k, block), shape)
        rhs = np.broadcast_to(_eval_grid(eq.rhs, A, axes, k, block), shape)
        diff = lhs != rhs
        if diff.any():
            idx = np.unravel_index(int(np.argmax(diff)), shape)
            values = [int(block[idx[0]])] + [int(i) for i in idx[1:]]
            cex = {n: A.format(v, top=True) for n, v in zip(names, values)}
            checked = (lo * inner) + int(np.ravel_multi_index(idx, shape)) + 1
            return Verdict(False, cex, checked)
    return Verdict(True, None, total)


def _factors(A):
    blocks = A.factor_blocks()
    out = []
    for b in blocks:
        atoms = list(bits_of(b))
        out.append((atoms, FiniteRelationAlgebra(A.structure.restrict(atoms), validate=False)))
    return out


def holds(eq, A: FiniteRelationAlgebra, cap: int = DEFAULT_CAP, *, factor: bool = True,
          sample_if_too_large: int = 0, seed: int = 0) -> Verdict:
    """Decide ``A |= eq``.

    Exhaustive when ``|A|^vars <= cap``.  Otherwise, with ``factor`` set
    and ``A`` a nontrivial direct product, each factor is decided
    exhaustively (exact; a failing factor's counterexample is lifted to
    ``A`` with zero in the other factors).  Otherwise, if
    ``sample_if_too_large`` is positive, that many random assignments are
    tried and the verdict is marked ``sampled``; else
    :class:`SearchSpaceTooLarge` is raised.
    """
    eq = _as_equation(eq)
    k = len(eq.variables)
    required = A.size ** k
    if required <= cap:
        return _exhaustive(eq, A)
    if factor:
        parts = _factors(A)
        if len(parts) > 1 and all(F.size ** k <= cap for _, F in parts):
            checked = 0
            for atoms, F in parts:
                v = _exhaustive(eq, F)
                checked += v.checked
                if not v.valid:
                    cex = {}
                    for name, text in v.counterexample.items():
                        local = F.structure.parse_element(text)
                        mask = 0
                        for t in bits_of(local):
                            mask |= 1 << atoms[t]
                        cex[name] = A.format(mask, top=True)
                    return Verdict(False, cex, checked, "factors",
                                   f"fails in the factor on {A.format(sum(1 << a for a in atoms))}")
            return Verdict(True, None, checked, "factors", f"{len(parts)} factors")
    if sample_if_too_large > 0:
        return _sampled(eq, A, sample_if_too_large, seed)
    raise SearchSpaceTooLarge(required, cap)


def _sampled(eq, A, samples, seed) -> Verdict:
    rng = random.Random(seed)
    names = eq.variables
    for i in range(samples):
        asg = {n: rng.getrandbits(A.m) for n in names}
        if evaluate(eq.lhs, A, asg) != evaluate(eq.rhs, A, asg):
            return Verdict(False, {n: A.format(v, top=True) for n, v in asg.items()}, i + 1,
                           "sampled", f"seed {seed}")
    return Verdict(True, None, samples, "sampled", f"no counterexample in {samples} samples, seed {seed}")


# ---- subalgebras -------------------------------------------------------------


@dataclass
class Subalgebra:
    """A subalgebra given by the partition of the parent's atoms into its
    own atoms (blocks)."""

    parent: FiniteRelationAlgebra
    blocks: tuple

    @property
    def size(self) -> int:
        return 1 << len(self.blocks)

    def elements(self) -> list:
        out = []
        for k in range(self.size):
            x = 0
            for i, b in enumerate(self.blocks):
                if (k >> i) & 1:
                    x |= b
            out.append(x)
        return sorted(out)

    def __contains__(self, x) -> bool:
        bits = x.bits if isinstance(x, Element) else x
        return all(bits & b in (0, b) for b in self.blocks)

    def structure(self) -> AtomStructure:
        A = self.parent
        pos = {b: i for i, b in enumerate(self.blocks)}

        def local(x):
            return sum(1 << i for i, b in enumerate(self.blocks) if x & b)

        names = tuple("_".join(A.names[a] for a in bits_of(b)) for b in self.blocks)
        return AtomStructure(
            names,
            local(A.structure.identity),
            tuple(pos[A.conv_bits(b)] for b in self.blocks),
            tuple(tuple(local(A.comp_bits(b, c)) for c in self.blocks) for b in self.blocks),
        )

    def algebra(self) -> FiniteRelationAlgebra:
        return make_algebra(self.structure())


def _refine(blocks, x):
    out = []
    for b in blocks:
        inside, outside = b & x, b & ~x
        out.extend(p for p in (inside, outside) if p)
    return out


def sg(A: FiniteRelationAlgebra, generators=()) -> Subalgebra:
    """Least subalgebra containing ``generators`` and the constants.

    Iterates to a fixpoint: the blocks are refined by every generator, the
    identity, converses of blocks and compositions of pairs of blocks until
    nothing splits.  The boolean closure of the final blocks is then closed
    under every operation.
    """
    blocks = [A.full]
    pending = [A.structure.identity]
    for g in generators:
        pending.append(g.bits if isinstance(g, Element) else int(g))
    for x in pending:
        blocks = _refine(blocks, x)
    while True:
        before = len(blocks)
        for b in list(blocks):
            blocks = _refine(blocks, A.conv_bits(b))
        for b in list(blocks):
            for c in list(blocks):
                blocks = _refine(blocks, A.comp_bits(b, c))
        if len(blocks) == before:
            break
    blocks.sort(key=lambda b: (b & -b).bit_length())
    return Subalgebra(A, tuple(blocks))


def sg_naive(A: FiniteRelationAlgebra, generators=()) -> set:
    """Element-level closure; a slow independent oracle for :func:`sg`."""
    S = {0, A.full, A.structure.identity}
    S.update(g.bits if isinstance(g, Element) else int(g) for g in generators)
    while True:
        new = set(S)
        for x in S:
            new.add(A.full & ~x)
            new.add(A.conv_bits(x))
            for y in S:
                new.add(x | y)
                new.add(A.comp_bits(x, y))
        if new == S:
            return S
        S = new


def enumerate_subalgebras(A: FiniteRelationAlgebra, max_atoms: int = 6) -> list:
    """All subalgebras, smallest first, found by adjoining one element at a
    time to already-found subalgebras."""
    if A.m > max_atoms:
        raise SizeLimit(f"subalgebra enumeration supports at most {max_atoms} atoms")
    start = sg(A)
    seen = {start.blocks: start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for x in range(A.size):
                if x in S:
                    continue
                T = sg(A, list(S.blocks) + [x])
                if T.blocks not in seen:
                    seen[T.blocks] = T
                    nxt.append(T)
        frontier = nxt
    return sorted(seen.values(), key=lambda S: (len(S.blocks), S.blocks))


DEGENERATE = "degenerate"


@dataclass
class QuotientEntry:
    kernel_top: str
    algebra: FiniteRelationAlgebra | None  # None marks the one-element quotient

    @property
    def degenerate(self) -> bool:
        return self.algebra is None


def enumerate_ideal_quotients(A: FiniteRelationAlgebra, max_atoms: int = 6) -> list:
    """Quotients by every relational ideal; the improper ideal gives the
    degenerate one-element algebra, marked by ``algebra=None``."""
    if A.m > max_atoms:
        raise SizeLimit(f"quotient enumeration supports at most {max_atoms} atoms")
    out = []
    for I in enumerate_ideals(A):
        if I.proper:
            out.append(QuotientEntry(A.format(I.top, top=True), quotient(A, I).algebra))
        else:
            out.append(QuotientEntry(A.format(I.top, top=True), None))
    return out


# ---- closure under S, H, P -----------------------------------------------------


@dataclass
class ClosureReport:
    algebra_atoms: int
    subalgebras: int
    quotients: int
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e["preserved"] for e in self.entries if not e["skipped"])

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "subalgebras": self.subalgebras,
            "quotients": self.quotients,
            "entries": self.entries,
        }


def check_birkhoff_closure(eqs, A: FiniteRelationAlgebra, cap: int = DEFAULT_CAP,
                           samples: int = 20000, seed: int = 0) -> ClosureReport:
    """For each equation valid in ``A``, check it in every subalgebra, every
    ideal quotient and in ``A x A``.  Equations failing in ``A`` are
    skipped.  Each verdict records whether it was exhaustive, decided
    factor by factor, or sampled."""
    subs = [S.algebra() for S in enumerate_subalgebras(A)]
    quots = enumerate_ideal_quotients(A)
    AA = product(A, A)
    report = ClosureReport(A.m, len(subs), len(quots))
    for raw in eqs:
        eq = _as_equation(raw)
        base = holds(eq, A, cap, sample_if_too_large=samples, seed=seed)
        entry = {"equation": str(eq), "valid_in_A": base.valid, "mode_in_A": base.mode,
                 "skipped": not base.valid, "preserved": True, "failures": [], "modes": []}
        if base.valid:
            targets = [(f"S{i}", B) for i, B in enumerate(subs)]
            targets += [(f"H[{q.kernel_top}]", q.algebra) for q in quots if not q.degenerate]
            targets.append(("AxA", AA))
            for label, B in targets:
                v = holds(eq, B, cap, sample_if_too_large=samples, seed=seed)
                if v.mode not in entry["modes"]:
                    entry["modes"].append(v.mode)
                if not v.valid:
                    entry["preserved"] = False
                    entry["failures"].append({"target": label, "counterexample": v.counterexample})
        report.entries.append(entry)
    return report
