"""Binary relations on small base sets ``{0..n-1}`` as boolean matrices.

A relation stores one int bit mask per row: bit ``j`` of ``rows[i]`` is set
iff ``<i, j>`` is in the relation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import BaseMismatch, FormatError, NotEquivalence

MAX_BASE = 16


@dataclass(frozen=True)
class ConcreteRelation:
    n: int
    rows: tuple

    def __post_init__(self):
        if not 1 <= self.n <= MAX_BASE:
            raise ValueError(f"base size must be in 1..{MAX_BASE}, got {self.n}")
        if len(self.rows) != self.n or any(r >> self.n for r in self.rows):
            raise ValueError("rows do not fit the base size")

    # constructors

    @classmethod
    def empty(cls, n):
        return cls(n, (0,) * n)

    @classmethod
    def full(cls, n):
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def identity(cls, n):
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_pairs(cls, n, pairs: Iterable):
        rows = [0] * n
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i},{j}) outside base {n}")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def from_classes(cls, sizes: Iterable[int]):
        """The equivalence relation whose classes are consecutive blocks."""
        sizes = list(sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("class sizes must be positive")
        n = sum(sizes)
        rows = [0] * n
        start = 0
        for s in sizes:
            block = ((1 << s) - 1) << start
            for i in range(start, start + s):
                rows[i] = block
            start += s
        return cls(n, tuple(rows))

    # views

    def pairs(self) -> list:
        return [(i, j) for i in range(self.n) for j in range(self.n) if (self.rows[i] >> j) & 1]

    def __contains__(self, pair):
        i, j = pair
        return bool((self.rows[i] >> j) & 1)

    def __len__(self):
        return sum(bin(r).count("1") for r in self.rows)

    def __bool__(self):
        return any(self.rows)

    def __iter__(self):
        return iter(self.pairs())

    # operations

    def _check(self, other):
        if not isinstance(other, ConcreteRelation):
            return NotImplemented
        if other.n != self.n:
            raise BaseMismatch(f"base sizes {self.n} and {other.n} differ")
        return other

    def compose(self, other) -> "ConcreteRelation":
        self._check(other)
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                r ^= low
                acc |= other.rows[low.bit_length() - 1]
            out.append(acc)
        return ConcreteRelation(self.n, tuple(out))

    def converse(self) -> "ConcreteRelation":
        out = [0] * self.n
        for i, r in enumerate(self.rows):
            for j in range(self.n):
                if (r >> j) & 1:
                    out[j] |= 1 << i
        return ConcreteRelation(self.n, tuple(out))

    def __or__(self, other):
        self._check(other)
        return ConcreteRelation(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other):
        self._check(other)
        return ConcreteRelation(self.n, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        return ConcreteRelation(self.n, tuple(a & ~b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other):
        self._check(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def complement_in(self, unit) -> "ConcreteRelation":
        return unit - self

    def __matmul__(self, other):
        return self.compose(other)

    def is_equivalence(self) -> bool:
        """``R = R|R^-1``; equivalently symmetric, transitive and reflexive
        on its field."""
        return self == self.compose(self.converse())

    def classes(self) -> list:
        """Equivalence classes as sorted point lists, ordered by least point."""
        require_equivalence(self)
        seen, out = 0, []
        for i in range(self.n):
            if (seen >> i) & 1 or not self.rows[i]:
                continue
            cls_mask = self.rows[i]
            seen |= cls_mask
            out.append([j for j in range(self.n) if (cls_mask >> j) & 1])
        return out

    def __str__(self):
        return format_relation(self)


def require_equivalence(R: ConcreteRelation) -> None:
    if not R.is_equivalence():
        raise NotEquivalence(f"relation {format_relation(R)} is not an equivalence relation")


_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_relation(text: str) -> ConcreteRelation:
    """Parse ``n=3; pairs=(0,1)(1,0)`` or ``classes=[2,3]``."""
    text = text.strip()
    m = re.fullmatch(r"classes\s*=\s*\[([\d,\s]+)\]", text)
    if m:
        return ConcreteRelation.from_classes(parse_classes(m.group(1)))
    m = re.fullmatch(r"n\s*=\s*(\d+)\s*;\s*pairs\s*=\s*((?:\(\s*\d+\s*,\s*\d+\s*\)\s*)*)", text)
    if not m:
        raise FormatError(f"bad relation literal {text!r}")
    n = int(m.group(1))
    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(m.group(2))]
    try:
        return ConcreteRelation.from_pairs(n, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def parse_classes(text: str) -> list:
    try:
        sizes = [int(t) for t in text.replace(" ", "").strip("[]").split(",") if t]
    except ValueError:
        raise FormatError(f"bad class list {text!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise FormatError(f"bad class list {text!r}")
    return sizes


def format_relation(R: ConcreteRelation) -> str:
    return f"n={R.n}; pairs=" + "".join(f"({i},{j})" for i, j in R.pairs())
