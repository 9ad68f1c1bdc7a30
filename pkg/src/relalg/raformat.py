"""Reading and writing atom tables in the line-oriented ``.ra`` format.

::

    # MacKenzie
    atoms: 1' a a~ b
    identity: 1'
    converse: 1'=1' a=a~ a~=a b=b
    1';1' = 1'
    ...

One composition line per ordered atom pair, all m*m of them.
"""

from __future__ import annotations

from pathlib import Path

from .algebra import AtomStructure, FiniteRelationAlgebra, make_algebra
from .errors import FormatError


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _header(lines, key):
    lineno, text = next(lines, (None, None))
    if text is None:
        raise FormatError(f"missing '{key}:' line")
    prefix = key + ":"
    if not text.startswith(prefix):
        raise FormatError(f"expected '{key}:'", lineno)
    return lineno, text[len(prefix):].split()


def parse_ra(text: str) -> AtomStructure:
    """Parse ``.ra`` text into an (unvalidated) atom structure."""
    lines = iter(
        (i, _strip(raw)) for i, raw in enumerate(text.splitlines(), start=1) if _strip(raw)
    )
    ln, names = _header(lines, "atoms")
    if not names:
        raise FormatError("no atoms declared", ln)
    if len(set(names)) != len(names):
        raise FormatError("duplicate atom name", ln)
    for n in names:
        if n in ("0", "1"):
            raise FormatError(f"reserved atom name {n!r}", ln)
    index = {n: i for i, n in enumerate(names)}

    def element(text_, lineno):
        text_ = text_.strip()
        if text_ == "0":
            return 0
        if text_ == "1":
            return (1 << len(names)) - 1
        out = 0
        for part in text_.split("+"):
            part = part.strip()
            if part not in index:
                raise FormatError(f"unknown atom {part!r}", lineno)
            out |= 1 << index[part]
        return out

    ln, ident_tokens = _header(lines, "identity")
    identity = element("".join(ident_tokens), ln)

    ln, pairs = _header(lines, "converse")
    conv = {}
    for tok in pairs:
        left, sep, right = tok.partition("=")
        if not sep or left not in index or right not in index:
            raise FormatError(f"bad converse entry {tok!r}", ln)
        if left in conv:
            raise FormatError(f"atom {left!r} listed twice in converse", ln)
        conv[left] = right
    missing = [n for n in names if n not in conv]
    if missing:
        raise FormatError(f"converse missing for {', '.join(missing)}", ln)

    m = len(names)
    table = {}
    for lineno, line in lines:
        lhs, sep, rhs = line.partition("=")
        a, semi, b = lhs.partition(";")
        a, b = a.strip(), b.strip()
        if not sep or not semi or a not in index or b not in index:
            raise FormatError(f"bad composition line {line!r}", lineno)
        key = (index[a], index[b])
        if key in table:
            raise FormatError(f"duplicate entry for {a};{b}", lineno)
        table[key] = element(rhs, lineno)
    if len(table) != m * m:
        absent = [f"{names[i]};{names[j]}" for i in range(m) for j in range(m) if (i, j) not in table]
        raise FormatError(f"missing composition lines: {', '.join(absent[:5])}")

    return AtomStructure(
        tuple(names),
        identity,
        tuple(index[conv[n]] for n in names),
        tuple(tuple(table[(i, j)] for j in range(m)) for i in range(m)),
    )


def format_ra(s, comment: str | None = None) -> str:
    if isinstance(s, FiniteRelationAlgebra):
        s = s.structure
    names = s.atom_names
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append("atoms: " + " ".join(names))
    out.append("identity: " + s.format(s.identity))
    out.append("converse: " + " ".join(f"{n}={names[s.converse[i]]}" for i, n in enumerate(names)))
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            out.append(f"{a};{b} = {s.format(s.comp[i][j])}")
    return "\n".join(out) + "\n"


def read_ra(path) -> AtomStructure:
    return parse_ra(Path(path).read_text(encoding="utf-8"))


def load_algebra(path) -> FiniteRelationAlgebra:
    return make_algebra(read_ra(path))


def write_ra(s, path, comment: str | None = None) -> None:
    Path(path).write_text(format_ra(s, comment), encoding="utf-8")
