"""Terms and equations in the relation-algebra signature.

Concrete syntax, loosest binding first::

    t + t      join
    t . t      meet
    t ; t      composition
    -t         complement
    t~         converse
    0  1  1'   constants

Binary operators associate to the left.  Variables are identifiers
(``[A-Za-z_][A-Za-z0-9_]*``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

MAX_DEPTH = 32


class Term:
    __slots__ = ()

    def variables(self) -> list:
        out = []
        _collect(self, out)
        return out

    def depth(self) -> int:
        return _depth(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Ident(Term):
    pass


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Comp(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Compl(Term):
    arg: Term


@dataclass(frozen=True)
class Conv(Term):
    arg: Term


BINARY = (Join, Meet, Comp)
UNARY = (Compl, Conv)


def _collect(t, out):
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    elif isinstance(t, BINARY):
        _collect(t.left, out)
        _collect(t.right, out)
    elif isinstance(t, UNARY):
        _collect(t.arg, out)


def _depth(t):
    if isinstance(t, BINARY):
        return 1 + max(_depth(t.left), _depth(t.right))
    if isinstance(t, UNARY):
        return 1 + _depth(t.arg)
    return 1


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    @property
    def variables(self) -> list:
        out = []
        _collect(self.lhs, out)
        _collect(self.rhs, out)
        return out

    def __str__(self):
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


# ---- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(1')|([A-Za-z_][A-Za-z0-9_]*)|([01])|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace is left
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("const", "1'", start))
        elif m.group(2):
            tokens.append(("var", m.group(2), start))
        elif m.group(3):
            tokens.append(("const", m.group(3), start))
        else:
            ch = m.group(4)
            if ch not in "+.;-~()=":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.peek()
        if val != value or kind not in ("op",):
            what = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {what}", pos)
        self.take()

    def binary(self, level, depth):
        ops = {0: ("+", Join), 1: (".", Meet), 2: (";", Comp)}
        if level == 3:
            return self.unary(depth)
        sym, cls = ops[level]
        left = self.binary(level + 1, depth)
        while self.peek()[0] == "op" and self.peek()[1] == sym:
            self.take()
            right = self.binary(level + 1, depth)
            left = cls(left, right)
        return left

    def unary(self, depth):
        if depth > MAX_DEPTH:
            raise ParseError(f"term nesting exceeds {MAX_DEPTH}", self.peek()[2])
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Compl(self.unary(depth + 1))
        t = self.primary(depth)
        while self.peek()[0] == "op" and self.peek()[1] == "~":
            self.take()
            t = Conv(t)
        return t

    def primary(self, depth):
        kind, val, pos = self.take()
        if kind == "var":
            return Var(val)
        if kind == "const":
            return {"0": Zero(), "1": One(), "1'": Ident()}[val]
        if kind == "op" and val == "(":
            t = self.binary(0, depth + 1)
            self.expect(")")
            return t
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected a term, found {what}", pos)


def _check_depth(t, text):
    if t.depth() > MAX_DEPTH:
        raise ParseError(f"term depth exceeds {MAX_DEPTH}", len(text))
    return t


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.binary(0, 0)
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return _check_depth(t, text)


def parse_equation(text: str) -> Equation:
    p = _Parser(text)
    lhs = p.binary(0, 0)
    p.expect("=")
    rhs = p.binary(0, 0)
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return Equation(_check_depth(lhs, text), _check_depth(rhs, text))


# ---- printing ---------------------------------------------------------------

_PREC = {Join: 1, Meet: 2, Comp: 3, Compl: 4, Conv: 5}
_SYM = {Join: " + ", Meet: " . ", Comp: ";"}


def _prec(t):
    return _PREC.get(type(t), 6)


def to_text(t: Term) -> str:
    """Render with the fewest parentheses that parse back to ``t``."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Ident):
        return "1'"
    p = _prec(t)
    if isinstance(t, BINARY):
        left = to_text(t.left)
        right = to_text(t.right)
        if _prec(t.left) < p:
            left = f"({left})"
        if _prec(t.right) <= p:
            right = f"({right})"
        return left + _SYM[type(t)] + right
    inner = to_text(t.arg)
    if isinstance(t, Compl):
        return "-" + (f"({inner})" if _prec(t.arg) < p else inner)
    return (f"({inner})" if _prec(t.arg) < p else inner) + "~"
