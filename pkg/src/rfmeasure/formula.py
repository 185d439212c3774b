"""LTLf abstract syntax with past modalities, a surface-syntax parser and printer.

Surface grammar (loosest binding first)::

    impl    := disj ( "->" impl )?
    disj    := conj ( "|" disj )?
    conj    := temp ( "&" conj )?
    temp    := unary ( ("U" | "S") temp )?
    unary   := ("!" | "X" | "Y" | "F" | "O" | "G" | "H") unary | atom
    atom    := "true" | "false" | "Start" | "End" | IDENT | QUOTED | "(" impl ")"

All binary operators are right-associative.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Iterator


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Formula:
    """Base of all formula nodes.

    Nodes are immutable; hashes are computed once at construction from the
    children's cached hashes, so hashing and memo lookups stay O(1) even for
    very deep folds.
    """

    def _fields(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b) or a._hash != b._hash:
                return False
            for x, y in zip(a._fields(), b._fields()):
                if isinstance(x, Formula):
                    stack.append((x, y))
                elif x != y:
                    return False
        return True

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._fields()))

    def __str__(self):
        return pretty(self)


_node = dataclass(frozen=True, eq=False, repr=True)


@_node
class ConstTrue(Formula):
    pass


@_node
class ConstFalse(Formula):
    pass


@_node
class TraceStart(Formula):
    pass


@_node
class TraceEnd(Formula):
    pass


@_node
class Atom(Formula):
    symbol: str

    def __post_init__(self):
        if not isinstance(self.symbol, str) or not self.symbol:
            raise ValueError("atom symbol must be a non-empty string")
        super().__post_init__()


@_node
class Not(Formula):
    f: Formula


@_node
class Next(Formula):
    f: Formula


@_node
class Yesterday(Formula):
    f: Formula


@_node
class Eventually(Formula):
    f: Formula


@_node
class Once(Formula):
    f: Formula


@_node
class Always(Formula):
    f: Formula


@_node
class Historically(Formula):
    f: Formula


@_node
class And(Formula):
    f1: Formula
    f2: Formula


@_node
class Or(Formula):
    f1: Formula
    f2: Formula


@_node
class Implies(Formula):
    f1: Formula
    f2: Formula


@_node
class Until(Formula):
    f1: Formula
    f2: Formula


@_node
class Since(Formula):
    f1: Formula
    f2: Formula


CONSTANTS = (ConstTrue, ConstFalse, TraceStart, TraceEnd)
UNARY = (Not, Next, Yesterday, Eventually, Once, Always, Historically)
BINARY = (And, Or, Implies, Until, Since)

TRUE = ConstTrue()
FALSE = ConstFalse()
START = TraceStart()
END = TraceEnd()

_UNARY_TOKENS = {"!": Not, "X": Next, "Y": Yesterday, "F": Eventually,
                 "O": Once, "G": Always, "H": Historically}
_UNARY_SYMBOL = {cls: tok for tok, cls in _UNARY_TOKENS.items()}
_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Until: "U", Since: "S"}
_CONSTANT_TOKENS = {"true": TRUE, "false": FALSE, "Start": START, "End": END}
_CONSTANT_SYMBOL = {type(v): k for k, v in _CONSTANT_TOKENS.items()}
_RESERVED = set(_UNARY_TOKENS) | set(_CONSTANT_TOKENS) | {"U", "S"}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PLAIN_ATOM = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def children(f: Formula) -> tuple:
    if isinstance(f, UNARY):
        return (f.f,)
    if isinstance(f, BINARY):
        return (f.f1, f.f2)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    """Post-order traversal, iterative so deep folds do not hit the recursion limit."""
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(children(node)):
            stack.append((child, False))


def formula_size(f: Formula) -> int:
    """Number of atoms, constants and connectives (parentheses excluded)."""
    return sum(1 for _ in walk(f))


def atoms(f: Formula) -> frozenset:
    return frozenset(node.symbol for node in walk(f) if isinstance(node, Atom))


def depth(f: Formula) -> int:
    memo = {}
    for node in walk(f):
        memo[node] = 1 + max((memo[c] for c in children(node)), default=0)
    return memo[f]


def rebuild(f: Formula, kids: tuple) -> Formula:
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    return f


def _neg(f: Formula) -> Formula:
    return f.f if isinstance(f, Not) else Not(f)


def expand_derived(f: Formula) -> Formula:
    """Rewrite into the core set {atoms, true, false, !, &, X, Y, U, S}.

    Double negations created by the rewriting are collapsed.
    """
    memo = {}
    for node in walk(f):
        if node in memo:
            continue
        kids = tuple(memo[c] for c in children(node))
        if isinstance(node, Not):
            out = _neg(kids[0])
        elif isinstance(node, Or):
            out = _neg(And(_neg(kids[0]), _neg(kids[1])))
        elif isinstance(node, Implies):
            out = _neg(And(kids[0], _neg(kids[1])))
        elif isinstance(node, Eventually):
            out = Until(TRUE, kids[0])
        elif isinstance(node, Once):
            out = Since(TRUE, kids[0])
        elif isinstance(node, Always):
            out = _neg(Until(TRUE, _neg(kids[0])))
        elif isinstance(node, Historically):
            out = _neg(Since(TRUE, _neg(kids[0])))
        elif isinstance(node, TraceEnd):
            out = Not(Next(TRUE))
        elif isinstance(node, TraceStart):
            out = Not(Yesterday(TRUE))
        else:
            out = rebuild(node, kids)
        memo[node] = out
    return memo[f]


_MIRROR = {Next: Yesterday, Yesterday: Next, Until: Since, Since: Until,
           Eventually: Once, Once: Eventually, Always: Historically, Historically: Always}


def mirror(f: Formula) -> Formula:
    """Swap every future operator with its past counterpart (and Start with End)."""
    memo = {}
    for node in walk(f):
        if node in memo:
            continue
        kids = tuple(memo[c] for c in children(node))
        if isinstance(node, TraceStart):
            out = END
        elif isinstance(node, TraceEnd):
            out = START
        elif type(node) in _MIRROR:
            cls = _MIRROR[type(node)]
            out = cls(*kids)
        else:
            out = rebuild(node, kids)
        memo[node] = out
    return memo[f]


def conjunction(formulas) -> Formula:
    """Left fold with &; the empty conjunction is true."""
    out = None
    for g in formulas:
        out = g if out is None else And(out, g)
    return TRUE if out is None else out


def disjunction(formulas) -> Formula:
    out = None
    for g in formulas:
        out = g if out is None else Or(out, g)
    return FALSE if out is None else out


# -- printing ---------------------------------------------------------------

def _atom_text(symbol: str) -> str:
    if _PLAIN_ATOM.match(symbol) and symbol not in _RESERVED:
        return symbol
    return '"' + symbol.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_string(f: Formula) -> str:
    """Fully parenthesized canonical form; parse(to_string(f)) == f."""
    out = {}
    for node in walk(f):
        if node in out:
            continue
        if isinstance(node, Atom):
            s = _atom_text(node.symbol)
        elif isinstance(node, CONSTANTS):
            s = _CONSTANT_SYMBOL[type(node)]
        elif isinstance(node, UNARY):
            s = f"({_UNARY_SYMBOL[type(node)]} {out[node.f]})"
        else:
            s = f"({out[node.f1]} {_BINARY_SYMBOL[type(node)]} {out[node.f2]})"
        out[node] = s
    text = out[f]
    return text


def pretty(f: Formula) -> str:
    """Compact form with parentheses only where precedence requires them."""
    return _pretty(f, 0)


_PREC = {Implies: 1, Or: 2, And: 3, Until: 4, Since: 4}


def _pretty(f: Formula, parent: int) -> str:
    if isinstance(f, Atom):
        return _atom_text(f.symbol)
    if isinstance(f, CONSTANTS):
        return _CONSTANT_SYMBOL[type(f)]
    if isinstance(f, UNARY):
        sep = "" if type(f) is Not else " "
        return _UNARY_SYMBOL[type(f)] + sep + _pretty(f.f, 5)
    prec = _PREC[type(f)]
    # right-associative: the left operand needs strictly higher precedence
    text = f"{_pretty(f.f1, prec + 1)} {_BINARY_SYMBOL[type(f)]} {_pretty(f.f2, prec)}"
    return f"({text})" if prec < parent else text


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<punct>[!&|()])
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos] == '"':
                raise FormulaSyntaxError("unterminated quoted atom", pos)
            raise FormulaSyntaxError(f"unknown token {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "quoted":
                value = re.sub(r"\\(.)", r"\1", value[1:-1])
                if not value:
                    raise FormulaSyntaxError("empty quoted atom", pos)
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def is_op(self, symbol: str) -> bool:
        kind, value, _ = self.peek()
        return kind in ("punct", "arrow", "word") and value == symbol

    def parse(self) -> Formula:
        f = self.implication()
        kind, value, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {value!r}", pos)
        return f

    def _binary(self, symbol, cls, lower, same):
        left = lower()
        if self.is_op(symbol):
            self.take()
            return cls(left, same())
        return left

    def implication(self):
        return self._binary("->", Implies, self.disjunction, self.implication)

    def disjunction(self):
        return self._binary("|", Or, self.conjunction, self.disjunction)

    def conjunction(self):
        return self._binary("&", And, self.temporal, self.conjunction)

    def temporal(self):
        left = self.unary()
        for symbol, cls in (("U", Until), ("S", Since)):
            if self.is_op(symbol):
                self.take()
                return cls(left, self.temporal())
        return left

    def unary(self):
        kind, value, pos = self.peek()
        if kind in ("punct", "word") and value in _UNARY_TOKENS:
            self.take()
            return _UNARY_TOKENS[value](self.unary())
        return self.primary()

    def primary(self):
        kind, value, pos = self.take()
        if kind == "eof":
            raise FormulaSyntaxError("unexpected end of input", pos)
        if kind == "quoted":
            return Atom(value)
        if kind == "word":
            if value in _CONSTANT_TOKENS:
                return _CONSTANT_TOKENS[value]
            if value in ("U", "S"):
                raise FormulaSyntaxError(f"binary operator {value!r} without left operand", pos)
            return Atom(value)
        if value == "(":
            f = self.implication()
            kind, closing, pos = self.take()
            if closing != ")" or kind != "punct":
                if kind == "eof":
                    raise FormulaSyntaxError("expected ')' but reached end of input", pos)
                raise FormulaSyntaxError(f"expected ')' but found {closing!r}", pos)
            return f
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)


def parse_formula(text: str) -> Formula:
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0)
    return _Parser(text).parse()
