"""Nested regular expressions: AST, concrete syntax, nesting depth.

Concrete grammar::

    expr := alt
    alt  := cat ("|" cat)*
    cat  := post ("." post)*
    post := prim ("*" | "+")*
    prim := "eps" | "(" ")" | "(" expr ")" | "[" expr "]" | label ["^-"]

``e+`` is sugar for ``e . e*``.  Binary operators associate to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

RESERVED_CHARS = set("^.|*+[]()%&$")
RESERVED_LABELS = {"S", "E", "eps"}
_LABEL_RE = re.compile(r"[^\s^.|*+\[\]()%&$]+")


class NreSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True, order=True)
class Symbol:
    """An edge label, read forwards or (``inverse=True``) backwards."""

    base: str
    inverse: bool = False

    def __post_init__(self):
        check_label(self.base)

    def inv(self) -> Symbol:
        return Symbol(self.base, not self.inverse)

    def __str__(self):
        return self.base + "^-" if self.inverse else self.base

    @classmethod
    def parse(cls, text: str) -> Symbol:
        if text.endswith("^-"):
            return cls(text[:-2], True)
        return cls(text)


def check_label(label: str) -> None:
    if not label:
        raise ValueError("empty label")
    bad = sorted(set(label) & RESERVED_CHARS)
    if bad or any(c.isspace() for c in label):
        raise ValueError(f"reserved character {bad[0] if bad else 'whitespace'!r} in label {label!r}")
    if label in RESERVED_LABELS:
        raise ValueError(f"label {label!r} is reserved")


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Atom:
    symbol: Symbol


@dataclass(frozen=True)
class Concat:
    left: "Nre"
    right: "Nre"


@dataclass(frozen=True)
class Alt:
    left: "Nre"
    right: "Nre"


@dataclass(frozen=True)
class Star:
    inner: "Nre"


@dataclass(frozen=True)
class Nest:
    inner: "Nre"


Nre = Union[Epsilon, Atom, Concat, Alt, Star, Nest]


def atom(text: str) -> Atom:
    return Atom(Symbol.parse(text))


def plus(e: Nre) -> Concat:
    return Concat(e, Star(e))


def children(e: Nre) -> tuple:
    if isinstance(e, (Concat, Alt)):
        return (e.left, e.right)
    if isinstance(e, (Star, Nest)):
        return (e.inner,)
    return ()


def subexpressions(e: Nre) -> Iterator[Nre]:
    yield e
    for c in children(e):
        yield from subexpressions(c)


def size(e: Nre) -> int:
    return sum(1 for _ in subexpressions(e))


def labels(e: Nre) -> frozenset:
    """Base labels mentioned by ``e`` (direction ignored)."""
    return frozenset(s.symbol.base for s in subexpressions(e) if isinstance(s, Atom))


def nesting_depth(e: Nre) -> int:
    # eps counts like an atom
    if isinstance(e, (Epsilon, Atom)):
        return 1
    if isinstance(e, Star):
        return nesting_depth(e.inner)
    if isinstance(e, Nest):
        return nesting_depth(e.inner) + 1
    return max(nesting_depth(e.left), nesting_depth(e.right))


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\^-)|([.|*+\[\]()])|(" + _LABEL_RE.pattern + r")|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("inv", "^-", start))
        elif m.group(2):
            out.append((m.group(2), m.group(2), start))
        elif m.group(3):
            out.append(("label", m.group(3), start))
        else:
            ch = m.group(4)
            if ch in "%&$^":
                raise NreSyntaxError(f"reserved character {ch!r} in label", start)
            raise NreSyntaxError(f"unexpected character {ch!r}", start)
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise NreSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def alt(self) -> Nre:
        parts = [self.cat()]
        while self.peek()[0] == "|":
            self.i += 1
            parts.append(self.cat())
        return _fold(Alt, parts)

    def cat(self) -> Nre:
        parts = [self.post()]
        while self.peek()[0] == ".":
            self.i += 1
            parts.append(self.post())
        return _fold(Concat, parts)

    def post(self) -> Nre:
        e = self.prim()
        while self.peek()[0] in ("*", "+"):
            e = Star(e) if self.take(self.peek()[0])[0] == "*" else plus(e)
        return e

    def prim(self) -> Nre:
        kind, value, pos = self.peek()
        if kind == "(":
            self.i += 1
            if self.peek()[0] == ")":
                self.i += 1
                return Epsilon()
            e = self.alt()
            self.take(")")
            return e
        if kind == "[":
            self.i += 1
            e = self.alt()
            self.take("]")
            return Nest(e)
        if kind == "label":
            self.i += 1
            if value == "eps":
                return Epsilon()
            if value in RESERVED_LABELS:
                raise NreSyntaxError(f"label {value!r} is reserved", pos)
            inverse = False
            if self.peek()[0] == "inv":
                self.i += 1
                inverse = True
            return Atom(Symbol(value, inverse))
        what = "end of input" if kind == "end" else repr(value)
        raise NreSyntaxError(f"unexpected {what}", pos)


def _fold(op, parts: list) -> Nre:
    e = parts[-1]
    for p in reversed(parts[:-1]):
        e = op(p, e)
    return e


def parse(text: str) -> Nre:
    if not text.strip():
        raise NreSyntaxError("empty expression", 0)
    p = _Parser(text)
    e = p.alt()
    p.take("end")
    return e


# -- rendering ---------------------------------------------------------------

_ALT, _CAT, _POST = 0, 1, 2


def _level(e: Nre) -> int:
    if isinstance(e, Alt):
        return _ALT
    if isinstance(e, Concat):
        return _CAT
    return _POST


def _wrap(e: Nre, min_level: int) -> str:
    s = render(e)
    return s if _level(e) >= min_level else f"({s})"


def render(e: Nre) -> str:
    if isinstance(e, Epsilon):
        return "eps"
    if isinstance(e, Atom):
        return str(e.symbol)
    if isinstance(e, Star):
        return _wrap(e.inner, _POST) + "*"
    if isinstance(e, Nest):
        return f"[{render(e.inner)}]"
    if isinstance(e, Concat):
        return f"{_wrap(e.left, _CAT + 1)} . {_wrap(e.right, _CAT)}"
    return f"{_wrap(e.left, _ALT + 1)} | {_wrap(e.right, _ALT)}"
