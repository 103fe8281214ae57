"""Minimal s-expression reader shared by the formula, order-term and file grammars."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import FormulaSyntaxError


@dataclass(frozen=True)
class Atom:
    text: str
    pos: int = field(default=0, compare=False)
    quoted: bool = False

    def __str__(self):
        return f'"{self.text}"' if self.quoted else self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    pos: int = field(default=0, compare=False)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


SExpr = Union[Atom, SList]

_DELIMS = set('()"; \t\r\n')


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Tokens as ``(kind, value, position)``; kinds: ``(``, ``)``, ``atom``, ``str``."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
        elif ch == ";" or (ch == "#" and (i == 0 or text[i - 1] in "\n")):
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            toks.append((ch, ch, i))
            i += 1
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise FormulaSyntaxError("unterminated string", i, expected='"')
            toks.append(("str", text[i + 1 : j], i))
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in _DELIMS:
                j += 1
            toks.append(("atom", text[i:j], i))
            i = j
    return toks


def read_all(text: str) -> list[SExpr]:
    toks = tokenize(text)
    out = []
    i = 0
    while i < len(toks):
        expr, i = _read(toks, i, text)
        out.append(expr)
    return out


def read_one(text: str) -> SExpr:
    exprs = read_all(text)
    if len(exprs) != 1:
        pos = 0 if not exprs else getattr(exprs[1], "pos", 0)
        raise FormulaSyntaxError(f"expected exactly one expression, found {len(exprs)}", pos, expected="end of input")
    return exprs[0]


def _read(toks, i, text):
    if i >= len(toks):
        raise FormulaSyntaxError("unexpected end of input", len(text), expected="expression")
    kind, val, pos = toks[i]
    if kind == "(":
        items = []
        i += 1
        while True:
            if i >= len(toks):
                raise FormulaSyntaxError("unbalanced parenthesis", pos, expected=")")
            if toks[i][0] == ")":
                return SList(tuple(items), pos), i + 1
            item, i = _read(toks, i, text)
            items.append(item)
    if kind == ")":
        raise FormulaSyntaxError("unexpected ')'", pos, expected="expression")
    return Atom(val, pos, quoted=(kind == "str")), i + 1


def dump(expr) -> str:
    if isinstance(expr, SList):
        return "(" + " ".join(dump(x) for x in expr.items) + ")"
    if isinstance(expr, Atom):
        return str(expr)
    if isinstance(expr, (list, tuple)):
        return "(" + " ".join(dump(x) for x in expr) + ")"
    return str(expr)
