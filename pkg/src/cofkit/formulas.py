"""Formula AST for first-order logic with infinitary junctions and the
cofinality / cardinality / equivalence-class quantifiers.

Infinitary junctions are schematic: ``BigAnd("n", Aleph0(), body)`` is the
conjunction of ``body`` over ``n < omega``.  Variables may carry an index
(``x[n+1]``) and so may function symbols (``F[i]``), which is how families
such as ``<x_i : i < kappa>`` are written without materializing them.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from .errors import (
    ArityError,
    FormulaSyntaxError,
    FreeVarPolicyError,
    QuantifierArityError,
    UnknownSymbol,
)
from .orders import parse_coftag
from .sexpr import Atom, SList, read_one

STANDARD = "standard"
PAREN = "paren"
MODES = (STANDARD, PAREN)


# cardinal tokens ---------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Finite:
    n: int

    def __str__(self):
        return f"fin{self.n}"


@dataclass(frozen=True, order=True)
class Aleph0:
    def __str__(self):
        return "aleph0"


@dataclass(frozen=True, order=True)
class KappaCard:
    i: int

    def __str__(self):
        return f"k{self.i}"


CardToken = Union[Finite, Aleph0, KappaCard]
ALEPH0 = Aleph0()


def card_rank(t: CardToken) -> tuple:
    if isinstance(t, Finite):
        return (0, t.n)
    if isinstance(t, Aleph0):
        return (1, 0)
    return (1, t.i)


def is_infinite(t) -> bool:
    return isinstance(t, (Aleph0, KappaCard))


def parse_card(text: str, pos: int = 0) -> CardToken:
    if text in ("aleph0", "w"):
        return ALEPH0
    m = re.fullmatch(r"fin(\d+)", text)
    if m:
        return Finite(int(m.group(1)))
    m = re.fullmatch(r"k([1-9]\d*)", text)
    if m:
        return KappaCard(int(m.group(1)))
    raise FormulaSyntaxError(f"bad cardinal token {text!r}", pos, expected="fin<n>, aleph0 or k<i>")


# vocabulary ----------------------------------------------------------------------

RELATION, FUNCTION = "relation", "function"


@dataclass(frozen=True)
class Symbol:
    kind: str
    arity: int
    indexed: bool = False


class Vocabulary:
    """Relation and function symbols; constants are 0-ary functions."""

    def __init__(self, symbols=None):
        self._syms: dict[str, Symbol] = dict(symbols or {})
        for name, s in self._syms.items():
            if s.arity < 0:
                raise ArityError(f"negative arity for {name}")

    @classmethod
    def of(cls, relations=(), functions=(), constants=()):
        syms = {}
        for name, ar in dict(relations).items():
            syms[name] = Symbol(RELATION, ar)
        for name, ar in dict(functions).items():
            syms[name] = Symbol(FUNCTION, ar)
        for name in constants:
            syms[name] = Symbol(FUNCTION, 0)
        return cls(syms)

    def __contains__(self, name):
        return name in self._syms

    def __getitem__(self, name) -> Symbol:
        return self._syms[name]

    def get(self, name):
        return self._syms.get(name)

    def __iter__(self):
        return iter(sorted(self._syms))

    def __len__(self):
        return len(self._syms)

    def items(self):
        return sorted(self._syms.items())

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self._syms == other._syms

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        return f"Vocabulary({', '.join(f'{n}/{s.arity}' for n, s in self.items())})"

    def add(self, name, kind, arity, indexed=False) -> "Vocabulary":
        old = self._syms.get(name)
        new = Symbol(kind, arity, indexed)
        if old is not None and old != new:
            raise ArityError(f"symbol {name} redeclared with a different signature")
        syms = dict(self._syms)
        syms[name] = new
        return Vocabulary(syms)

    def union(self, other: "Vocabulary") -> "Vocabulary":
        out = self
        for name, s in other.items():
            out = out.add(name, s.kind, s.arity, s.indexed)
        return out

    def relations(self):
        return [(n, s.arity) for n, s in self.items() if s.kind == RELATION]

    def functions(self):
        return [(n, s.arity) for n, s in self.items() if s.kind == FUNCTION]


# indices and terms ---------------------------------------------------------------


@dataclass(frozen=True)
class Idx:
    """``var + off``; ``var=None`` is a literal index.  ``below`` marks the
    set of all indices ``i + off`` with ``i < var`` (free-variable bookkeeping
    only), and ``var='*'`` an unbounded family."""

    var: Optional[str]
    off: int = 0
    below: bool = False

    def __str__(self):
        if self.var is None:
            return str(self.off)
        if self.var == "*":
            return "*"
        s = f"<{self.var}" if self.below else self.var
        return f"{s}+{self.off}" if self.off else s


STAR = Idx("*")


@dataclass(frozen=True)
class Var:
    name: str
    index: Optional[Idx] = None

    def __str__(self):
        return self.name if self.index is None else f"{self.name}[{self.index}]"


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()
    index: Optional[Idx] = None

    def __str__(self):
        head = self.fn if self.index is None else f"{self.fn}[{self.index}]"
        return head if not self.args else f"({head} {' '.join(map(str, self.args))})"


Term = Union[Var, App]


def term_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t])
    out = frozenset()
    for a in t.args:
        out |= term_vars(a)
    return out


def term_index_vars(t) -> set:
    out = set()
    if t.index is not None and t.index.var is not None:
        out.add(t.index.var)
    if isinstance(t, App):
        for a in t.args:
            out |= term_index_vars(a)
    return out


# formulas --------------------------------------------------------------------------


class Formula:
    """Base class.  ``fv`` is the cached free-variable set."""

    @cached_property
    def fv(self) -> frozenset:
        return _compute_fv(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple = ()


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple = ()


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple
    body: Formula


@dataclass(frozen=True)
class QCof(Formula):
    tags: tuple
    xs: tuple
    ys: tuple
    body: Formula

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise QuantifierArityError("qcof needs tuples of equal length")
        if not self.xs:
            raise QuantifierArityError("qcof needs at least one variable per side")
        object.__setattr__(self, "tags", tuple(sorted(set(self.tags))))


@dataclass(frozen=True)
class QCard(Formula):
    token: CardToken
    xs: tuple
    body: Formula


@dataclass(frozen=True)
class QEc(Formula):
    token: CardToken
    xs: tuple
    ys: tuple
    body: Formula

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or not self.xs:
            raise QuantifierArityError("qec needs nonempty tuples of equal length")


@dataclass(frozen=True)
class BigAnd(Formula):
    """Conjunction of ``body`` over ``ivar < bound``; ``bound`` is a cardinal
    token or the name of an enclosing index variable."""

    ivar: str
    bound: object
    body: Formula


@dataclass(frozen=True)
class BigOr(Formula):
    ivar: str
    bound: object
    body: Formula


@dataclass(frozen=True)
class ExistsBlock(Formula):
    """``exists <family[i] : i < bound>``; internal only (never parsed)."""

    family: str
    bound: CardToken
    body: Formula


TRUE = And(())
FALSE = Or(())

QUANTIFIER_NODES = (QCof, QCard, QEc)
BINDERS = (Exists, Forall)


def children(f) -> tuple:
    if isinstance(f, (Rel, Eq)):
        return ()
    if isinstance(f, (And, Or)):
        return f.parts
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    return (f.body,)


def with_children(f, kids):
    if isinstance(f, (Rel, Eq)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(tuple(kids))
    if isinstance(f, (Implies, Iff)):
        return type(f)(kids[0], kids[1])
    (b,) = kids
    if isinstance(f, Not):
        return Not(b)
    if isinstance(f, BINDERS):
        return type(f)(f.vars, b)
    if isinstance(f, QCof):
        return QCof(f.tags, f.xs, f.ys, b)
    if isinstance(f, QCard):
        return QCard(f.token, f.xs, b)
    if isinstance(f, QEc):
        return QEc(f.token, f.xs, f.ys, b)
    if isinstance(f, (BigAnd, BigOr)):
        return type(f)(f.ivar, f.bound, b)
    if isinstance(f, ExistsBlock):
        return ExistsBlock(f.family, f.bound, b)
    raise TypeError(f)


def bound_vars(f) -> tuple:
    if isinstance(f, BINDERS):
        return f.vars
    if isinstance(f, (QCof, QEc)):
        return f.xs + f.ys
    if isinstance(f, QCard):
        return f.xs
    return ()


# free variables ------------------------------------------------------------------


def _compute_fv(f) -> frozenset:
    if isinstance(f, Rel):
        out = frozenset()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    kids = frozenset().union(*(c.fv for c in children(f)))
    names = set(bound_vars(f))
    if names:
        return frozenset(v for v in kids if not (v.index is None and v.name in names))
    if isinstance(f, (BigAnd, BigOr)):
        return frozenset(_close_index(kids, f.ivar, f.bound))
    if isinstance(f, ExistsBlock):
        return frozenset(v for v in kids if not (v.name == f.family and v.index is not None))
    return kids


def _close_index(vs, ivar, bound):
    for v in vs:
        ix = v.index
        if ix is None or ix.var != ivar:
            yield v
        elif isinstance(bound, Finite):
            top = bound.n - 1 if ix.below else bound.n
            for k in range(top):
                yield Var(v.name, Idx(None, k + ix.off))
        elif isinstance(bound, str):
            yield Var(v.name, Idx(bound, ix.off, below=True))
        else:
            yield Var(v.name, STAR)


def compute_free_vars(f) -> frozenset:
    """Uncached recomputation, for checking the node caches."""
    if isinstance(f, (Rel, Eq)):
        return _compute_fv(f)
    shadow = with_children(f, [_Fresh(compute_free_vars(c)) for c in children(f)])
    return _compute_fv(shadow)


class _Fresh(Formula):
    def __init__(self, fv):
        self.__dict__["fv"] = fv


def has_infinite_family(vs) -> bool:
    return any(v.index is not None and v.index.var is not None for v in vs)


def is_schematic_free(vs) -> bool:
    return any(v.index == STAR for v in vs)


# fresh names -------------------------------------------------------------------------

_local = threading.local()


def fresh(prefix: str = "v") -> str:
    n = getattr(_local, "counter", 0)
    _local.counter = n + 1
    return f"${prefix}{n}"


def reset_fresh():
    _local.counter = 0


# parsing -------------------------------------------------------------------------------

_IDX = re.compile(r"^([^\[\]]+)\[(?:([A-Za-z_][A-Za-z0-9_]*)(?:\+(\d+))?|(\d+))\]$")
_KEYWORDS = {
    "not", "and", "or", "->", "<->", "exists", "forall", "qcof", "qcard", "qec",
    "bigand", "bigor", "exists-block", "=",
}


class _Parser:
    def __init__(self, vocab: Vocabulary, mode: str, allow_reserved: bool):
        if mode not in MODES:
            raise ValueError(f"unknown logic mode {mode!r}")
        self.vocab = vocab
        self.mode = mode
        self.allow_reserved = allow_reserved

    def name(self, a, what="variable") -> str:
        if not isinstance(a, Atom) or a.quoted:
            raise FormulaSyntaxError(f"expected a {what}", a.pos, expected=what)
        if a.text.startswith("$") and not self.allow_reserved:
            raise FormulaSyntaxError(f"identifier {a.text!r} uses the reserved prefix '$'", a.pos, expected=what)
        if a.text in _KEYWORDS or "[" in a.text:
            raise FormulaSyntaxError(f"{a.text!r} is not a {what}", a.pos, expected=what)
        return a.text

    def var_list(self, x) -> tuple:
        if not isinstance(x, SList):
            raise FormulaSyntaxError("expected a variable list", x.pos, expected="(")
        names = tuple(self.name(a) for a in x)
        if len(set(names)) != len(names):
            raise FormulaSyntaxError("repeated variable in binder", x.pos)
        return names

    def split_index(self, a: Atom, scope):
        m = _IDX.match(a.text)
        if not m:
            return a.text, None
        base, ivar, off, lit = m.groups()
        if lit is not None:
            return base, Idx(None, int(lit))
        if ivar not in scope:
            raise FormulaSyntaxError(f"index variable {ivar!r} is not bound by a junction", a.pos)
        return base, Idx(ivar, int(off or 0))

    def term(self, x, scope) -> Term:
        if isinstance(x, Atom):
            if x.quoted:
                raise FormulaSyntaxError("unexpected string", x.pos, expected="term")
            base, ix = self.split_index(x, scope)
            sym = self.vocab.get(base)
            if sym is not None:
                if sym.kind != FUNCTION:
                    raise FormulaSyntaxError(f"relation {base} used as a term", x.pos, expected="term")
                if sym.arity != 0:
                    raise ArityError(f"{base} expects {sym.arity} arguments, got 0", position=x.pos)
                return App(base, (), ix)
            if base.startswith("$") and not self.allow_reserved:
                raise FormulaSyntaxError(f"identifier {base!r} uses the reserved prefix '$'", x.pos)
            if base in _KEYWORDS:
                raise FormulaSyntaxError(f"keyword {base!r} used as a term", x.pos, expected="term")
            return Var(base, ix)
        if not x.items:
            raise FormulaSyntaxError("empty term", x.pos, expected="term")
        head = x[0]
        if not isinstance(head, Atom):
            raise FormulaSyntaxError("expected a function symbol", x.pos, expected="function symbol")
        base, ix = self.split_index(head, scope)
        sym = self.vocab.get(base)
        if sym is None or sym.kind != FUNCTION:
            raise UnknownSymbol(f"unknown function symbol {base!r}", position=head.pos)
        args = tuple(self.term(a, scope) for a in x.items[1:])
        if len(args) != sym.arity:
            raise ArityError(f"{base} expects {sym.arity} arguments, got {len(args)}", position=x.pos)
        return App(base, args, ix)

    def formula(self, x, scope=frozenset()) -> Formula:
        if isinstance(x, Atom):
            sym = self.vocab.get(x.text)
            if sym is not None and sym.kind == RELATION and sym.arity == 0:
                return Rel(x.text, ())
            if x.text == "true":
                return TRUE
            if x.text == "false":
                return FALSE
            raise FormulaSyntaxError(f"expected a formula, got {x.text!r}", x.pos, expected="(")
        if not x.items:
            raise FormulaSyntaxError("empty formula", x.pos, expected="formula")
        head = x[0]
        if not isinstance(head, Atom):
            raise FormulaSyntaxError("expected an operator", head.pos, expected="operator")
        op, args = head.text, x.items[1:]

        def need(n):
            if len(args) != n:
                raise FormulaSyntaxError(f"{op} takes {n} arguments, got {len(args)}", x.pos)

        if op == "not":
            need(1)
            return Not(self.formula(args[0], scope))
        if op in ("and", "or"):
            parts = tuple(self.formula(a, scope) for a in args)
            return And(parts) if op == "and" else Or(parts)
        if op in ("->", "<->"):
            need(2)
            l, r = self.formula(args[0], scope), self.formula(args[1], scope)
            return Implies(l, r) if op == "->" else Iff(l, r)
        if op in ("exists", "forall"):
            need(2)
            vs = self.var_list(args[0])
            body = self.formula(args[1], scope)
            return Exists(vs, body) if op == "exists" else Forall(vs, body)
        if op == "qcof":
            need(4)
            if not isinstance(args[0], SList):
                raise FormulaSyntaxError("expected a list of cofinality tags", args[0].pos, expected="(")
            tags = []
            for a in args[0]:
                try:
                    tags.append(parse_coftag(a.text))
                except Exception:
                    raise FormulaSyntaxError(f"bad cofinality tag {a}", a.pos, expected="w or k<i>") from None
            xs, ys = self.var_list(args[1]), self.var_list(args[2])
            if len(xs) != len(ys) or not xs:
                raise QuantifierArityError("qcof needs nonempty x and y tuples of equal length", position=x.pos)
            return QCof(tuple(tags), xs, ys, self.formula(args[3], scope))
        if op == "qcard":
            need(3)
            tok = parse_card(args[0].text, args[0].pos) if isinstance(args[0], Atom) else None
            if tok is None:
                raise FormulaSyntaxError("expected a cardinal token", args[0].pos, expected="cardinal")
            return QCard(tok, self.var_list(args[1]), self.formula(args[2], scope))
        if op == "qec":
            need(4)
            if not isinstance(args[0], Atom):
                raise FormulaSyntaxError("expected a cardinal token", args[0].pos, expected="cardinal")
            tok = parse_card(args[0].text, args[0].pos)
            xs, ys = self.var_list(args[1]), self.var_list(args[2])
            if len(xs) != len(ys) or not xs:
                raise QuantifierArityError("qec needs nonempty x and y tuples of equal length", position=x.pos)
            return QEc(tok, xs, ys, self.formula(args[3], scope))
        if op in ("bigand", "bigor"):
            need(2)
            spec = args[0]
            if not (isinstance(spec, SList) and len(spec) == 2):
                raise FormulaSyntaxError("expected (index bound)", spec.pos, expected="(index bound)")
            ivar = self.name(spec[0], "index variable")
            btext = spec[1].text if isinstance(spec[1], Atom) else None
            if btext is None:
                raise FormulaSyntaxError("expected a bound", spec[1].pos, expected="bound")
            bound = btext if btext in scope else parse_card(btext, spec[1].pos)
            body = self.formula(args[1], scope | {ivar})
            node = BigAnd(ivar, bound, body) if op == "bigand" else BigOr(ivar, bound, body)
            if self.mode == STANDARD and is_infinite(bound) and is_schematic_free(node.fv):
                raise FreeVarPolicyError(
                    "infinitary junction with infinitely many free variables is not allowed in standard mode",
                    position=x.pos,
                )
            return node
        if op == "exists-block":
            raise QuantifierArityError(
                "infinite quantifier blocks are not part of the finitary-quantifier logics", position=x.pos
            )
        if op == "=":
            need(2)
            return Eq(self.term(args[0], scope), self.term(args[1], scope))
        sym = self.vocab.get(op)
        if sym is None:
            raise UnknownSymbol(f"unknown relation symbol {op!r}", position=head.pos)
        if sym.kind != RELATION:
            raise FormulaSyntaxError(f"function {op} used as a formula", head.pos, expected="relation")
        terms = tuple(self.term(a, scope) for a in args)
        if len(terms) != sym.arity:
            raise ArityError(f"{op} expects {sym.arity} arguments, got {len(terms)}", position=x.pos)
        return Rel(op, terms)


def parse(text, vocab: Vocabulary, mode: str = STANDARD, allow_reserved: bool = False) -> Formula:
    expr = read_one(text) if isinstance(text, str) else text
    return _Parser(vocab, mode, allow_reserved).formula(expr)


def check_policy(f: Formula, mode: str):
    """Raise FreeVarPolicyError if ``f`` is not a formula of the given mode."""
    if mode == PAREN:
        return
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (BigAnd, BigOr)) and is_infinite(g.bound) and is_schematic_free(g.fv):
            raise FreeVarPolicyError("infinitary junction with infinitely many free variables")
        stack.extend(children(g))


# printing ----------------------------------------------------------------------------------


def term_text(t) -> str:
    return str(t)


def _bound_text(b) -> str:
    return b if isinstance(b, str) else str(b)


def to_text(f) -> str:
    if isinstance(f, Rel):
        return f"({' '.join([f.name] + [term_text(a) for a in f.args])})"
    if isinstance(f, Eq):
        return f"(= {term_text(f.left)} {term_text(f.right)})"
    if isinstance(f, Not):
        return f"(not {to_text(f.body)})"
    if isinstance(f, (And, Or)):
        op = "and" if isinstance(f, And) else "or"
        return "(" + " ".join([op] + [to_text(p) for p in f.parts]) + ")"
    if isinstance(f, Implies):
        return f"(-> {to_text(f.left)} {to_text(f.right)})"
    if isinstance(f, Iff):
        return f"(<-> {to_text(f.left)} {to_text(f.right)})"
    if isinstance(f, (Exists, Forall)):
        op = "exists" if isinstance(f, Exists) else "forall"
        return f"({op} ({' '.join(f.vars)}) {to_text(f.body)})"
    if isinstance(f, QCof):
        return f"(qcof ({' '.join(map(str, f.tags))}) ({' '.join(f.xs)}) ({' '.join(f.ys)}) {to_text(f.body)})"
    if isinstance(f, QCard):
        return f"(qcard {f.token} ({' '.join(f.xs)}) {to_text(f.body)})"
    if isinstance(f, QEc):
        return f"(qec {f.token} ({' '.join(f.xs)}) ({' '.join(f.ys)}) {to_text(f.body)})"
    if isinstance(f, (BigAnd, BigOr)):
        op = "bigand" if isinstance(f, BigAnd) else "bigor"
        return f"({op} ({f.ivar} {_bound_text(f.bound)}) {to_text(f.body)})"
    if isinstance(f, ExistsBlock):
        return f"(exists-block ({f.family} {f.bound}) {to_text(f.body)})"
    raise TypeError(f)


def pretty(f, width: int = 88, indent: int = 0) -> str:
    """Multi-line layout of ``to_text``; parses back to the same formula."""
    flat = to_text(f)
    if len(flat) + indent <= width or isinstance(f, (Rel, Eq)):
        return flat
    pad = " " * (indent + 2)
    kids = children(f)
    head = flat[: len(flat) - len(to_text(kids[-1])) - 1] if len(kids) == 1 else None
    if head is not None:
        return head.rstrip() + "\n" + pad + pretty(kids[0], width, indent + 2) + ")"
    op = {And: "and", Or: "or", Implies: "->", Iff: "<->"}[type(f)]
    return "(" + op + "".join("\n" + pad + pretty(k, width, indent + 2) for k in kids) + ")"


# theories -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Theory:
    vocab: Vocabulary
    sentences: tuple = ()
    mode: str = STANDARD

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        for s in self.sentences:
            if s.fv:
                raise FreeVarPolicyError(
                    f"sentence has free variables {sorted(map(str, s.fv))}: {to_text(s)}"
                )
            check_policy(s, self.mode)


@dataclass(frozen=True)
class Fragment:
    vocab: Vocabulary
    formulas: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for f in self.formulas:
            for c in children(f):
                if c not in self.formulas:
                    raise ValueError("fragment is not closed under subformulas")
