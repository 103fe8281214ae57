"""Finite structures, order structures and surrogate cardinal thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import orders as O
from .errors import ArityError, InvalidElement, SurrogateRequired, UnsupportedAtom
from .formulas import (
    FUNCTION,
    RELATION,
    Aleph0,
    CardToken,
    Finite,
    KappaCard,
    Vocabulary,
    parse_card,
)
from .intervals import IntervalSet


@dataclass(frozen=True)
class Surrogate:
    """Finite stand-ins for infinite cardinal tokens, for brute-force checks.

    ``Surrogate.from_base(n)`` maps aleph0 to n and k_i to n + i, so every
    token's successor is still strictly larger.
    """

    mapping: tuple = ()

    @classmethod
    def from_base(cls, n: int) -> "Surrogate":
        return cls(((Aleph0(), n),) + tuple((KappaCard(i), n + i) for i in range(1, 9)))

    @classmethod
    def parse(cls, text: str) -> "Surrogate":
        """``aleph0=3,k1=5``; unlisted k_i continue upward from the last value."""
        pairs = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, _, val = item.partition("=")
            tok = parse_card(key.strip())
            if isinstance(tok, Finite):
                raise ValueError("surrogates are only given for infinite tokens")
            pairs[tok] = int(val)
        if Aleph0() not in pairs:
            raise ValueError("surrogate map must give aleph0")
        top = pairs[Aleph0()]
        for i in range(1, 9):
            top = pairs.setdefault(KappaCard(i), top + 1)
        return cls(tuple(sorted(pairs.items(), key=lambda kv: kv[1])))

    def threshold(self, tok: CardToken) -> int:
        if isinstance(tok, Finite):
            return tok.n
        for k, v in self.mapping:
            if k == tok:
                return v
        raise SurrogateRequired(f"no surrogate value for {tok}")

    def __str__(self):
        return ",".join(f"{k}={v}" for k, v in self.mapping[:3])


def threshold(tok: CardToken, surrogate: Optional[Surrogate]) -> int:
    if isinstance(tok, Finite):
        return tok.n
    if surrogate is None:
        raise SurrogateRequired(f"cardinal token {tok} needs surrogate mode on a finite structure")
    return surrogate.threshold(tok)


# finite structures ------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteStructure:
    vocab: Vocabulary
    universe: tuple
    relations: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        uni = set(self.universe)
        rels = {}
        for name, tuples in self.relations.items():
            sym = self.vocab.get(name)
            if sym is None or sym.kind != RELATION:
                raise ArityError(f"{name} is not a relation of the vocabulary")
            ts = frozenset(tuple(t) for t in tuples)
            for t in ts:
                if len(t) != sym.arity or not set(t) <= uni:
                    raise ArityError(f"bad tuple {t} for {name}/{sym.arity}")
            rels[name] = ts
        for name, sym in self.vocab.items():
            if sym.kind == RELATION:
                rels.setdefault(name, frozenset())
        object.__setattr__(self, "relations", rels)
        funcs = {}
        for key, table in self.functions.items():
            name = key[0] if isinstance(key, tuple) else key
            sym = self.vocab.get(name)
            if sym is None or sym.kind != FUNCTION:
                raise ArityError(f"{name} is not a function of the vocabulary")
            tab = {tuple(k) if isinstance(k, (tuple, list)) else (k,): v for k, v in dict(table).items()}
            for k, v in tab.items():
                if len(k) != sym.arity or not set(k) <= uni or v not in uni:
                    raise ArityError(f"bad entry {k}->{v} for {name}")
            funcs[key if isinstance(key, tuple) else (key, None)] = tab
        object.__setattr__(self, "functions", funcs)

    def __hash__(self):
        return hash((self.universe, tuple(sorted((k, tuple(sorted(v, key=repr))) for k, v in self.relations.items()))))

    def is_total(self) -> bool:
        from itertools import product

        for (name, _), tab in self.functions.items():
            ar = self.vocab[name].arity
            if any(k not in tab for k in product(self.universe, repeat=ar)):
                return False
        return True

    def function(self, name, index=None) -> dict:
        try:
            return self.functions[(name, index)]
        except KeyError:
            raise InvalidElement(f"no interpretation for function {name}{'' if index is None else [index]}") from None

    def restrict(self, subset) -> "FiniteStructure":
        """Induced substructure (function tables must be closed on ``subset``)."""
        sub = [a for a in self.universe if a in set(subset)]
        s = set(sub)
        rels = {n: {t for t in ts if set(t) <= s} for n, ts in self.relations.items()}
        funcs = {k: {a: b for a, b in tab.items() if set(a) <= s} for k, tab in self.functions.items()}
        for tab in funcs.values():
            if any(b not in s for b in tab.values()):
                raise ValueError("subset is not closed under the functions")
        return FiniteStructure(self.vocab, sub, rels, funcs)

    def reduct(self, vocab: Vocabulary) -> "FiniteStructure":
        rels = {n: ts for n, ts in self.relations.items() if n in vocab}
        funcs = {k: t for k, t in self.functions.items() if k[0] in vocab}
        return FiniteStructure(vocab, self.universe, rels, funcs)

    def expand(self, vocab: Vocabulary, relations=None, functions=None) -> "FiniteStructure":
        rels = dict(self.relations)
        rels.update(relations or {})
        funcs = dict(self.functions)
        funcs.update(functions or {})
        return FiniteStructure(vocab, self.universe, rels, funcs)


# order structures ------------------------------------------------------------------


@dataclass(frozen=True)
class OrderStructure:
    """A symbolic linear order with interval predicates, finitely supported
    tag relations and named constants.  ``<`` is the carrier order."""

    vocab: Vocabulary
    carrier: O.OrderTerm
    preds: dict = field(default_factory=dict)
    tags: dict = field(default_factory=dict)
    consts: dict = field(default_factory=dict)

    def __post_init__(self):
        carrier = O.normalize(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        if "<" not in self.vocab:
            raise UnsupportedAtom("order structures need the binary relation <")
        preds = {}
        for name, s in self.preds.items():
            if not isinstance(s, IntervalSet) or s.owner != carrier:
                raise InvalidElement(f"predicate {name} must be an interval set over the carrier")
            preds[name] = s
        tags = {}
        for name, tuples in self.tags.items():
            sym = self.vocab.get(name)
            if sym is None or sym.kind != RELATION:
                raise ArityError(f"tag {name} is not a relation of the vocabulary")
            ts = frozenset(tuple(t) for t in tuples)
            for t in ts:
                if len(t) != sym.arity:
                    raise ArityError(f"tag tuple {t} has the wrong length for {name}/{sym.arity}")
                for e in t:
                    O.validate(carrier, e)
            tags[name] = ts
        for name, e in self.consts.items():
            O.validate(carrier, e)
        for name, sym in self.vocab.items():
            if name == "<":
                if sym.kind != RELATION or sym.arity != 2:
                    raise UnsupportedAtom("< must be a binary relation")
                continue
            if sym.kind == FUNCTION:
                if sym.arity != 0:
                    raise UnsupportedAtom(f"function {name} is not allowed over an order structure")
                if name not in self.consts:
                    raise InvalidElement(f"constant {name} has no interpretation")
            elif name in preds:
                if sym.arity != 1:
                    raise ArityError(f"predicate {name} must be unary")
            else:
                tags.setdefault(name, frozenset())
        object.__setattr__(self, "preds", preds)
        object.__setattr__(self, "tags", tags)
        object.__setattr__(self, "consts", dict(self.consts))

    def __hash__(self):
        return hash((self.carrier, tuple(sorted(self.preds)), tuple(sorted(self.tags))))

    def with_tags(self, vocab: Vocabulary, tags: dict) -> "OrderStructure":
        t = dict(self.tags)
        t.update(tags)
        return OrderStructure(vocab, self.carrier, self.preds, t, self.consts)


def order_vocab(preds=(), tags=None, consts=()) -> Vocabulary:
    rels = {"<": 2}
    rels.update({p: 1 for p in preds})
    rels.update(dict(tags or {}))
    return Vocabulary.of(relations=rels, constants=consts)


def pure_order(carrier, tags=None) -> OrderStructure:
    """``(carrier, <)`` with optional tag relations ``{name: tuples}``."""
    tags = dict(tags or {})
    arities = {n: (len(next(iter(ts))) if ts else 0) for n, ts in tags.items()}
    return OrderStructure(order_vocab(tags=arities), carrier, {}, tags)
