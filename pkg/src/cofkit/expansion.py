"""Search for function interpretations that make a sentence true.

Function tables are filled lazily.  Atoms that consult a missing entry are
unknown, and the search branches over the universe for the first such entry
only when the sentence as a whole is still undecided.  A decided result with
a partial table holds for every completion, so the search is exact.
"""

from __future__ import annotations

from itertools import product
from typing import Optional

from .analysis import miniscope
from .errors import BudgetExceeded
from .finite_eval import FiniteEvaluator, SchemaContext, resolve_index
from .formulas import (
    RELATION, And, App, BigAnd, BigOr, Eq, Exists, ExistsBlock, Forall, Iff, Implies, Not, Or, Rel,
    Vocabulary,
)
from .structures import FiniteStructure


class _Need(Exception):
    def __init__(self, key):
        self.key = key


def _kleene_and(values):
    unknown = False
    for v in values:
        if v is False:
            return False
        if v is None:
            unknown = True
    return None if unknown else True


def _kleene_or(values):
    unknown = False
    for v in values:
        if v is True:
            return True
        if v is None:
            unknown = True
    return None if unknown else False


def _kleene_not(v):
    return None if v is None else not v


class _PartialEvaluator(FiniteEvaluator):
    """Three-valued evaluation: a missing table entry makes an atom unknown.

    Connectives and first-order quantifiers decide as soon as the known parts
    allow it.  Inside generalized quantifiers any missing entry makes the
    whole quantifier unknown.
    """

    def __init__(self, M, open_symbols, tables, ctx=None):
        super().__init__(M, ctx)
        self.open = set(open_symbols)
        self.tables = tables
        self.pending = None
        self.strict = False

    def term(self, t, env, ienv):
        if isinstance(t, App) and t.fn in self.open:
            key = (t.fn, resolve_index(t.index, ienv), tuple(self.term(a, env, ienv) for a in t.args))
            try:
                return self.tables[key]
            except KeyError:
                raise _Need(key) from None
        return super().term(t, env, ienv)

    def eval(self, f, env=None, ienv=None):
        self.pending = None
        return self._ev(f, dict(env or {}), dict(ienv or {}))

    def _unknown(self, key):
        if self.pending is None:
            self.pending = key
        return None

    def _ev(self, f, env, ienv):
        if self.strict:
            return super()._ev(f, env, ienv)
        ev = self._ev
        if isinstance(f, (Rel, Eq)):
            try:
                return super()._ev(f, env, ienv)
            except _Need as need:
                return self._unknown(need.key)
        if isinstance(f, Not):
            return _kleene_not(ev(f.body, env, ienv))
        if isinstance(f, And):
            return _kleene_and(ev(p, env, ienv) for p in f.parts)
        if isinstance(f, Or):
            return _kleene_or(ev(p, env, ienv) for p in f.parts)
        if isinstance(f, Implies):
            return _kleene_or((_kleene_not(ev(f.left, env, ienv)), ev(f.right, env, ienv)))
        if isinstance(f, Iff):
            a, b = ev(f.left, env, ienv), ev(f.right, env, ienv)
            return None if a is None or b is None else a == b
        universe = self.M.universe
        if isinstance(f, (Exists, Forall)):
            combine = _kleene_or if isinstance(f, Exists) else _kleene_and
            return combine(ev(f.body, self._bind(env, f.vars, vals), ienv)
                           for vals in product(universe, repeat=len(f.vars)))
        if isinstance(f, (BigAnd, BigOr)):
            n = self.ctx.bound(f.bound, ienv)
            combine = _kleene_and if isinstance(f, BigAnd) else _kleene_or
            return combine(ev(f.body, env, {**ienv, f.ivar: k}) for k in range(n))
        if isinstance(f, ExistsBlock):
            n = self.ctx.bound(f.bound, ienv)
            keys = [(f.family, k) for k in range(n)]
            return _kleene_or(ev(f.body, self._bind(env, keys, vals), ienv)
                              for vals in product(universe, repeat=n))
        self.strict = True
        try:
            return super()._ev(f, env, ienv)
        except _Need as need:
            return self._unknown(need.key)
        finally:
            self.strict = False


def expansion_exists(M: FiniteStructure, sentence, open_symbols, ctx: Optional[SchemaContext] = None,
                     limit: int = 200000, initial: Optional[dict] = None, choices=None,
                     simplify: bool = True) -> Optional[dict]:
    """A satisfying partial table ``{(fn, index, args): value}``, or None.

    Entries never consulted by the evaluation may be left unset; any value
    works for them.  ``initial`` fixes entries in advance and ``choices(key)``
    narrows the values tried for an entry.  Pass ``simplify=False`` when the
    sentence is already miniscoped.
    """
    if simplify:
        sentence = miniscope(sentence)
    tables: dict = dict(initial or {})
    ev = _PartialEvaluator(M, open_symbols, tables, ctx)
    steps = [0]

    def search():
        steps[0] += 1
        if steps[0] > limit:
            raise BudgetExceeded(f"expansion search exceeded {limit} steps")
        ok = ev.eval(sentence)
        if ok is not None:
            return ok
        key = ev.pending
        for v in (choices(key) if choices else M.universe):
            tables[key] = v
            if search():
                return True
        del tables[key]
        return False

    return dict(tables) if search() else None


def all_structures(vocab: Vocabulary, n: int):
    """Every relational structure over ``vocab`` with universe ``0..n-1``."""
    universe = tuple(range(n))
    rels = [(name, sym.arity) for name, sym in vocab.items() if sym.kind == RELATION]
    choices = []
    for name, ar in rels:
        tuples = list(product(universe, repeat=ar))
        choices.append([(name, {t for k, t in enumerate(tuples) if mask >> k & 1}) for mask in range(2 ** len(tuples))])
    for combo in product(*choices):
        yield FiniteStructure(vocab, universe, dict(combo))


def relation_expansions(M: FiniteStructure, vocab: Vocabulary, names):
    """``M`` expanded to ``vocab`` by every interpretation of the relations ``names``."""
    universe = tuple(M.universe)
    choices = []
    for name in names:
        tuples = list(product(universe, repeat=vocab[name].arity))
        choices.append([(name, {t for k, t in enumerate(tuples) if mask >> k & 1}) for mask in range(2 ** len(tuples))])
    for combo in product(*choices):
        yield FiniteStructure(vocab, universe, {**M.relations, **dict(combo)})


_PREPARED: dict = {}


def _prepared(theory):
    key = tuple(theory.sentences)
    if key not in _PREPARED:
        _PREPARED.clear()
        _PREPARED[key] = miniscope(And(key))
    return _PREPARED[key]


def satisfiable_by_expansion(M: FiniteStructure, theory, ctx: Optional[SchemaContext] = None,
                             limit: int = 200000) -> bool:
    """Does some expansion of ``M`` to ``theory.vocab`` satisfy every sentence?

    Relations missing from ``M`` are enumerated; missing functions are searched lazily.
    """
    vocab = theory.vocab
    new_rels = [n for n, s in vocab.items() if s.kind == RELATION and n not in M.vocab]
    open_fns = [n for n, s in vocab.items() if s.kind != RELATION and n not in M.vocab]
    sentence = _prepared(theory)
    for E in relation_expansions(M, vocab, new_rels):
        if expansion_exists(E, sentence, open_fns, ctx, limit, simplify=False) is not None:
            return True
    return False


def compare_by_expansion(original, skolemized, vocab: Vocabulary, open_symbols, max_size: int = 3,
                         ctx: Optional[SchemaContext] = None):
    """Disagreements ``(size, structure)`` between truth of ``original`` and
    satisfiability of ``skolemized`` by some expansion."""
    bad = []
    checked = 0
    for n in range(1, max_size + 1):
        for M in all_structures(vocab, n):
            checked += 1
            truth = FiniteEvaluator(M, ctx).eval(original)
            found = expansion_exists(M, skolemized, open_symbols, ctx) is not None
            if truth != found:
                bad.append((n, M))
    return checked, bad


def compare_theory(T, universal_T, max_size: int = 3, ctx: Optional[SchemaContext] = None):
    """Count structures over ``T.vocab`` where ``T``'s truth differs from
    satisfiability of ``universal_T`` by expansion."""
    bad = []
    checked = 0
    for n in range(1, max_size + 1):
        for M in all_structures(T.vocab, n):
            checked += 1
            ev = FiniteEvaluator(M, ctx)
            truth = all(ev.eval(s) for s in T.sentences)
            if truth != satisfiable_by_expansion(M, universal_T, ctx):
                bad.append((n, M))
    return checked, bad
