"""Exhaustive model checking over finite structures."""

from __future__ import annotations

from itertools import product
from typing import Optional

from .errors import EvaluationError, SchemaBudgetExceeded
from .formulas import (
    And,
    BigAnd,
    BigOr,
    Eq,
    Exists,
    ExistsBlock,
    Finite,
    Forall,
    Idx,
    Iff,
    Implies,
    Not,
    Or,
    QCard,
    QCof,
    QEc,
    Rel,
    Var,
)
from .structures import FiniteStructure, Surrogate, threshold

LINEAR_NO_LAST = "LinearNoLast"
LINEAR_WITH_LAST = "LinearWithLast"
NOT_LINEAR = "NotLinear"


class SchemaContext:
    """Shared settings for schema instantiation; records truncation."""

    def __init__(self, surrogate: Optional[Surrogate] = None, budget: int = 64, truncate: bool = False):
        self.surrogate = surrogate
        self.budget = budget
        self.truncate = truncate
        self.truncated = False

    def bound(self, b, ienv) -> int:
        if isinstance(b, str):
            return ienv[b]
        if isinstance(b, Finite):
            return b.n
        if self.surrogate is not None:
            return self.surrogate.threshold(b)
        if self.truncate:
            self.truncated = True
            return self.budget
        raise SchemaBudgetExceeded(f"junction over {b} needs surrogate mode or truncation")


def resolve_index(ix: Optional[Idx], ienv) -> Optional[int]:
    if ix is None:
        return None
    if ix.var is None:
        return ix.off
    try:
        return ienv[ix.var] + ix.off
    except KeyError:
        raise EvaluationError(f"unbound index variable {ix.var}") from None


def var_key(v: Var, ienv):
    return v.name if v.index is None else (v.name, resolve_index(v.index, ienv))


class FiniteEvaluator:
    def __init__(self, M: FiniteStructure, ctx: Optional[SchemaContext] = None):
        self.M = M
        self.ctx = ctx or SchemaContext()

    def term(self, t, env, ienv):
        if isinstance(t, Var):
            key = var_key(t, ienv)
            try:
                return env[key]
            except KeyError:
                raise EvaluationError(f"variable {t} has no value") from None
        args = tuple(self.term(a, env, ienv) for a in t.args)
        tab = self.M.function(t.fn, resolve_index(t.index, ienv))
        return tab[args]

    def eval(self, f, env=None, ienv=None) -> bool:
        return self._ev(f, dict(env or {}), dict(ienv or {}))

    def _bind(self, env, names, values):
        e = dict(env)
        e.update(zip(names, values))
        return e

    def _ev(self, f, env, ienv) -> bool:
        try:
            handler = _HANDLERS[type(f)]
        except KeyError:
            raise TypeError(f) from None
        return handler(self, f, env, ienv)

    def _rel(self, f, env, ienv):
        args = tuple(self.term(a, env, ienv) for a in f.args)
        return args in self.M.relations.get(f.name, ())

    def _eq(self, f, env, ienv):
        return self.term(f.left, env, ienv) == self.term(f.right, env, ienv)

    def _not(self, f, env, ienv):
        return not self._ev(f.body, env, ienv)

    def _and(self, f, env, ienv):
        return all(self._ev(p, env, ienv) for p in f.parts)

    def _or(self, f, env, ienv):
        return any(self._ev(p, env, ienv) for p in f.parts)

    def _implies(self, f, env, ienv):
        return not self._ev(f.left, env, ienv) or self._ev(f.right, env, ienv)

    def _iff(self, f, env, ienv):
        return self._ev(f.left, env, ienv) == self._ev(f.right, env, ienv)

    def _exists(self, f, env, ienv):
        return any(
            self._ev(f.body, self._bind(env, f.vars, vals), ienv)
            for vals in product(self.M.universe, repeat=len(f.vars))
        )

    def _forall(self, f, env, ienv):
        return all(
            self._ev(f.body, self._bind(env, f.vars, vals), ienv)
            for vals in product(self.M.universe, repeat=len(f.vars))
        )

    def _big(self, f, env, ienv):
        n = self.ctx.bound(f.bound, ienv)
        test = all if isinstance(f, BigAnd) else any
        return test(self._ev(f.body, env, {**ienv, f.ivar: k}) for k in range(n))

    def _block(self, f, env, ienv):
        n = self.ctx.bound(f.bound, ienv)
        keys = [(f.family, k) for k in range(n)]
        return any(self._ev(f.body, self._bind(env, keys, vals), ienv)
                   for vals in product(self.M.universe, repeat=n))

    def _qcard(self, f, env, ienv):
        need = threshold(f.token, self.ctx.surrogate)
        hits = 0
        for vals in product(self.M.universe, repeat=len(f.xs)):
            if self._ev(f.body, self._bind(env, f.xs, vals), ienv):
                hits += 1
                if hits >= need:
                    return True
        return need <= 0

    def _qcof(self, f, env, ienv):
        self.order_axioms(f, env, ienv)
        # the side condition is checked, but a finite order has cofinality 0 or 1
        return False

    def relation_of(self, xs, ys, body, env, ienv):
        tuples = list(product(self.M.universe, repeat=len(xs)))
        rel = set()
        for a in tuples:
            for b in tuples:
                if self._ev(body, self._bind(self._bind(env, xs, a), ys, b), ienv):
                    rel.add((a, b))
        return tuples, rel

    def _qec(self, f, env, ienv) -> bool:
        tuples, rel = self.relation_of(f.xs, f.ys, f.body, env, ienv)
        dom = [a for a in tuples if (a, a) in rel]
        dset = set(dom)
        for a, b in rel:
            if a not in dset or b not in dset or (b, a) not in rel:
                return False
        for a, b in rel:
            for c in dom:
                if (b, c) in rel and (a, c) not in rel:
                    return False
        classes = {frozenset(b for b in dom if (a, b) in rel) for a in dom}
        return len(classes) >= threshold(f.token, self.ctx.surrogate)

    def order_axioms(self, f, env, ienv):
        """Classify the relation defined by a QCof body (strict or reflexive encoding)."""
        tuples, rel = self.relation_of(f.xs, f.ys, f.body, env, ienv)
        return classify_relation(tuples, rel)


_HANDLERS = {
    Rel: FiniteEvaluator._rel,
    Eq: FiniteEvaluator._eq,
    Not: FiniteEvaluator._not,
    And: FiniteEvaluator._and,
    Or: FiniteEvaluator._or,
    Implies: FiniteEvaluator._implies,
    Iff: FiniteEvaluator._iff,
    Exists: FiniteEvaluator._exists,
    Forall: FiniteEvaluator._forall,
    BigAnd: FiniteEvaluator._big,
    BigOr: FiniteEvaluator._big,
    ExistsBlock: FiniteEvaluator._block,
    QCard: FiniteEvaluator._qcard,
    QEc: FiniteEvaluator._qec,
    QCof: FiniteEvaluator._qcof,
}


def classify_relation(points, rel):
    field_ = sorted({a for a, _ in rel} | {b for _, b in rel}, key=repr)
    strict = all((a, a) not in rel for a in field_)
    reflexive = all((a, a) in rel for a in field_)
    if not (strict or reflexive):
        return NOT_LINEAR, field_
    for a in field_:
        for b in field_:
            if a == b:
                continue
            ab, ba = (a, b) in rel, (b, a) in rel
            if ab == ba:
                return NOT_LINEAR, field_
            for c in field_:
                if ab and (b, c) in rel and (a, c) not in rel:
                    return NOT_LINEAR, field_
    has_last = any(all(b == a or (b, a) in rel for b in field_) for a in field_)
    return (LINEAR_WITH_LAST if has_last else LINEAR_NO_LAST), field_


def eval_finite(M: FiniteStructure, f, v=None, surrogate: Optional[Surrogate] = None, budget: int = 64,
                truncate: bool = False) -> bool:
    return FiniteEvaluator(M, SchemaContext(surrogate, budget, truncate)).eval(f, v)
