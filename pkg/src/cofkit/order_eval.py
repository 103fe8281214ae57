"""Model checking over symbolic order structures.

Quantifiers range over a finite set of candidate witnesses computed from the
current parameters: the structure's landmarks and bound elements, their
successor/predecessor chains up to the remaining quantifier depth, and one
interior point per remaining gap.  Definable sets are read off the same
decomposition, with a second interior sample per gap as a uniformity check.
"""

from __future__ import annotations

from typing import Optional

from . import orders as O
from .analysis import quantifier_rank, substitute
from .errors import EvaluationError, NonDefinable, NotALinearOrder, UnsupportedAtom
from .finite_eval import LINEAR_NO_LAST, LINEAR_WITH_LAST, NOT_LINEAR, SchemaContext, var_key
from .formulas import (
    Aleph0,
    And,
    BigAnd,
    BigOr,
    Eq,
    Exists,
    ExistsBlock,
    Finite,
    Forall,
    Iff,
    Implies,
    KappaCard,
    Not,
    Or,
    QCard,
    QCof,
    QEc,
    Rel,
    Var,
)
from .intervals import MINUS_INF, PLUS_INF, IntervalSet, after, before, cofinality_of_set
from .ordinals import OMEGA, ZERO, nat, omega_pow
from .structures import OrderStructure

STRICT, REFLEXIVE = "strict", "reflexive"


def _ordinal_landmarks(alpha, limit=4):
    out = []
    acc = ZERO
    for exp, coeff in alpha.terms:
        for _ in range(coeff):
            if acc not in out:
                out.append(acc)
            acc = acc + omega_pow(exp)
    k = 1
    while len(out) < limit:
        p = omega_pow(nat(k))
        if not p < alpha:
            break
        out.append(p)
        k += 1
    if OMEGA < alpha:
        out.append(OMEGA)
    return out


def landmarks(t: O.OrderTerm, budget: int = 4) -> list:
    pts = list(O.element_iter(t, budget)) if not O.is_empty(t) else []
    for e in (O.first(t), O.last(t)):
        if e is not None:
            pts.append(e)
    if isinstance(t, O.Ord):
        pts += _ordinal_landmarks(t.o)
    if isinstance(t, O.Sum):
        for k, p in enumerate(t.parts):
            for e in (O.first(p), O.last(p)):
                if e is not None:
                    pts.append(O.At(k, e))
            if isinstance(p, O.Ord):
                pts += [O.At(k, e) for e in _ordinal_landmarks(p.o, 3)]
    return O.sorted_elements(t, pts)


class OrderEvaluator:
    def __init__(self, M: OrderStructure, ctx: Optional[SchemaContext] = None, max_depth: int = 2,
                 landmark_budget: int = 2):
        self.M = M
        self.t = M.carrier
        self.ctx = ctx or SchemaContext()
        self.max_depth = max_depth
        marks = landmarks(self.t, landmark_budget)
        for s in M.preds.values():
            marks += s.boundary_elements()
        for ts in M.tags.values():
            for tup in ts:
                marks += list(tup)
        marks += list(M.consts.values())
        self.marks = O.sorted_elements(self.t, marks)
        self._cands = {}
        self._memo = {}
        self._rank = {}

    # helpers ----------------------------------------------------------------

    def lt(self, a, b) -> bool:
        return O.cmp(self.t, a, b) < 0

    def rank(self, f) -> int:
        # entries keep f alive so its id cannot be reused by another formula
        hit = self._rank.get(id(f))
        if hit is None:
            hit = self._rank[id(f)] = (f, quantifier_rank(f))
        return hit[1]

    def gap_points(self, lo, hi, d):
        t = self.t
        left = []
        cur = O.succ(t, lo) if lo is not None else O.first(t)
        while cur is not None and len(left) < d and (hi is None or self.lt(cur, hi)):
            left.append(cur)
            cur = O.succ(t, cur)
        floor = left[-1] if left else lo
        right = []
        cur = O.pred(t, hi) if hi is not None else O.last(t)
        while cur is not None and len(right) < d and (floor is None or self.lt(floor, cur)):
            right.append(cur)
            cur = O.pred(t, cur)
        a = floor
        b = right[-1] if right else hi
        m = O.between(t, a, b)
        return left, right, a, b, m

    def base_points(self, params):
        return O.sorted_elements(self.t, list(self.marks) + list(params))

    def candidates(self, params, d) -> list:
        key = (frozenset(params), d)
        hit = self._cands.get(key)
        if hit is not None:
            return hit
        base = self.base_points(params)
        out = list(base)
        for lo, hi in zip([None] + base, base + [None]):
            left, right, _, _, m = self.gap_points(lo, hi, d)
            out += left + right
            if m is not None:
                out.append(m)
        out = O.sorted_elements(self.t, out)
        self._cands[key] = out
        return out

    # terms --------------------------------------------------------------------

    def term(self, t, env, ienv):
        if isinstance(t, Var):
            try:
                return env[var_key(t, ienv)]
            except KeyError:
                raise EvaluationError(f"variable {t} has no value") from None
        if t.args or t.index is not None:
            raise UnsupportedAtom(f"function {t.fn} over an order structure")
        try:
            return self.M.consts[t.fn]
        except KeyError:
            raise EvaluationError(f"constant {t.fn} has no interpretation") from None

    # evaluation -------------------------------------------------------------------

    def eval(self, f, env=None, ienv=None) -> bool:
        return self._ev(f, dict(env or {}), dict(ienv or {}))

    def _ev(self, f, env, ienv) -> bool:
        key = (id(f), frozenset(env.items()), frozenset(ienv.items()))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = (f, self._ev_raw(f, env, ienv))
        return hit[1]

    def _ev_raw(self, f, env, ienv) -> bool:
        M, t = self.M, self.t
        if isinstance(f, Rel):
            args = [self.term(a, env, ienv) for a in f.args]
            if f.name == "<":
                return O.cmp(t, args[0], args[1]) < 0
            if f.name in M.preds:
                return args[0] in M.preds[f.name]
            if f.name in M.tags:
                return tuple(args) in M.tags[f.name]
            raise UnsupportedAtom(f"relation {f.name} is not interpretable over an order structure")
        if isinstance(f, Eq):
            return O.cmp(t, self.term(f.left, env, ienv), self.term(f.right, env, ienv)) == 0
        if isinstance(f, Not):
            return not self._ev(f.body, env, ienv)
        if isinstance(f, And):
            return all(self._ev(p, env, ienv) for p in f.parts)
        if isinstance(f, Or):
            return any(self._ev(p, env, ienv) for p in f.parts)
        if isinstance(f, Implies):
            return not self._ev(f.left, env, ienv) or self._ev(f.right, env, ienv)
        if isinstance(f, Iff):
            return self._ev(f.left, env, ienv) == self._ev(f.right, env, ienv)
        if isinstance(f, (Exists, Forall)):
            want = isinstance(f, Exists)
            return self._quant(f.vars, f.body, env, ienv, want) == want
        if isinstance(f, (BigAnd, BigOr)):
            n = self.ctx.bound(f.bound, ienv)
            test = all if isinstance(f, BigAnd) else any
            return test(self._ev(f.body, env, {**ienv, f.ivar: k}) for k in range(n))
        if isinstance(f, ExistsBlock):
            raise EvaluationError("existential blocks are not evaluated over order structures")
        if isinstance(f, QCof):
            if len(f.xs) != 1:
                raise NotALinearOrder("cofinality quantifier over tuples is unsupported on order structures")
            info = self.qcof_info(f.body, f.xs[0], f.ys[0], env, ienv)
            return info["status"] == LINEAR_NO_LAST and info["cof"] in f.tags
        if isinstance(f, QCard):
            if len(f.xs) != 1:
                raise UnsupportedAtom("cardinality quantifier over tuples is unsupported on order structures")
            s = self.definable_set(f.body, f.xs[0], env, ienv)
            return card_at_least(s.cardinality(), f.token)
        if isinstance(f, QEc):
            return self._qec(f, env, ienv)
        raise TypeError(f)

    def _quant(self, names, body, env, ienv, want) -> bool:
        """True iff some assignment of ``names`` gives ``body`` the value ``want``."""
        if not names:
            return self._ev(body, env, ienv) == want
        d = min(self.max_depth, self.rank(body) + len(names) - 1)
        for e in self.candidates(env.values(), d):
            if self._quant(names[1:], body, {**env, names[0]: e}, ienv, want):
                return True
        return False

    # definable sets ------------------------------------------------------------------

    def definable_set(self, f, x: str, env=None, ienv=None) -> IntervalSet:
        env = dict(env or {})
        env.pop(x, None)
        ienv = dict(ienv or {})
        d = min(self.max_depth, self.rank(f) + 1)
        holds = lambda e: self._ev(f, {**env, x: e}, ienv)
        base = self.base_points(env.values())
        pieces = []
        for b in base:
            if holds(b):
                pieces.append((before(b), after(b)))
        for lo, hi in zip([None] + base, base + [None]):
            left, right, a, b, m = self.gap_points(lo, hi, d)
            for e in left + right:
                if holds(e):
                    pieces.append((before(e), after(e)))
            if m is None:
                continue
            v = holds(m)
            for probe in (O.between(self.t, a, m), O.between(self.t, m, b)):
                if probe is not None and holds(probe) != v:
                    raise NonDefinable("definable set is not a finite union of intervals at this resolution")
            if v:
                lo_cut = MINUS_INF if a is None else after(a)
                hi_cut = PLUS_INF if b is None else before(b)
                pieces.append((lo_cut, hi_cut))
        return IntervalSet(self.t, pieces)

    # cofinality quantifier ----------------------------------------------------------------

    def _phi(self, body, x, y, a, b):
        return substitute(body, {x: Var(a), y: Var(b)})

    def order_sentences(self, body, x, y):
        """The first-order side conditions as formulas in parameters only."""
        phi = lambda a, b: self._phi(body, x, y, a, b)
        F = lambda a: Exists(("$f",), Or((phi(a, "$f"), phi("$f", a))))
        A, B, C = "$a", "$b", "$c"
        return {
            "strict": Forall((A,), Not(phi(A, A))),
            "reflexive": Forall((A,), Implies(F(A), phi(A, A))),
            "total": Forall((A, B), Implies(And((F(A), F(B), Not(Eq(Var(A), Var(B))))),
                                            Iff(phi(A, B), Not(phi(B, A))))),
            "transitive": Forall((A, B, C), Implies(And((phi(A, B), phi(B, C))), phi(A, C))),
            "no_last_strict": Forall((A,), Implies(F(A), Exists((B,), phi(A, B)))),
            "no_last_reflexive": Forall((A,), Implies(F(A), Exists((B,), And((phi(A, B), Not(phi(B, A))))))),
            "agree_strict": Forall((A, B), Implies(And((F(A), F(B))), Iff(phi(A, B), Rel("<", (Var(A), Var(B)))))),
            "agree_reflexive": Forall((A, B), Implies(And((F(A), F(B))), Iff(
                phi(A, B), Or((Rel("<", (Var(A), Var(B))), Eq(Var(A), Var(B))))))),
        }

    def check_order_axioms(self, body, x, y, env=None, ienv=None):
        env, ienv = dict(env or {}), dict(ienv or {})
        s = self.order_sentences(body, x, y)
        ev = lambda k: self._ev(s[k], env, ienv)
        if ev("strict"):
            enc = STRICT
        elif ev("reflexive"):
            enc = REFLEXIVE
        else:
            return NOT_LINEAR, None
        if not (ev("total") and ev("transitive")):
            return NOT_LINEAR, enc
        return (LINEAR_NO_LAST if ev(f"no_last_{enc}") else LINEAR_WITH_LAST), enc

    def qcof_info(self, body, x, y, env=None, ienv=None) -> dict:
        env, ienv = dict(env or {}), dict(ienv or {})
        status, enc = self.check_order_axioms(body, x, y, env, ienv)
        info = {"status": status, "encoding": enc, "cof": None, "set": None}
        if status == NOT_LINEAR:
            return info
        if not self._ev(self.order_sentences(body, x, y)[f"agree_{enc}"], env, ienv):
            raise UnsupportedAtom("cofinality body must agree with < (or its reflexive closure) on its field")
        I = self.definable_set(Exists((y,), body), x, env, ienv)
        info["set"] = I
        info["cof"] = cofinality_of_set(I)
        return info

    def underlying_set_variants(self, body, x, y, env=None, ienv=None) -> dict:
        env, ienv = dict(env or {}), dict(ienv or {})
        s1 = self.definable_set(Exists((y,), body), x, env, ienv)
        s2 = self.definable_set(Exists((x,), body), y, env, ienv)
        s3 = self.definable_set(substitute(body, {y: Var(x)}), x, env, ienv)
        return {"left": s1, "right": s2, "diagonal": s3, "agree": s1 == s2 == s3}

    def _qec(self, f, env, ienv) -> bool:
        if len(f.xs) != 1:
            raise UnsupportedAtom("equivalence-class quantifier over tuples is unsupported on order structures")
        x, y = f.xs[0], f.ys[0]
        diag = substitute(f.body, {y: Var(x)})
        A, B = "$a", "$b"
        phi = substitute(f.body, {x: Var(A), y: Var(B)})
        same = Forall((A, B), Iff(phi, And((Eq(Var(A), Var(B)), substitute(diag, {x: Var(A)})))))
        if not self._ev(same, env, ienv):
            raise UnsupportedAtom("equivalence-class quantifier is supported only for equality-like bodies here")
        dom = self.definable_set(diag, x, env, ienv)
        return card_at_least(dom.cardinality(), f.token)


def card_at_least(card, tok) -> bool:
    if isinstance(tok, Finite):
        return not isinstance(card, int) or card >= tok.n
    if isinstance(tok, Aleph0):
        return isinstance(card, O.InfiniteCard)
    if isinstance(tok, KappaCard):
        return isinstance(card, O.InfiniteCard) and card.level >= tok.i
    raise TypeError(tok)


# module-level entry points ----------------------------------------------------------


def eval_order(M: OrderStructure, f, v=None, **kw) -> bool:
    return OrderEvaluator(M, **kw).eval(f, v)


def definable_set(M: OrderStructure, f, x: str, v=None, **kw) -> IntervalSet:
    return OrderEvaluator(M, **kw).definable_set(f, x, v)


def check_order_axioms(M: OrderStructure, body, x="x", y="y", v=None, **kw):
    return OrderEvaluator(M, **kw).check_order_axioms(body, x, y, v)[0]


def underlying_set_variants(M: OrderStructure, body, x="x", y="y", v=None, **kw) -> dict:
    return OrderEvaluator(M, **kw).underlying_set_variants(body, x, y, v)
