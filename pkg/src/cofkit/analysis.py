"""Syntactic analyses and rewrites: polarity, subformulas, alpha-equivalence,
substitution, negation normal form and schema instantiation."""

from __future__ import annotations

from itertools import count

from .formulas import (
    And,
    App,
    BigAnd,
    BigOr,
    Eq,
    Exists,
    ExistsBlock,
    Finite,
    Forall,
    Formula,
    Fragment,
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
    Vocabulary,
    children,
    fresh,
    term_vars,
    with_children,
)

POSITIVE, NEGATIVE, MIXED = "positive", "negative", "mixed"
KIND = {QCof: "qcof", QCard: "qcard", QEc: "qec"}


def _flip(p):
    return {POSITIVE: NEGATIVE, NEGATIVE: POSITIVE}.get(p, MIXED)


def polarity_of_quantifiers(f: Formula, path=(), pol=POSITIVE) -> list:
    """``(path, kind, polarity)`` for every generalized-quantifier occurrence.

    Computed as if ``->``/``<->`` were desugared: the antecedent of ``->`` is
    flipped and both sides of ``<->`` are mixed.  Quantifier bodies inherit
    the polarity of the quantifier node.
    """
    out = []
    if type(f) in KIND:
        out.append((path, KIND[type(f)], pol))
    if isinstance(f, Not):
        out += polarity_of_quantifiers(f.body, path + (0,), _flip(pol))
    elif isinstance(f, Implies):
        out += polarity_of_quantifiers(f.left, path + (0,), _flip(pol))
        out += polarity_of_quantifiers(f.right, path + (1,), pol)
    elif isinstance(f, Iff):
        out += polarity_of_quantifiers(f.left, path + (0,), MIXED)
        out += polarity_of_quantifiers(f.right, path + (1,), MIXED)
    else:
        for i, c in enumerate(children(f)):
            out += polarity_of_quantifiers(c, path + (i,), pol)
    return out


def subterm_at(f: Formula, path):
    for i in path:
        f = children(f)[i]
    return f


def replace_at(f: Formula, path, new):
    if not path:
        return new
    kids = list(children(f))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(f, kids)


def subformulas(f: Formula):
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        yield g
        stack.extend(children(g))


def fragment_closure(fs, vocab: Vocabulary = None) -> Fragment:
    out = set()
    for f in fs:
        out.update(subformulas(f))
    return Fragment(vocab if vocab is not None else Vocabulary(), frozenset(out))


def depth(f: Formula) -> int:
    kids = children(f)
    return 1 + max((depth(c) for c in kids), default=0)


def quantifier_rank(f: Formula) -> int:
    kids = children(f)
    inner = max((quantifier_rank(c) for c in kids), default=0)
    if isinstance(f, (Exists, Forall)):
        return inner + len(f.vars)
    if isinstance(f, (QCof, QEc)):
        return inner + 2 * len(f.xs)
    if isinstance(f, QCard):
        return inner + len(f.xs)
    return inner


def count_nodes(f: Formula, kinds) -> int:
    return sum(1 for g in _walk(f) if isinstance(g, kinds))


def _walk(f):
    yield f
    for c in children(f):
        yield from _walk(c)


def relation_symbols(f: Formula) -> set:
    out = set()
    for g in _walk(f):
        if isinstance(g, Rel):
            out.add(g.name)
    return out


# terms -------------------------------------------------------------------------


def map_term(t, fn):
    """Bottom-up rewrite of a term; ``fn`` sees every node."""
    if isinstance(t, App):
        t = App(t.fn, tuple(map_term(a, fn) for a in t.args), t.index)
    return fn(t)


def map_atoms(f: Formula, fn_term) -> Formula:
    """Apply ``fn_term`` to every term of every atom (no binder awareness)."""
    if isinstance(f, Rel):
        return Rel(f.name, tuple(map_term(a, fn_term) for a in f.args))
    if isinstance(f, Eq):
        return Eq(map_term(f.left, fn_term), map_term(f.right, fn_term))
    return with_children(f, [map_atoms(c, fn_term) for c in children(f)])


def function_symbols(f: Formula) -> set:
    out = set()

    def visit(t):
        if isinstance(t, App):
            out.add(t.fn)
        return t

    map_atoms(f, visit)
    return out


# alpha-equivalence ------------------------------------------------------------------


def alpha_canonical(f: Formula, free_order=None) -> Formula:
    """Rename bound variables (and junction indices) to ``$b<k>``/``$i<k>`` in
    binding order.  With ``free_order`` the free variables are renamed to
    ``$z<k>`` following that list."""
    env = {}
    if free_order is not None:
        env = {v: f"$z{k}" for k, v in enumerate(free_order)}
    return _canon(f, env, {}, count(), count())


def _ren_term(t, env, ienv):
    def fn(u):
        ix = u.index
        if ix is not None and ix.var in ienv:
            ix = Idx(ienv[ix.var], ix.off, ix.below)
        if isinstance(u, Var):
            if u.index is None:
                return Var(env.get(u.name, u.name))
            return Var(env.get(("family", u.name), u.name), ix)
        return App(u.fn, u.args, ix)

    return map_term(t, fn)


def _canon(f, env, ienv, vc, ic):
    if isinstance(f, Rel):
        return Rel(f.name, tuple(_ren_term(a, env, ienv) for a in f.args))
    if isinstance(f, Eq):
        return Eq(_ren_term(f.left, env, ienv), _ren_term(f.right, env, ienv))
    if isinstance(f, (Exists, Forall, QCof, QCard, QEc)):
        names = {}
        if isinstance(f, (Exists, Forall)):
            groups = [f.vars]
        elif isinstance(f, QCard):
            groups = [f.xs]
        else:
            groups = [f.xs, f.ys]
        new_groups = []
        for g in groups:
            ng = []
            for v in g:
                names[v] = f"$b{next(vc)}"
                ng.append(names[v])
            new_groups.append(tuple(ng))
        body = _canon(f.body, {**env, **names}, ienv, vc, ic)
        if isinstance(f, Exists):
            return Exists(new_groups[0], body)
        if isinstance(f, Forall):
            return Forall(new_groups[0], body)
        if isinstance(f, QCard):
            return QCard(f.token, new_groups[0], body)
        if isinstance(f, QCof):
            return QCof(f.tags, new_groups[0], new_groups[1], body)
        return QEc(f.token, new_groups[0], new_groups[1], body)
    if isinstance(f, (BigAnd, BigOr)):
        nv = f"$i{next(ic)}"
        bound = ienv.get(f.bound, f.bound) if isinstance(f.bound, str) else f.bound
        body = _canon(f.body, env, {**ienv, f.ivar: nv}, vc, ic)
        return type(f)(nv, bound, body)
    if isinstance(f, ExistsBlock):
        nv = f"$b{next(vc)}"
        body = _canon(f.body, {**env, ("family", f.family): nv}, ienv, vc, ic)
        return ExistsBlock(nv, f.bound, body)
    return with_children(f, [_canon(c, env, ienv, vc, ic) for c in children(f)])


def alpha_equal(f: Formula, g: Formula) -> bool:
    return alpha_canonical(f) == alpha_canonical(g)


def free_order(f: Formula) -> list:
    """Plain free variables in first-occurrence (left-to-right) order."""
    seen = []
    fv = {v.name for v in f.fv if v.index is None}

    def visit(g, bound):
        if isinstance(g, (Rel, Eq)):
            terms = g.args if isinstance(g, Rel) else (g.left, g.right)
            for t in terms:
                for v in _term_var_seq(t):
                    if v.index is None and v.name in fv and v.name not in bound and v.name not in seen:
                        seen.append(v.name)
            return
        from .formulas import bound_vars

        nb = bound | set(bound_vars(g))
        for c in children(g):
            visit(c, nb)

    visit(f, frozenset())
    return seen


def _term_var_seq(t):
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from _term_var_seq(a)


# substitution ---------------------------------------------------------------------------


def substitute(f: Formula, mapping: dict) -> Formula:
    """Capture-avoiding substitution of terms for plain variables."""
    if not mapping:
        return f
    if isinstance(f, (Rel, Eq)):

        def fn(u):
            if isinstance(u, Var) and u.index is None and u.name in mapping:
                return mapping[u.name]
            return u

        return map_atoms(f, fn)
    from .formulas import bound_vars

    bvs = bound_vars(f)
    if bvs:
        mapping = {k: v for k, v in mapping.items() if k not in bvs}
        if not mapping:
            return f
        incoming = set()
        for t in mapping.values():
            incoming |= {v.name for v in term_vars(t) if v.index is None}
        clash = [v for v in bvs if v in incoming]
        if clash:
            ren = {v: fresh(v.lstrip("$")[:1] or "v") for v in clash}
            f = _rename_binder(f, ren)
        body = substitute(f.body, mapping)
        return with_children(f, [body])
    return with_children(f, [substitute(c, mapping) for c in children(f)])


def _rename_binder(f, ren):
    body = substitute(f.body, {old: Var(new) for old, new in ren.items()})
    r = lambda vs: tuple(ren.get(v, v) for v in vs)
    if isinstance(f, Exists):
        return Exists(r(f.vars), body)
    if isinstance(f, Forall):
        return Forall(r(f.vars), body)
    if isinstance(f, QCof):
        return QCof(f.tags, r(f.xs), r(f.ys), body)
    if isinstance(f, QCard):
        return QCard(f.token, r(f.xs), body)
    return QEc(f.token, r(f.xs), r(f.ys), body)


def rename_free(f: Formula, ren: dict) -> Formula:
    return substitute(f, {k: Var(v) for k, v in ren.items()})


# schemas -------------------------------------------------------------------------------------


def instantiate_index(f: Formula, ivar: str, value: int) -> Formula:
    """Replace index variable ``ivar`` by the literal ``value``."""

    def fix(ix):
        if ix is not None and ix.var == ivar:
            return Idx(None, value + ix.off)
        return ix

    def fn(u):
        if isinstance(u, Var):
            return Var(u.name, fix(u.index))
        return App(u.fn, u.args, fix(u.index))

    def go(g):
        if isinstance(g, (Rel, Eq)):
            return map_atoms(g, fn)
        if isinstance(g, (BigAnd, BigOr)):
            if g.ivar == ivar:
                return g
            bound = Finite(value) if g.bound == ivar else g.bound
            return type(g)(g.ivar, bound, go(g.body))
        return with_children(g, [go(c) for c in children(g)])

    return go(f)


def expand_finite(f: Formula) -> Formula:
    """Unfold every junction whose bound is finite into an explicit And/Or."""
    if isinstance(f, (BigAnd, BigOr)) and isinstance(f.bound, Finite):
        parts = tuple(expand_finite(instantiate_index(f.body, f.ivar, k)) for k in range(f.bound.n))
        return And(parts) if isinstance(f, BigAnd) else Or(parts)
    if isinstance(f, (Rel, Eq)):
        return f
    return with_children(f, [expand_finite(c) for c in children(f)])


def flatten(f: Formula) -> Formula:
    """Unwrap singleton junctions and merge nested same-kind junctions."""
    if isinstance(f, (Rel, Eq)):
        return f
    kids = [flatten(c) for c in children(f)]
    if isinstance(f, (And, Or)):
        merged = []
        for k in kids:
            if type(k) is type(f):
                merged.extend(k.parts)
            else:
                merged.append(k)
        if len(merged) == 1:
            return merged[0]
        return type(f)(tuple(merged))
    return with_children(f, kids)


# normal forms ---------------------------------------------------------------------------------


def desugar(f: Formula) -> Formula:
    if isinstance(f, Implies):
        return Or((Not(desugar(f.left)), desugar(f.right)))
    if isinstance(f, Iff):
        l, r = desugar(f.left), desugar(f.right)
        return And((Or((Not(l), r)), Or((Not(r), l))))
    if isinstance(f, (Rel, Eq)):
        return f
    return with_children(f, [desugar(c) for c in children(f)])


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form; generalized quantifiers are treated as atoms."""
    if isinstance(f, (Rel, Eq, QCof, QCard, QEc)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.body, not negate)
    if isinstance(f, Implies):
        return nnf(Or((Not(f.left), f.right)), negate)
    if isinstance(f, Iff):
        return nnf(And((Or((Not(f.left), f.right)), Or((Not(f.right), f.left)))), negate)
    if isinstance(f, (And, Or)):
        parts = tuple(nnf(p, negate) for p in f.parts)
        conj = isinstance(f, And) != negate
        return And(parts) if conj else Or(parts)
    if isinstance(f, (Exists, Forall)):
        body = nnf(f.body, negate)
        ex = isinstance(f, Exists) != negate
        return Exists(f.vars, body) if ex else Forall(f.vars, body)
    if isinstance(f, (BigAnd, BigOr)):
        body = nnf(f.body, negate)
        conj = isinstance(f, BigAnd) != negate
        return (BigAnd if conj else BigOr)(f.ivar, f.bound, body)
    if isinstance(f, ExistsBlock):
        if negate:
            raise ValueError("negated existential blocks have no finitary normal form here")
        return ExistsBlock(f.family, f.bound, nnf(f.body))
    raise TypeError(f)


def is_universal(f: Formula) -> bool:
    """No existential force remains once ``f`` is in negation normal form."""
    g = nnf(f)
    return not any(isinstance(h, (Exists, ExistsBlock, QCof, QCard, QEc)) for h in _walk(g))


def _binds(f, v) -> bool:
    return any(u.index is None and u.name == v for u in f.fv)


def _push_forall(v: str, f: Formula) -> Formula:
    if not _binds(f, v):
        return f
    if isinstance(f, And):
        return And(tuple(_push_forall(v, p) for p in f.parts))
    if isinstance(f, BigAnd):
        return BigAnd(f.ivar, f.bound, _push_forall(v, f.body))
    if isinstance(f, Or):
        using = [p for p in f.parts if _binds(p, v)]
        if len(using) == 1:
            return Or(tuple(_push_forall(v, p) if p is using[0] else p for p in f.parts))
        rest = tuple(p for p in f.parts if not _binds(p, v))
        if rest:
            return Or(rest + (Forall((v,), Or(tuple(using))),))
    return Forall((v,), f)


def miniscope(f: Formula) -> Formula:
    """Push universal quantifiers down to the conjuncts and disjuncts that use them.

    The result is equivalent and usually much cheaper to evaluate, since
    each quantifier then ranges over a small subformula.
    """
    if isinstance(f, (Rel, Eq)):
        return f
    f = with_children(f, [miniscope(c) for c in children(f)])
    if isinstance(f, Forall):
        body = f.body
        for v in reversed(f.vars):
            body = _push_forall(v, body)
        return body
    return f
