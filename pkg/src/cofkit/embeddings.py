"""Inclusions between structures.

Order inclusions are given by an element map plus ``top``, the supremum of
the whole image in the target.  Maps are assumed continuous at limit
elements: the image of ``{x < e}`` has supremum ``before(inject(e))`` when
``e`` has no predecessor.  Every constructor here satisfies that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import orders as O
from .errors import ArityError, InvalidElement
from .intervals import BEFORE, MINUS_INF, NINF, PINF, PLUS_INF, Cut, IntervalSet, after, before
from .structures import FiniteStructure, OrderStructure


@dataclass(frozen=True)
class OrderInclusion:
    source: OrderStructure
    target: OrderStructure
    inject: Callable
    top: Cut
    name: str = "inclusion"
    fresh: object = None  # some target element outside the image, when known

    def __call__(self, e):
        return self.inject(e)

    def map_tuple(self, tup):
        return tuple(self.inject(e) for e in tup)

    def sup_image(self, s: IntervalSet) -> Optional[Cut]:
        """Supremum in the target of the image of ``s``; None for the empty set."""
        if s.is_empty():
            return None
        m = s.max_element()
        if m is not None:
            return after(self.inject(m))
        hi = s.top_cut()
        if hi.kind == PINF:
            return self.top
        return before(self.inject(hi.elt))

    def then(self, other: "OrderInclusion") -> "OrderInclusion":
        return OrderInclusion(self.source, other.target, lambda e: other.inject(self.inject(e)),
                              _push_cut(other, self.top),
                              f"{self.name};{other.name}")

    def element_map(self, elements) -> dict:
        return {e: self.inject(e) for e in elements}


def _push_cut(emb: OrderInclusion, c: Cut) -> Cut:
    if c.kind == PINF:
        return emb.top
    if c.kind == NINF:
        return MINUS_INF
    img = emb.inject(c.elt)
    return before(img) if c.kind == BEFORE else after(img)


@dataclass(frozen=True)
class FiniteEmbedding:
    source: FiniteStructure
    target: FiniteStructure
    mapping: dict = field(default_factory=dict)
    name: str = "embedding"

    def __post_init__(self):
        if set(self.mapping) != set(self.source.universe):
            raise InvalidElement("embedding must be defined on the whole source universe")
        if len(set(self.mapping.values())) != len(self.mapping):
            raise InvalidElement("embedding is not injective")

    def __call__(self, e):
        return self.mapping[e]

    def map_tuple(self, tup):
        return tuple(self.mapping[e] for e in tup)

    def preserves(self) -> bool:
        """Relations reflected and preserved, function tables commute."""
        from itertools import product

        S, T = self.source, self.target
        for name, ts in S.relations.items():
            ar = S.vocab[name].arity
            for tup in product(S.universe, repeat=ar):
                if (tup in ts) != (self.map_tuple(tup) in T.relations.get(name, ())):
                    return False
        for key, tab in S.functions.items():
            other = T.functions.get(key)
            if other is None:
                return False
            for args, v in tab.items():
                if other.get(self.map_tuple(args)) != self.mapping[v]:
                    return False
        return True

    def then(self, other: "FiniteEmbedding") -> "FiniteEmbedding":
        return FiniteEmbedding(self.source, other.target, {a: other(b) for a, b in self.mapping.items()},
                               f"{self.name};{other.name}")

    def element_map(self, elements=None) -> dict:
        return dict(self.mapping)


def inclusion(M: FiniteStructure, N: FiniteStructure) -> FiniteEmbedding:
    return FiniteEmbedding(M, N, {a: a for a in M.universe}, "inclusion")


def faithfulness_check(f, g) -> bool:
    """Two maps with the same source agree iff their element maps agree."""
    if f.source != g.source:
        raise ArityError("maps have different sources")
    if isinstance(f, FiniteEmbedding):
        return f.mapping == g.mapping
    pts = O.element_iter(f.source.carrier, 32)
    return all(O.cmp(f.target.carrier, f(e), g(e)) == 0 for e in pts)


# order inclusions -----------------------------------------------------------------------


def identity(M: OrderStructure) -> OrderInclusion:
    return OrderInclusion(M, M, lambda e: e, PLUS_INF, "identity")


def parts(t):
    t = O.normalize(t)
    return list(t.parts) if isinstance(t, O.Sum) else [t]


def split(t, e):
    """``(part index, inner element)`` of ``e`` in ``t`` viewed as a sum."""
    return (e.part, e.elt) if isinstance(O.normalize(t), O.Sum) else (0, e)


def join(t, k, e):
    return O.At(k, e) if isinstance(O.normalize(t), O.Sum) else e


def _retag(M: OrderStructure, carrier, inject, preds=None):
    tags = {n: {tuple(inject(e) for e in tup) for tup in ts} for n, ts in M.tags.items()}
    consts = {n: inject(e) for n, e in M.consts.items()}
    return OrderStructure(M.vocab, carrier, preds if preds is not None else {}, tags, consts)


def _need_no_preds(M):
    if M.preds:
        raise InvalidElement("this extension does not transport interval predicates; use insert_part")


def end_extend(M: OrderStructure, X) -> OrderInclusion:
    """Append ``X`` above everything (``X`` must have a first element)."""
    _need_no_preds(M)
    X = O.normalize(X)
    f = O.first(X)
    if f is None:
        raise InvalidElement("end extensions here need a first new element")
    ps = parts(M.carrier)
    carrier = O.normalize(O.Sum(tuple(ps) + (X,)))
    inject = lambda e: O.At(*split(M.carrier, e))
    N = _retag(M, carrier, inject)
    return OrderInclusion(M, N, inject, before(join(carrier, len(ps), f)), "end-extension")


def prefix_extend(M: OrderStructure, X) -> OrderInclusion:
    """Put ``X`` below everything."""
    _need_no_preds(M)
    X = O.normalize(X)
    xs = parts(X)
    carrier = O.normalize(O.Sum(tuple(xs) + tuple(parts(M.carrier))))

    def inject(e):
        k, inner = split(M.carrier, e)
        return O.At(k + len(xs), inner)

    return OrderInclusion(M, _retag(M, carrier, inject), inject, PLUS_INF, "prefix")


def thicken(M: OrderStructure, k: int) -> OrderInclusion:
    """Replace every point by ``k`` consecutive points, the old one first."""
    _need_no_preds(M)
    carrier = O.normalize(O.LexProd(O.Fin(k), M.carrier))
    inject = lambda e: O.Pair(e, 0)
    l = O.last(M.carrier)
    top = PLUS_INF if l is None or k == 1 else after(O.Pair(l, 0))
    return OrderInclusion(M, _retag(M, carrier, inject), inject, top, f"thicken{k}")


def ordinal_inclusion(M: OrderStructure, beta) -> OrderInclusion:
    """``Ord(a)`` (or ``Fin(n)``) inside ``Ord(beta)`` for ``a <= beta``."""
    from .ordinals import nat

    _need_no_preds(M)
    t = M.carrier
    if isinstance(t, O.Fin):
        inject, size = nat, nat(t.n)
    elif isinstance(t, O.Ord):
        inject, size = (lambda e: e), t.o
    else:
        raise InvalidElement("ordinal inclusion needs an ordinal carrier")
    if beta < size:
        raise InvalidElement("target ordinal is too small")
    target = O.Ord(beta)
    top = PLUS_INF if size == beta else before(size)
    return OrderInclusion(M, _retag(M, target, inject), inject, top, "ordinal")


def transport(s: IntervalSet, owner, cut_map) -> IntervalSet:
    return IntervalSet(owner, [(cut_map(lo), cut_map(hi)) for lo, hi in s.pieces])


def insert_part(M: OrderStructure, k: int, X=None, absorb=()) -> OrderInclusion:
    """Insert new points right after part ``k`` of the carrier.

    Ordinal parts grow in place (``Ord(a)`` becomes ``Ord(a + X)``); other
    parts get ``X`` as a new part after them.  Predicates named in
    ``absorb`` take the new points in; others stop below them.
    """
    from .ordinals import nat

    ps = parts(M.carrier)
    region = ps[k]
    if X is None:
        X = region if isinstance(region, O.Ord) else O.Fin(1)
    X = O.normalize(X)
    merge = isinstance(region, O.Ord) and isinstance(X, (O.Ord, O.Fin))
    if merge:
        grow = X.o if isinstance(X, O.Ord) else nat(X.n)
        new_parts = ps[:k] + [O.Ord(region.o + grow)] + ps[k + 1:]
        shift = 0
        start_new = (k, region.o)
    else:
        new_parts = ps[: k + 1] + [X] + ps[k + 1:]
        shift = 1
        fx = O.first(X)
        start_new = None if fx is None else (k + 1, fx)
    carrier = O.normalize(O.Sum(tuple(new_parts)))
    was_sum = len(ps) > 1

    def inject(e):
        i, inner = split(M.carrier, e) if was_sum else (0, e)
        return join(carrier, i + shift if i > k else i, inner)

    # cut at the insertion point, seen from the source
    if k + 1 < len(ps):
        f_next = O.first(ps[k + 1])
        gap = before(join(M.carrier, k + 1, f_next)) if f_next is not None else None
    else:
        gap = PLUS_INF
    above_new = _push_raw(inject, gap) if gap is not None else None
    below_new = before(join(carrier, *start_new)) if start_new is not None else None

    def cut_map(c, absorbing):
        if gap is not None and c == gap:
            return above_new if absorbing or below_new is None else below_new
        return _push_raw(inject, c)

    preds = {name: transport(s, carrier, lambda c, a=(name in absorb): cut_map(c, a)) for name, s in M.preds.items()}
    N = _retag(M, carrier, inject, preds)
    top = PLUS_INF if gap != PLUS_INF else (below_new or PLUS_INF)
    fresh = join(carrier, *start_new) if start_new is not None else join(carrier, k + 1, O.element_iter(X, 1)[0])
    return OrderInclusion(M, N, inject, top, f"insert@{k}", fresh)


def _push_raw(inject, c):
    if c.kind in (NINF, PINF):
        return c
    return before(inject(c.elt)) if c.kind == BEFORE else after(inject(c.elt))


def infer_inclusion(M, N):
    """Recognize ``N`` as one of the constructions above applied to ``M``.

    Finite structures are included by element identity.
    """
    from .errors import NotExpressible
    from .ordinals import nat
    from .structures import order_vocab

    if isinstance(M, FiniteStructure):
        return FiniteEmbedding(M, N, {a: a for a in M.universe}, "inclusion")
    bare = OrderStructure(order_vocab(), M.carrier)
    ps, qs = parts(M.carrier), parts(N.carrier)
    extra = len(qs) - len(ps)
    cands = []
    if M.carrier == N.carrier:
        cands.append(identity(bare))
    if extra > 0 and qs[: len(ps)] == ps and O.first(O.normalize(O.Sum(tuple(qs[len(ps):])))) is not None:
        cands.append(end_extend(bare, O.Sum(tuple(qs[len(ps):]))))
    if extra > 0 and qs[extra:] == ps:
        cands.append(prefix_extend(bare, O.Sum(tuple(qs[:extra]))))
    if isinstance(N.carrier, O.LexProd) and N.carrier.index == M.carrier and isinstance(N.carrier.block, O.Fin):
        cands.append(thicken(bare, N.carrier.block.n))
    for k in range(len(ps)):
        if extra == 1 and qs[: k + 1] == ps[: k + 1] and qs[k + 2:] == ps[k + 1:]:
            cands.append(insert_part(bare, k, qs[k + 1]))
        if extra == 0 and isinstance(ps[k], O.Ord) and isinstance(qs[k], O.Ord) and ps[k].o < qs[k].o \
                and all(qs[j] == ps[j] for j in range(len(ps)) if j != k):
            cands.append(insert_part(bare, k, O.Ord(O._ordinal_diff(ps[k].o, qs[k].o))))
    if isinstance(M.carrier, (O.Fin, O.Ord)) and isinstance(N.carrier, O.Ord):
        size = nat(M.carrier.n) if isinstance(M.carrier, O.Fin) else M.carrier.o
        if not N.carrier.o < size:
            cands.append(ordinal_inclusion(bare, N.carrier.o))
    for emb in cands:
        if emb.target.carrier == N.carrier:
            return OrderInclusion(M, N, emb.inject, emb.top, emb.name, emb.fresh)
    raise NotExpressible("cannot recognize the target as an extension of the source")
