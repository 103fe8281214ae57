"""Strong substructures, chains, lifts and a seeded check of the class axioms.

``strong_sub`` decides ``M < N`` for an inclusion: elementarity on a
fragment (exact over finite structures, a spot check on a parameter pool
over order structures) plus the cofinality condition on every tagged
tuple, which is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

from . import orders as O
from .analysis import fragment_closure, free_order, substitute
from .embeddings import (
    FiniteEmbedding,
    OrderInclusion,
    end_extend,
    faithfulness_check,
    identity,
    inclusion,
    insert_part,
    prefix_extend,
    thicken,
)
from .errors import NoLiftFound, NonClosure, NotExpressible, NoUntaggedRegion, UnsupportedKind
from .expansion import expansion_exists
from .finite_eval import FiniteEvaluator, SchemaContext
from .formulas import RELATION, And, Exists, Not, Or, Rel, Theory, Var, Vocabulary, to_text
from .intervals import PLUS_INF, IntervalSet, before, cut_cmp, norm_cut
from .morleyization import MorleyizationResult, morleyize, tag_models
from .order_eval import OrderEvaluator
from .ordinals import ONE, OrdinalCNF, nat
from .structures import FiniteStructure, OrderStructure, pure_order

__all__ = [
    "Verdict", "strong_sub", "check_coherence", "default_fragment", "default_params",
    "SymbolicChain", "ChainReport", "union_of_chain", "run_chain", "fin_chain", "tagged_end_chain",
    "insertion_chain", "proper_extend", "Lift", "find_lift", "lift_chain", "strong_sub_via_lifts",
    "HullReport", "skolem_hull", "faithfulness_check", "campaign", "CampaignReport",
]


# formulas used as elementarity probes ------------------------------------------------------

def _lt(a, b):
    return Rel("<", (Var(a), Var(b)))


def order_probes():
    """Formulas in one or two free variables that tell apart common order shapes."""
    x, y, w = "x", "y", "$w"
    between = lambda a, b: Exists((w,), And((_lt(a, w), _lt(w, b))))
    return [
        _lt(x, y),
        Exists((y,), _lt(x, y)),
        Exists((y,), _lt(y, x)),
        Exists((y,), And((_lt(x, y), Not(between(x, y))))),
        Exists((y,), And((_lt(y, x), Not(between(y, x))))),
        between(x, y),
    ]


def default_fragment(res: Optional[MorleyizationResult], vocab: Vocabulary, probes=True):
    """Subformulas of T*, of each row's field formula and of atoms over ``vocab``."""
    fs = []
    if res is not None:
        fs += list(res.t_star.sentences)
        for row in res.rows.values():
            node = row.formula
            fs.append(Exists(node.ys, node.body))
    for name, sym in vocab.items():
        if sym.kind == RELATION:
            fs.append(Rel(name, tuple(Var(f"v{k}") for k in range(sym.arity))))
    if probes and "<" in vocab:
        fs += order_probes()
    frag = fragment_closure(fs, vocab)
    return sorted(frag.formulas, key=to_text)


def default_params(M: OrderStructure, budget: int = 4) -> list:
    pool = list(O.element_iter(M.carrier, budget)) if not O.is_empty(M.carrier) else []
    for ts in M.tags.values():
        for tup in ts:
            pool += list(tup)
    pool += list(M.consts.values())
    return O.sorted_elements(M.carrier, pool)


# strong substructure ----------------------------------------------------------------------


@dataclass
class Verdict:
    holds: bool
    exact: bool
    checked: int = 0
    witness: Optional[tuple] = None  # (condition, formula or tag, parameters)

    def __bool__(self):
        return self.holds

    def describe(self) -> str:
        kind = "exact" if self.exact else "spot-checked"
        if self.holds:
            return f"holds ({kind}, {self.checked} checks)"
        return f"fails ({kind}): {self.witness[0]} {self.witness[1]} at {self.witness[2]!r}"


def _valuations(names, pool, cap):
    n = 0
    for vals in product(pool, repeat=len(names)):
        yield dict(zip(names, vals))
        n += 1
        if n >= cap:
            return


def strong_sub(M, N, emb, res: Optional[MorleyizationResult] = None, fragment=None, params=None,
               max_valuations: int = 64, ctx: Optional[SchemaContext] = None) -> Verdict:
    """``M < N`` along ``emb``: elementarity on ``fragment`` plus the tag cofinality condition."""
    finite = isinstance(M, FiniteStructure)
    vocab = M.vocab
    if fragment is None:
        fragment = default_fragment(res, vocab, probes=not finite)
    if finite:
        pool = list(M.universe)
        evm, evn = FiniteEvaluator(M, ctx), FiniteEvaluator(N, ctx)
        cap = None
    else:
        pool = list(params) if params is not None else default_params(M)
        for ts in M.tags.values():
            for tup in ts:
                pool += [e for e in tup if e not in pool]
        evm, evn = OrderEvaluator(M, ctx), OrderEvaluator(N, ctx)
        cap = max_valuations
    checked = 0

    # tags are relations of the structures: preserved and reflected on M's tuples
    rows = res.rows if res is not None else {}
    for name in rows:
        mt = _tag_tuples(M, name)
        nt = _tag_tuples(N, name)
        for tup in mt:
            checked += 1
            if emb.map_tuple(tup) not in nt:
                return Verdict(False, finite, checked, ("tag", name, tup))

    for f in fragment:
        names = free_order(f)
        vals = _valuations(names, pool, cap) if cap else (dict(zip(names, v)) for v in product(pool, repeat=len(names)))
        for env in vals:
            checked += 1
            img = {k: emb(v) for k, v in env.items()}
            if evm.eval(f, env) != evn.eval(f, img):
                return Verdict(False, finite, checked, ("elementarity", to_text(f), tuple(env.values())))

    for name, row in rows.items():
        for tup in sorted(_tag_tuples(M, name), key=repr):
            checked += 1
            if not _cofinal(M, N, emb, row, tup, evm, evn):
                return Verdict(False, finite, checked, ("cofinality", row.alias, tup))
    return Verdict(True, finite, checked)


def _tag_tuples(S, name):
    return S.relations.get(name, frozenset()) if isinstance(S, FiniteStructure) else S.tags.get(name, frozenset())


def _cofinal(M, N, emb, row, tup, evm, evn) -> bool:
    node = row.formula
    env = dict(zip(row.zs, tup))
    img = {k: emb(v) for k, v in env.items()}
    if isinstance(M, FiniteStructure):
        return _cofinal_finite(M, N, emb, node, env, img, evm, evn)
    x = node.xs[0]
    field_formula = _field(node)
    s_m = evm.definable_set(field_formula, x, env)
    s_n = evn.definable_set(field_formula, x, img)
    return is_cofinal_image(emb, s_m, s_n)


def _field(node):
    """Points related to something on either side; a top point belongs to the order."""
    swap = {**{a: Var(b) for a, b in zip(node.xs, node.ys)}, **{b: Var(a) for a, b in zip(node.xs, node.ys)}}
    return Or((Exists(node.ys, node.body), Exists(node.ys, substitute(node.body, swap))))


def is_cofinal_image(emb: OrderInclusion, s_m: IntervalSet, s_n: IntervalSet) -> bool:
    """Is the image of ``s_m`` cofinal in ``s_n``?"""
    t = s_n.owner
    if s_m.is_empty():
        return s_n.is_empty()
    if s_n.is_empty():
        return False
    sup = norm_cut(t, emb.sup_image(s_m))
    return cut_cmp(t, sup, norm_cut(t, s_n.top_cut())) >= 0


def _cofinal_finite(M, N, emb, node, env, img, evm, evn) -> bool:
    xs, ys = node.xs, node.ys
    k = len(xs)
    field_formula = _field(node)

    def field_of(ev, S, base):
        out = []
        for tup in product(S.universe, repeat=k):
            e = {**base, **dict(zip(xs, tup))}
            if ev.eval(field_formula, e):
                out.append(tup)
        return out

    fm = [emb.map_tuple(t) for t in field_of(evm, M, env)]
    fn = field_of(evn, N, img)
    for b in fn:
        ok = False
        for a in fm:
            e = {**img, **dict(zip(xs, b)), **dict(zip(ys, a))}
            if a == b or evn.eval(node.body, e):
                ok = True
                break
        if not ok:
            return False
    return True


def check_coherence(M0, M1, M2, e01, e12, res=None, **kw) -> Optional[Verdict]:
    """Coherence: if ``M0 < M2`` and ``M1 < M2`` then ``M0 < M1``.

    Returns None when the premises fail, else the verdict on ``M0 < M1``.
    """
    e02 = e01.then(e12)
    if not strong_sub(M0, M2, e02, res, **kw) or not strong_sub(M1, M2, e12, res, **kw):
        return None
    return strong_sub(M0, M1, e01, res, **kw)


# symbolic chains -----------------------------------------------------------------------------


@dataclass
class SymbolicChain:
    """Stages indexed by sample indices; the union is given symbolically.

    ``embed(i, j)`` includes stage ``i`` into stage ``j``, ``to_limit(i)``
    includes stage ``i`` into the union.  ``limit`` is None when the union
    is not expressible.
    """

    name: str
    length: str
    stage: Callable
    embed: Callable
    limit: Optional[Callable]
    to_limit: Optional[Callable]
    samples: tuple
    res: Optional[MorleyizationResult] = None


def union_of_chain(chain: SymbolicChain) -> OrderStructure:
    if chain.limit is None:
        raise NotExpressible(f"union of {chain.name} is outside the order algebra")
    return chain.limit()


@dataclass
class ChainReport:
    name: str
    length: str
    stages: list
    steps: list = field(default_factory=list)  # (i, j, verdict)
    to_union: list = field(default_factory=list)  # (i, verdict)
    union: Optional[OrderStructure] = None
    union_cofinality: Optional[O.CofTag] = None
    tags: Optional[object] = None  # TagReport on the union
    trace: list = field(default_factory=list)  # (stage, alias, tuple, cofinality)

    @property
    def steps_ok(self) -> bool:
        return all(v.holds for _, _, v in self.steps)

    @property
    def union_ok(self) -> bool:
        return self.tags is None or self.tags.ok

    @property
    def smooth(self) -> bool:
        return self.steps_ok and self.union_ok and all(v.holds for _, v in self.to_union)

    def lines(self) -> list:
        out = [f"chain {self.name} of length {self.length}"]
        for i, j, v in self.steps:
            out.append(f"  stage {i} < stage {j}: {v.describe()}")
        for i, v in self.to_union:
            out.append(f"  stage {i} < union: {v.describe()}")
        out.append(f"  union {O.format_term(self.union.carrier)} has cofinality {self.union_cofinality}")
        for stage, alias, tup, cof in self.trace:
            out.append(f"  {stage}: {alias}{list(tup)} cofinality {cof}")
        if self.tags is not None:
            out.append(f"  union satisfies the tag axioms: {self.tags.ok}")
        return out


def _row_cof(S: OrderStructure, row, tup):
    node = row.formula
    info = OrderEvaluator(S).qcof_info(node.body, node.xs[0], node.ys[0], dict(zip(row.zs, tup)))
    return info["cof"]


def run_chain(chain: SymbolicChain, check_steps: bool = True) -> ChainReport:
    stages = [chain.stage(i) for i in chain.samples]
    rep = ChainReport(chain.name, chain.length, stages)
    res = chain.res
    if check_steps:
        for i, j in zip(chain.samples, chain.samples[1:]):
            M, N = chain.stage(i), chain.stage(j)
            rep.steps.append((i, j, strong_sub(M, N, chain.embed(i, j), res)))
    U = union_of_chain(chain)
    rep.union = U
    rep.union_cofinality = O.cofinality(U.carrier)
    if check_steps:
        for i in chain.samples:
            rep.to_union.append((i, strong_sub(chain.stage(i), U, chain.to_limit(i), res)))
    if res is not None:
        rep.tags = tag_models(U, res)
        for label, S in [(f"stage {i}", s) for i, s in zip(chain.samples, stages)] + [("union", U)]:
            for row in res.rows.values():
                for tup in sorted(S.tags.get(row.name, ()), key=repr):
                    rep.trace.append((label, row.alias, tup, _row_cof(S, row, tup)))
    return rep


def cofinality_theory(extra: str = ""):
    """T = {QCof(w; x, y; x < y)}: the whole order has countable cofinality."""
    from .formulas import parse

    vocab = Vocabulary.of(relations={"<": 2})
    return Theory(vocab, [parse("(qcof (w) (x) (y) (< x y))", vocab)])


def _tagged(carrier, res):
    tags = {name: {()} for name, row in res.rows.items() if row.arity == 0}
    return OrderStructure(res.vocab, carrier, {}, tags)


def fin_chain() -> SymbolicChain:
    """``Fin(1) < Fin(2) < ...``, each an end extension; the union is ``Ord(w)``."""
    stage = lambda n: pure_order(O.Fin(n + 1))
    omega = O.Ord(OrdinalCNF(((ONE, 1),)))

    def embed(i, j):
        return OrderInclusion(stage(i), stage(j), lambda e: e, before(i + 1) if i < j else PLUS_INF, "end")

    def to_limit(i):
        return OrderInclusion(stage(i), pure_order(omega), nat, before(nat(i + 1)), "end")

    return SymbolicChain("Fin(n+1)", "w", stage, embed, lambda: pure_order(omega), to_limit, tuple(range(6)))


def omega_times(a: OrdinalCNF) -> OrdinalCNF:
    """``w * a`` in Cantor normal form."""
    return OrdinalCNF(tuple((ONE + e, c) for e, c in a.terms))


def tagged_end_chain(samples=None) -> SymbolicChain:
    """Negative control: ``Ord(w*(a+1))`` tagged with cofinality w, end-extended
    along ``a < k1``.  Every stage satisfies the tag; the union is ``k1``."""
    from .ordinals import parse_ordinal

    res = morleyize(cofinality_theory())
    if samples is None:
        samples = tuple(parse_ordinal(s) for s in ("0", "1", "5", "w", "w+3", "w^2", "w^w"))
    height = lambda a: omega_times(a.succ())
    stage = lambda a: _tagged(O.Ord(height(a)), res)

    def embed(a, b):
        top = PLUS_INF if a == b else before(height(a))
        return OrderInclusion(stage(a), stage(b), lambda e: e, top, "end")

    def to_limit(a):
        return OrderInclusion(stage(a), limit(), lambda e: O.Stratified((), e), before(O.Stratified((), height(a))), "end")

    limit = lambda: _tagged(O.NamedRegular(1), res)
    return SymbolicChain("Ord(w*(a+1))", "k1", stage, embed, limit, to_limit, tuple(samples), res)


DLO_POOL = (
    O.Q,
    O.LexProd(O.Q, O.Fin(2)),
    O.LexProd(O.Q, O.Fin(3)),
    O.LexProd(O.Q, O.Ord(OrdinalCNF(((ONE, 1),)))),
    O.LexProd(O.Q, O.Q),
    O.LexProd(O.LexProd(O.Q, O.Fin(2)), O.Q),
)


def insertion_chain(B=O.Q, X=O.Q, T=O.Q, n_samples: int = 5, res=None) -> SymbolicChain:
    """Dense chain ``B + X*(n+2) + T``: each step inserts a copy of ``X`` below ``T``,
    so the old stage stays cofinal.  The union is ``B + X*w + T``."""
    res = res or morleyize(cofinality_theory())
    omega = O.Ord(OrdinalCNF(((ONE, 1),)))
    carrier = lambda n: O.Sum((B, O.LexProd(X, O.Fin(n + 2)), T))
    base = tags_for(carrier(0), res)

    def lift_elt(e):
        return O.At(1, O.Pair(nat(e.elt.index), e.elt.block)) if e.part == 1 else e

    def stage(n):
        return OrderStructure(res.vocab, carrier(n), {}, base)

    def embed(i, j):
        return OrderInclusion(stage(i), stage(j), lambda e: e, PLUS_INF, "insert")

    def to_limit(i):
        return OrderInclusion(stage(i), limit(), lift_elt, PLUS_INF, "insert")

    def limit():
        tags = {n: {tuple(lift_elt(e) for e in tup) for tup in ts} for n, ts in base.items()}
        return OrderStructure(res.vocab, O.Sum((B, O.LexProd(X, omega), T)), {}, tags)

    name = f"{O.format_term(B)} + {O.format_term(X)}*(n+2) + {O.format_term(T)}"
    return SymbolicChain(name, "w", stage, embed, limit, to_limit, tuple(range(n_samples)), res)


# proper extensions ---------------------------------------------------------------------------


def proper_extend(M: OrderStructure, res: Optional[MorleyizationResult] = None, psi: Optional[str] = None,
                  extension=None, params=None):
    """A proper extension ``M < N``, adding points right after one part of the carrier.

    The new points join the predicate ``psi``.  Without ``psi`` every
    predicate that no tag row mentions is a candidate; a structure with no
    predicates at all takes the points unlabelled.  Insertion places are
    tried from the right and the first that passes ``strong_sub`` is returned
    as ``(N, inclusion, verdict)``.
    """
    from .analysis import relation_symbols
    from .embeddings import parts

    if psi is not None:
        regions = [psi]
    elif M.preds:
        used = set()
        for row in (res.rows.values() if res is not None else ()):
            used |= relation_symbols(row.formula)
        regions = [p for p in sorted(M.preds) if p not in used]
    else:
        regions = [None]
    tried = []
    for region in regions:
        for k in reversed(range(len(parts(M.carrier)))):
            emb = insert_part(M, k, extension, absorb=(region,) if region else ())
            if region is not None and emb.fresh not in emb.target.preds[region]:
                continue
            v = strong_sub(M, emb.target, emb, res, params=params)
            tried.append((region, k, v))
            if v.holds:
                return emb.target, emb, v
    detail = "; ".join(f"{r} after part {k}: {v.describe()}" for r, k, v in tried) or "no untagged predicate region"
    raise NoUntaggedRegion(f"every extendable region is tagged ({detail})")


# lifts on finite structures -----------------------------------------------------------------


@dataclass
class Lift:
    base: FiniteStructure
    expansion: FiniteStructure
    skres: object

    def reduct_ok(self) -> bool:
        return self.expansion.reduct(self.base.vocab) == self.base

    def models(self) -> bool:
        ev = FiniteEvaluator(self.expansion)
        return all(ev.eval(s) for s in self.skres.theory.sentences)

    def tables(self) -> dict:
        return {(n, ix, args): v for (n, ix), tab in self.expansion.functions.items() for args, v in tab.items()}


def _open_symbols(skres):
    return sorted(skres.registry)


def _complete(M, skres, tables):
    """Turn a partial table into total function interpretations on ``M``."""
    vocab = skres.theory.vocab
    funcs: dict = {}
    for (fn, ix, args), v in tables.items():
        funcs.setdefault((fn, ix), {})[args] = v
    for name in _open_symbols(skres):
        sym = vocab[name]
        if sym.indexed:
            continue
        tab = funcs.setdefault((name, None), {})
        for args in product(M.universe, repeat=sym.arity):
            if args not in tab:
                tab[args] = M.universe[0]
    rels = {n: ts for n, ts in M.relations.items()}
    return FiniteStructure(vocab, M.universe, rels, funcs)


def find_lift(M: FiniteStructure, skres, prescribed: Optional[dict] = None, choices=None) -> Optional[Lift]:
    """A lift of ``M`` to the Skolemized vocabulary whose tables extend ``prescribed``."""
    base = FiniteStructure(skres.theory.vocab, M.universe, M.relations)
    tables = expansion_exists(base, And(tuple(skres.theory.sentences)), _open_symbols(skres),
                              initial=prescribed, choices=choices)
    if tables is None:
        return None
    return Lift(M, _complete(M, skres, tables), skres)


def lift_chain(chain, skres) -> list:
    """Lift ``M0 ⊆ M1 ⊆ ...`` so that each lift extends the previous one."""
    lifts = []
    prev = None
    for k, M in enumerate(chain):
        prescribed = prev.tables() if prev is not None else None
        lift = find_lift(M, skres, prescribed)
        if lift is None:
            raise NoLiftFound(f"stage {k} has no lift extending the lift of stage {k - 1}")
        lifts.append(lift)
        prev = lift
    return lifts


def strong_sub_via_lifts(M: FiniteStructure, N: FiniteStructure, emb: FiniteEmbedding, skres) -> bool:
    """Is there a lift of ``N`` under which the image of ``M`` is closed?"""
    image = set(emb.mapping.values())
    uni = tuple(N.universe)
    inside = tuple(a for a in uni if a in image)

    def choices(key):
        return inside if all(a in image for a in key[2]) else uni

    base = FiniteStructure(skres.theory.vocab, N.universe, N.relations)
    sentence = And(tuple(skres.theory.sentences))
    return expansion_exists(base, sentence, _open_symbols(skres), choices=choices) is not None


@dataclass
class HullReport:
    elements: tuple
    substructure: FiniteStructure
    reduct: FiniteStructure
    bound: int
    rounds: int

    @property
    def within_bound(self) -> bool:
        return len(self.elements) <= self.bound


def skolem_hull(A, lift: Lift, surrogate: int = 8) -> HullReport:
    """Close ``A`` under every function of the lift.

    The reported bound is ``|A| + |vocabulary| * surrogate`` with ``surrogate``
    standing in for the countable Löwenheim-Skolem number.
    """
    S = lift.expansion
    vocab = S.vocab
    hull = list(dict.fromkeys(A))
    have = set(hull)
    funcs = [(key, tab, vocab[key[0]].arity) for key, tab in S.functions.items()]
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        snapshot = list(hull)
        for key, tab, ar in funcs:
            for args in product(snapshot, repeat=ar):
                if args not in tab:
                    raise NonClosure(f"{key[0]} has no value at {args}")
                v = tab[args]
                if v not in have:
                    have.add(v)
                    hull.append(v)
                    changed = True
    sub = S.restrict(hull)
    bound = len(set(A)) + len(vocab) * surrogate
    return HullReport(tuple(a for a in S.universe if a in have), sub, sub.reduct(lift.base.vocab), bound, rounds)


# seeded campaign -----------------------------------------------------------------------------


@dataclass
class CampaignReport:
    seed: int
    counts: dict = field(default_factory=dict)  # property -> instances checked
    skipped: dict = field(default_factory=dict)  # property -> premises not met
    counterexamples: list = field(default_factory=list)  # (property, description)

    @property
    def instances(self) -> int:
        return sum(self.counts.values())

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def bump(self, prop, skipped=False):
        d = self.skipped if skipped else self.counts
        d[prop] = d.get(prop, 0) + 1

    def table(self) -> list:
        props = sorted(set(self.counts) | set(self.skipped))
        rows = []
        for p in props:
            bad = sum(1 for q, _ in self.counterexamples if q == p)
            rows.append({"property": p, "checked": self.counts.get(p, 0), "premise_failed": self.skipped.get(p, 0),
                         "counterexamples": bad})
        return rows

    def lines(self) -> list:
        out = [f"seed {self.seed}: {self.instances} instances, {len(self.counterexamples)} counterexamples"]
        for r in self.table():
            out.append(f"  {r['property']:<17} checked {r['checked']:>4}  premise failed {r['premise_failed']:>4}  "
                       f"counterexamples {r['counterexamples']}")
        for p, d in self.counterexamples:
            out.append(f"  counterexample [{p}]: {d}")
        return out


ORDER_POOL = DLO_POOL + (
    O.Ord(OrdinalCNF(((ONE, 1),))),
    O.Ord(OrdinalCNF(((ONE, 2),))),
    O.Sum((O.Q, O.Fin(1))),
    O.Sum((O.Ord(OrdinalCNF(((ONE, 1),))), O.Q)),
    O.Fin(3),
)


def tags_for(carrier, res: MorleyizationResult, budget: int = 3) -> dict:
    """Tag every sampled tuple at which its row holds, so the tag axioms hold."""
    bare = OrderStructure(res.vocab, carrier)
    ev = OrderEvaluator(bare)
    pool = O.element_iter(carrier, budget)
    tags = {}
    for name, row in sorted(res.rows.items()):
        tags[name] = {tup for tup in product(pool, repeat=row.arity) if ev.eval(row.formula, dict(zip(row.zs, tup)))}
    return tags


def _tagged_instance(rng, res):
    carrier = rng.choice(ORDER_POOL)
    return OrderStructure(res.vocab, carrier, {}, tags_for(carrier, res))


def _random_extension(rng, M):
    kind = rng.randrange(5)
    if kind == 0:
        return insert_part(M, rng.randrange(len(_parts(M))), rng.choice((None, O.Q, O.Fin(1))))
    if kind == 1:
        return prefix_extend(M, rng.choice((O.Q, O.Fin(1))))
    if kind == 2:
        return end_extend(M, rng.choice((O.Fin(1), O.Sum((O.Fin(1), O.Q)))))
    if kind == 3:
        return thicken(M, rng.choice((1, 2)))
    return identity(M)


def _parts(M):
    from .embeddings import parts

    return parts(M.carrier)


def _random_fo_theory(rng):
    from .formulas import parse

    vocab = Vocabulary.of(relations={"E": 2})
    pool = [
        "(forall (x) (exists (y) (E x y)))",
        "(exists (x) (forall (y) (not (E y x))))",
        "(forall (x) (not (E x x)))",
        "(forall (x y) (-> (E x y) (E y x)))",
        "(exists (x y) (E x y))",
    ]
    picks = rng.sample(pool, rng.randint(1, 2))
    return Theory(vocab, [parse(s, vocab) for s in picks])


def campaign(seed: int = 0, instances: int = 500, theory: Optional[Theory] = None) -> CampaignReport:
    """Reflexivity, transitivity, coherence, smoothness and hull bounds on seeded instances.

    ``theory`` (over ``<`` alone) replaces the default cofinality theory on
    the order side; finite instances draw small first-order theories.
    """
    from .expansion import all_structures
    from .finite_eval import eval_finite
    from .skolemization import skolemize_theory

    rng = random.Random(seed)
    rep = CampaignReport(seed)
    if theory is not None and set(theory.vocab) - {"<"}:
        raise UnsupportedKind("campaign theories may only use <")
    res = morleyize(theory or cofinality_theory())
    fo_cache = {}

    def record(prop, ok, desc):
        rep.bump(prop)
        if not ok:
            rep.counterexamples.append((prop, desc))

    kinds = ["reflexive", "transitive", "coherence", "smoothness", "hull", "finite-coherence"]
    attempts = 0
    while rep.instances < instances and attempts < 20 * instances:
        prop = kinds[attempts % len(kinds)]
        attempts += 1
        if prop == "reflexive":
            M = _tagged_instance(rng, res)
            v = strong_sub(M, M, identity(M), res)
            record(prop, v.holds, f"{O.format_term(M.carrier)}: {v.describe()}")
        elif prop in ("transitive", "coherence"):
            M0 = _tagged_instance(rng, res)
            e01 = _random_extension(rng, M0)
            e12 = _random_extension(rng, e01.target)
            desc = f"{O.format_term(M0.carrier)} via {e01.name}, {e12.name}"
            if prop == "transitive":
                a = strong_sub(M0, e01.target, e01, res)
                b = strong_sub(e01.target, e12.target, e12, res)
                if not (a and b):
                    rep.bump(prop, skipped=True)
                    continue
                record(prop, strong_sub(M0, e12.target, e01.then(e12), res).holds, desc)
            else:
                v = check_coherence(M0, e01.target, e12.target, e01, e12, res)
                if v is None:
                    rep.bump(prop, skipped=True)
                    continue
                record(prop, v.holds, desc)
        elif prop == "smoothness":
            B, X, T = (rng.choice(DLO_POOL) for _ in range(3))
            r = run_chain(insertion_chain(B, X, T, n_samples=2, res=res))
            record(prop, r.smooth, r.name)
        elif prop == "hull":
            T = _random_fo_theory(rng)
            key = tuple(to_text(s) for s in T.sentences)
            sk = fo_cache.get(key) or fo_cache.setdefault(key, skolemize_theory(T))
            n = rng.randint(1, 3)
            models = [S for S in all_structures(T.vocab, n) if all(eval_finite(S, s) for s in T.sentences)]
            if not models:
                rep.bump(prop, skipped=True)
                continue
            M = rng.choice(models)
            lift = find_lift(M, sk)
            if lift is None:
                rep.bump(prop, skipped=True)
                continue
            A = rng.sample(list(M.universe), rng.randint(0, n))
            h = skolem_hull(A, lift)
            ev = FiniteEvaluator(h.substructure)
            ok = h.within_bound and (not h.elements or all(ev.eval(s) for s in sk.theory.sentences))
            record(prop, ok, f"{key} on {M.universe} from {A}")
        else:
            T = _random_fo_theory(rng)
            tres = morleyize(T)
            M2 = rng.choice(list(all_structures(T.vocab, 3)))
            u = list(M2.universe)
            k0 = rng.randint(1, 2)
            s0 = sorted(rng.sample(u, k0))
            s1 = sorted(set(s0) | set(rng.sample(u, rng.randint(k0, 3))))
            M0, M1 = M2.restrict(s0), M2.restrict(s1)
            v = check_coherence(M0, M1, M2, inclusion(M0, M1), inclusion(M1, M2), tres)
            if v is None:
                rep.bump(prop, skipped=True)
                continue
            record(prop, v.holds, f"{s0} in {s1} in {u}")
    return rep
