"""Existential-block translations of the generalized quantifiers.

Each supported quantifier is rewritten as one block ``exists <x_i : i < k>``
in front of a formula that only quantifies finitely.  Tuples of length l
use one indexed family per coordinate, ``$x0[i] ... $x{l-1}[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import substitute
from .errors import UnsupportedKind
from .formulas import (
    FALSE,
    Aleph0,
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
    KappaCard,
    Not,
    Or,
    QCard,
    QCof,
    QEc,
    Var,
)
from .orders import CofTag

REPRESENTATIVES = "representatives"
COVERING = "covering"


@dataclass(frozen=True)
class QuantifierTranslation:
    kind: str  # qcard, not-qcard, qcof, qec
    node: object  # the quantifier formula being translated
    bound: object  # block size token, or None for a schema / degenerate row
    families: tuple
    formula: object
    schema: bool = False
    degenerate: bool = False
    note: str = ""


# building blocks ------------------------------------------------------------------


def family_names(prefix: str, width: int) -> tuple:
    return tuple(f"{prefix}{k}" for k in range(width))


def member(fams, i):
    """The i-th tuple of a block as terms."""
    return tuple(Var(f, Idx(i) if isinstance(i, str) else Idx(None, i)) for f in fams)


def plug(body, names, terms):
    return substitute(body, dict(zip(names, terms)))


def tuple_eq(us, vs):
    parts = tuple(Eq(a, b) for a, b in zip(us, vs))
    return parts[0] if len(parts) == 1 else And(parts)


def block(fams, bound, body):
    for f in reversed(fams):
        body = ExistsBlock(f, bound, body)
    return body


def pairwise(bound, fn):
    """``bigand_{j<bound} bigand_{i<j} fn(i, j)``."""
    return BigAnd("j", bound, BigAnd("i", "j", fn("i", "j")))


def linear_no_last(body, xs, ys):
    """First-order: ``body`` orders its field linearly (strict or reflexive) without a last element."""
    n = len(xs)
    A, B, C, D = (family_names(p, n) for p in ("$a", "$b", "$c", "$d"))
    vA, vB, vC, vD = ([Var(v) for v in t] for t in (A, B, C, D))
    phi = lambda s, t: plug(body, xs + ys, tuple(s) + tuple(t))
    field_ = lambda s: Exists(D, Or((phi(s, vD), phi(vD, s))))
    neq = lambda s, t: Not(tuple_eq(s, t))
    total = Forall(A + B, Implies(And((field_(vA), field_(vB), neq(vA, vB))), Iff(phi(vA, vB), Not(phi(vB, vA)))))
    trans = Forall(A + B + C, Implies(And((phi(vA, vB), phi(vB, vC))), phi(vA, vC)))
    strict = And((
        Forall(A, Not(phi(vA, vA))),
        Forall(A, Implies(field_(vA), Exists(B, phi(vA, vB)))),
    ))
    reflexive = And((
        Forall(A, Implies(field_(vA), phi(vA, vA))),
        Forall(A, Implies(field_(vA), Exists(B, And((phi(vA, vB), Not(phi(vB, vA))))))),
    ))
    return And((total, trans, Or((strict, reflexive))))


def equivalence(body, xs, ys):
    """First-order: ``body`` is an equivalence relation on ``{a : body(a, a)}``."""
    n = len(xs)
    A, B, C = (family_names(p, n) for p in ("$a", "$b", "$c"))
    vA, vB, vC = ([Var(v) for v in t] for t in (A, B, C))
    phi = lambda s, t: plug(body, xs + ys, tuple(s) + tuple(t))
    closed = Forall(A + B, Implies(phi(vA, vB), And((phi(vA, vA), phi(vB, vB), phi(vB, vA)))))
    trans = Forall(A + B + C, Implies(And((phi(vA, vB), phi(vB, vC))), phi(vA, vC)))
    return And((closed, trans))


def tag_bound(tag: CofTag):
    if tag.rank == 2:
        return Aleph0()
    if tag.rank > 2:
        return KappaCard(tag.rank - 2)
    raise UnsupportedKind(f"cofinality {tag} has no block translation (cofinalities 0 and 1 are not limits)")


def predecessor(tok):
    """Block size for the negated successor row, or None at a limit."""
    if isinstance(tok, Finite):
        return Finite(tok.n - 1)
    if isinstance(tok, KappaCard):
        return Aleph0() if tok.i == 1 else KappaCard(tok.i - 1)
    return None


# rows ---------------------------------------------------------------------------------


def _cof_core(body, xs, ys, fams, bound):
    """Chain and covering conjuncts over one block."""
    n = len(xs)
    us = family_names("$u", n)
    vs = family_names("$v", n)
    phi = lambda s, t: plug(body, xs + ys, tuple(s) + tuple(t))
    chain = pairwise(bound, lambda i, j: phi(member(fams, i), member(fams, j)))
    u = [Var(v) for v in us]
    in_domain = Exists(vs, phi(u, [Var(v) for v in vs]))
    cover = Forall(us, Implies(in_domain, BigOr("i", bound, phi(u, member(fams, "i")))))
    return chain, cover


def cof_row(node: QCof, prefix="$x"):
    if len(node.tags) != 1:
        raise UnsupportedKind("the block translation takes a single cofinality; use translate_cof_infinitary")
    bound = tag_bound(node.tags[0])
    fams = family_names(prefix, len(node.xs))
    chain, cover = _cof_core(node.body, node.xs, node.ys, fams, bound)
    lo = linear_no_last(node.body, node.xs, node.ys)
    return QuantifierTranslation("qcof", node, bound, fams, block(fams, bound, And((lo, chain, cover))))


def card_row(node: QCard, prefix="$x"):
    fams = family_names(prefix, len(node.xs))
    t = node.token
    holds = BigAnd("i", t, plug(node.body, node.xs, member(fams, "i")))
    distinct = pairwise(t, lambda i, j: Or(tuple(Not(Eq(a, b)) for a, b in zip(member(fams, i), member(fams, j)))))
    return QuantifierTranslation("qcard", node, t, fams, block(fams, t, And((holds, distinct))))


def _covered_by(node, fams, bound):
    us = family_names("$u", len(node.xs))
    u = [Var(v) for v in us]
    inside = BigOr("i", bound, tuple_eq(u, member(fams, "i")))
    return Forall(us, Implies(plug(node.body, node.xs, u), inside))


def not_card_row(node: QCard, prefix="$x"):
    fams = family_names(prefix, len(node.xs))
    t = node.token
    if t == Finite(0):
        return QuantifierTranslation("not-qcard", node, None, fams, FALSE, degenerate=True,
                                     note="fewer than zero witnesses is impossible")
    pred = predecessor(t)
    if pred is not None:
        return QuantifierTranslation("not-qcard", node, pred, fams, block(fams, pred, _covered_by(node, fams, pred)))
    # limit: fewer than aleph0 means covered by some finite block
    f = BigOr("m", t, block(fams, "m", _covered_by(node, fams, "m")))
    return QuantifierTranslation("not-qcard", node, None, fams, f, schema=True,
                                 note="limit token: disjunction over smaller block sizes")


def ec_row(node: QEc, prefix="$x", form=REPRESENTATIVES):
    fams = family_names(prefix, len(node.xs))
    t = node.token
    phi = lambda s, u: plug(node.body, node.xs + node.ys, tuple(s) + tuple(u))
    eqv = equivalence(node.body, node.xs, node.ys)
    if form == REPRESENTATIVES:
        reps = BigAnd("i", t, phi(member(fams, "i"), member(fams, "i")))
        apart = pairwise(t, lambda i, j: Not(phi(member(fams, i), member(fams, j))))
        body = And((eqv, reps, apart))
    elif form == COVERING:
        us = family_names("$u", len(node.xs))
        u = [Var(v) for v in us]
        body = And((eqv, Forall(us, Implies(phi(u, u), BigOr("i", t, phi(member(fams, "i"), u))))))
    else:
        raise ValueError(f"unknown equivalence-class row form {form!r}")
    return QuantifierTranslation("qec", node, t, fams, block(fams, t, body), note=form)


def translate_quantifier(node, negated: bool = False, qec_form: str = REPRESENTATIVES,
                         prefix: str = "$x") -> QuantifierTranslation:
    if isinstance(node, QCard):
        return not_card_row(node, prefix) if negated else card_row(node, prefix)
    if negated:
        raise UnsupportedKind(f"no block translation for a negated {type(node).__name__}")
    if isinstance(node, QCof):
        return cof_row(node, prefix)
    if isinstance(node, QEc):
        return ec_row(node, prefix, qec_form)
    raise UnsupportedKind(f"{type(node).__name__} is not a generalized quantifier")


def translate_cof_infinitary(tags, body, xs=("x",), ys=("y",), prefix="$x") -> QuantifierTranslation:
    """Linear order without last element, and a cofinal increasing block for some tag in ``tags``."""
    xs, ys = tuple(xs), tuple(ys)
    tags = sorted(set(tags))
    disjuncts, families = [], []
    for n, tag in enumerate(tags):
        bound = tag_bound(tag)
        fams = family_names(f"{prefix}{n}_" if len(tags) > 1 else prefix, len(xs))
        families.extend(fams)
        chain, cover = _cof_core(body, xs, ys, fams, bound)
        disjuncts.append(block(fams, bound, And((chain, cover))))
    f = And((linear_no_last(body, xs, ys), Or(tuple(disjuncts))))
    node = QCof(tuple(tags), xs, ys, body) if tags else None
    return QuantifierTranslation("qcof", node, None, tuple(families), f, degenerate=not tags,
                                 note="empty tag set denotes falsum" if not tags else "")


def row_for(node, negated=False, qec_form=REPRESENTATIVES, prefix="$x") -> QuantifierTranslation:
    """Translation used by the pipeline; multi-tag QCof goes through the disjunction."""
    if isinstance(node, QCof) and len(node.tags) != 1 and not negated:
        return translate_cof_infinitary(node.tags, node.body, node.xs, node.ys, prefix)
    return translate_quantifier(node, negated, qec_form, prefix)


# checking a row against the quantifier ------------------------------------------------------


@dataclass
class TranslationReport:
    agreements: int = 0
    disagreements: list = field(default_factory=list)
    mode: str = "brute-force"
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _lhs(tr):
    if tr.node is None:
        return FALSE
    return Not(tr.node) if tr.kind == "not-qcard" else tr.node


def verify_translation(M, tr: QuantifierTranslation, surrogate=None, params=None, **kw) -> TranslationReport:
    """Compare the quantifier with its row, tuple by tuple.

    Finite structures use surrogate thresholds and exhaustive search.  Order
    structures support the cofinality row, with an explicit omega-sequence
    as the block, or the symbolic cofinality when the block is uncountable.
    """
    from itertools import product

    from .analysis import free_order
    from .structures import FiniteStructure

    lhs = _lhs(tr)
    names = free_order(lhs)
    rep = TranslationReport()
    if isinstance(M, FiniteStructure):
        from .finite_eval import FiniteEvaluator, SchemaContext

        ev = FiniteEvaluator(M, SchemaContext(surrogate))
        for vals in product(M.universe, repeat=len(names)):
            env = dict(zip(names, vals))
            a, b = ev.eval(lhs, env), ev.eval(tr.formula, env)
            if a == b:
                rep.agreements += 1
            else:
                rep.disagreements.append((vals, a, b))
        return rep
    return _verify_order(M, tr, names, params or {}, rep, **kw)


def _verify_order(M, tr, names, params, rep, chain_length=10, reach=200, probes=16):
    from .errors import NoWitnessEnumerator
    from .order_eval import OrderEvaluator

    if tr.kind != "qcof" or len(tr.node.tags) != 1 or len(tr.node.xs) != 1:
        raise UnsupportedKind("order structures verify single-tag cofinality rows over single variables")
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"parameters needed for {missing}")
    node = tr.node
    ev = OrderEvaluator(M)
    env = dict(params)
    lhs = ev.eval(node, env)
    phi = lambda a, b: ev.eval(node.body, {**env, node.xs[0]: a, node.ys[0]: b})
    lo = linear_no_last(node.body, node.xs, node.ys)
    if not ev.eval(lo, env):
        rhs = False
        rep.mode = "side-condition"
        rep.notes.append("linear-order side condition fails")
    else:
        try:
            rhs = _witness_rhs(M, ev, node, env, phi, chain_length, reach, probes) if tr.bound == Aleph0() else None
            rep.mode = "witness-sequence"
        except NoWitnessEnumerator as e:
            rep.notes.append(f"{e}; compared the computed cofinality")
            rhs = None
        if rhs is None:
            if tr.bound != Aleph0():
                rep.notes.append(f"block of size {tr.bound} is not enumerable; compared the computed cofinality")
            rep.mode = "symbolic"
            rhs = ev.qcof_info(node.body, node.xs[0], node.ys[0], env)["cof"] == node.tags[0]
    if lhs == rhs:
        rep.agreements += 1
    else:
        rep.disagreements.append((tuple(params.get(n) for n in names), lhs, rhs))
    return rep


def _witness_rhs(M, ev, node, env, phi, chain_length, reach, probes):
    from . import orders as O
    from .errors import NoWitnessEnumerator
    from .intervals import PLUS_INF
    from .witnesses import cofinal_sequence

    I = ev.definable_set(Exists(node.ys, node.body), node.xs[0], env)
    if I.top_cut() != PLUS_INF:
        raise NoWitnessEnumerator("the field is bounded in the carrier; no explicit sequence is built")
    seq = cofinal_sequence(M.carrier)
    start = next(n for n in range(reach) if seq(n) in I)
    xs = [seq(start + n) for n in range(reach)]
    chain = all(phi(xs[i], xs[j]) for j in range(chain_length) for i in range(j))
    pts = O.element_iter(M.carrier, probes) + I.boundary_elements()
    cover = all(any(phi(p, x) for x in xs) for p in pts if p in I)
    return chain and cover
