"""Two-stage Skolemization.

Stage 1 turns every generalized quantifier into its existential-block row
and replaces each block by an indexed function family ``F[i]`` of the
governing universal variables.  Stage 2 is textbook Skolemization of the
remaining finitary existentials, outside-in and left-to-right, with
functions named ``$sk<seq>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .analysis import expand_finite, is_universal, map_atoms, nnf, substitute
from .errors import BudgetExceeded, UnsupportedKind
from .formulas import (
    FUNCTION,
    And,
    App,
    BigAnd,
    BigOr,
    Eq,
    Exists,
    ExistsBlock,
    Finite,
    Forall,
    Idx,
    Implies,
    Not,
    Or,
    QCard,
    QCof,
    QEc,
    Rel,
    Theory,
    Var,
    Vocabulary,
    children,
    is_infinite,
    to_text,
    with_children,
)
from .morleyization import MorleyizationResult, morleyize
from .translations import REPRESENTATIVES, row_for

Q_NODES = (QCof, QCard, QEc)


@dataclass(frozen=True)
class SkolemSymbol:
    name: str
    kind: str  # "block" for F families, "skolem" for classical functions
    arity: int
    indexed: bool
    origin: str  # text of the formula the symbol witnesses
    source: str  # row alias or sentence number
    path: tuple = ()


@dataclass
class SkolemizationResult:
    vocab_pp: Vocabulary
    t_pp: Theory
    vocab: Vocabulary
    theory: Theory
    registry: dict = field(default_factory=dict)
    translations: list = field(default_factory=list)
    truncated: bool = False
    morleyization: Optional[MorleyizationResult] = None

    @property
    def universal(self) -> bool:
        return all(is_universal(s) for s in self.theory.sentences)


class _Namer:
    def __init__(self):
        self.sk = 0
        self.blocks = 0

    def skolem(self):
        self.sk += 1
        return f"$sk{self.sk - 1}"

    def block_prefix(self):
        self.blocks += 1
        return f"$F{self.blocks - 1}"


# replacing blocks and existentials by function terms ------------------------------------------


def _replace_family(f, family, fn, args):
    """Every ``family[ix]`` becomes ``fn[ix](args)``."""

    def term(u):
        if isinstance(u, Var) and u.name == family and u.index is not None:
            return App(fn, args, u.index)
        return u

    def go(g):
        if isinstance(g, (Rel, Eq)):
            return map_atoms(g, term)
        return with_children(g, [go(c) for c in children(g)])

    return go(f)


class _Skolemizer:
    """Walks an NNF formula, replacing blocks (and, in stage 2, existentials)."""

    def __init__(self, namer, registry, source, block_name, finitary: bool):
        self.namer = namer
        self.registry = registry
        self.source = source
        self.block_name = block_name
        self.finitary = finitary

    def register(self, name, kind, arity, indexed, origin, path):
        self.registry[name] = SkolemSymbol(name, kind, arity, indexed, to_text(origin), self.source, path)

    def run(self, f, univ=(), ands=(), path=()):
        if isinstance(f, Forall):
            keep = tuple(u for u in univ if u not in f.vars)
            return Forall(f.vars, self.run(f.body, keep + f.vars, ands, path + (0,)))
        if isinstance(f, ExistsBlock):
            if ands:
                raise UnsupportedKind("existential block under an indexed conjunction")
            args = tuple(Var(u) for u in univ)
            name = self.block_name(f.family)
            self.register(name, "block", len(args), True, f, path)
            body = _replace_family(f.body, f.family, name, args)
            return self.run(body, univ, ands, path + (0,))
        if isinstance(f, Exists) and self.finitary:
            if len(ands) > 1:
                raise UnsupportedKind("existential under nested indexed conjunctions")
            ix = Idx(ands[0]) if ands else None
            args = tuple(Var(u) for u in univ)
            body = f.body
            for v in f.vars:
                name = self.namer.skolem()
                self.register(name, "skolem", len(args), ix is not None, f, path)
                body = substitute(body, {v: App(name, args, ix)})
            return self.run(body, univ, ands, path + (0,))
        if isinstance(f, BigAnd):
            return BigAnd(f.ivar, f.bound, self.run(f.body, univ, ands + (f.ivar,), path + (0,)))
        if isinstance(f, Q_NODES):
            raise UnsupportedKind("generalized quantifier left after stage 1")
        kids = children(f)
        if not kids:
            return f
        return with_children(f, [self.run(c, univ, ands, path + (k,)) for k, c in enumerate(kids)])


# stage 1 ---------------------------------------------------------------------------------------


def _has_q(f):
    return isinstance(f, Q_NODES) or any(_has_q(c) for c in children(f))


def _translate_inline(f, certs, qec_form):
    """Replace Q and not-Q nodes of an NNF formula by their rows."""
    neg = isinstance(f, Not) and isinstance(f.body, Q_NODES)
    if neg or isinstance(f, Q_NODES):
        node = f.body if neg else f
        if _has_q(node.body):
            raise UnsupportedKind("nested generalized quantifiers are not translated")
        tr = row_for(node, negated=neg, qec_form=qec_form)
        certs.append(tr)
        return tr.formula
    kids = children(f)
    return with_children(f, [_translate_inline(c, certs, qec_form) for c in kids]) if kids else f


def _row_axiom(row, tr):
    head = Rel(row.name, tuple(Var(z) for z in row.zs))
    return Implies(head, tr.formula)


def materialize(f, budget: int):
    """Cut every infinite index range at ``budget`` and unfold; returns (formula, truncated)."""
    cut = [False]

    def go(g):
        if isinstance(g, (BigAnd, BigOr)) and is_infinite(g.bound):
            cut[0] = True
            g = type(g)(g.ivar, Finite(budget), g.body)
        kids = children(g)
        return with_children(g, [go(c) for c in kids]) if kids else g

    return expand_finite(go(f)), cut[0]


def build_T_plusplus(res: MorleyizationResult, qec_form: str = REPRESENTATIVES, budget: int = 8,
                     materialized: bool = False, strict: bool = False, namer=None) -> SkolemizationResult:
    namer = namer or _Namer()
    registry: dict = {}
    certs: list = []
    out = []
    for k, s in enumerate(res.t_star.sentences):
        if not _has_q(s):
            out.append(s)
            continue
        g = _translate_inline(nnf(s), certs, qec_form)
        sk = _Skolemizer(namer, registry, f"sentence {k}", lambda fam: namer.block_prefix(), False)
        out.append(sk.run(g))
    for row in res.rows.values():
        tr = row_for(row.formula, qec_form=qec_form)
        certs.append(tr)
        stem = "F#" + row.name[2:]
        axiom = _row_axiom(row, tr)
        sk = _Skolemizer(namer, registry, row.alias, lambda fam: f"{stem}_{fam[2:]}", False)
        body = sk.run(axiom, row.zs)
        out.append(Forall(row.zs, body) if row.zs else body)
    truncated = False
    if materialized:
        cut = [materialize(s, budget) for s in out]
        out = [c[0] for c in cut]
        truncated = any(c[1] for c in cut)
    vocab = res.vocab
    for sym in registry.values():
        vocab = vocab.add(sym.name, FUNCTION, sym.arity, sym.indexed and not materialized)
    if materialized:
        vocab, out = _split_indexed(vocab, registry, out)
    theory = Theory(vocab, out, res.mode)
    result = SkolemizationResult(vocab, theory, vocab, theory, registry, certs, truncated, res)
    if truncated and strict:
        raise BudgetExceeded(f"index ranges cut at {budget}", partial=result)
    return result


def _split_indexed(vocab, registry, sentences):
    """After materialization ``F[3]`` becomes the plain symbol ``F.3``."""
    names = {}

    def term(u):
        if isinstance(u, App):
            args = tuple(term(a) for a in u.args)
            if u.fn in registry and u.index is not None:
                flat = f"{u.fn}.{u.index.off}"
                names[flat] = len(args)
                return App(flat, args)
            return App(u.fn, args, u.index)
        return u

    def go(g):
        if isinstance(g, (Rel, Eq)):
            return map_atoms(g, term)
        return with_children(g, [go(c) for c in children(g)])

    out = [go(s) for s in sentences]
    for n, ar in sorted(names.items()):
        vocab = vocab.add(n, FUNCTION, ar)
    return vocab, out


# stage 2 --------------------------------------------------------------------------------------


def prenex_universal(f):
    """Pull universal quantifiers to the front where this is sound.

    Universals under an indexed disjunction stay in place.  Bound names are
    renamed apart only on a clash.
    """
    used = set()

    def fresh(v):
        k = 0
        while f"{v}_{k}" in used:
            k += 1
        return f"{v}_{k}"

    def go(g):
        if isinstance(g, Forall):
            names = []
            ren = {}
            for v in g.vars:
                if v in used:
                    ren[v] = fresh(v)
                    v = ren[v]
                used.add(v)
                names.append(v)
            body = substitute(g.body, {a: Var(b) for a, b in ren.items()}) if ren else g.body
            inner, m = go(body)
            return tuple(names) + inner, m
        if isinstance(g, (And, Or)):
            vs, parts = (), []
            for p in g.parts:
                pv, pm = go(p)
                vs += pv
                parts.append(pm)
            return vs, type(g)(tuple(parts))
        if isinstance(g, BigAnd):
            vs, m = go(g.body)
            return vs, BigAnd(g.ivar, g.bound, m)
        if isinstance(g, BigOr):
            return (), BigOr(g.ivar, g.bound, close(*go(g.body)))
        return (), g

    return close(*go(f))


def close(vs, m):
    return Forall(vs, m) if vs else m


def to_universal(T: Theory, namer=None, registry=None) -> tuple:
    """Skolemize the finitary existentials; returns (theory, registry)."""
    namer = namer or _Namer()
    registry = {} if registry is None else registry
    out = []
    vocab = T.vocab
    for k, s in enumerate(T.sentences):
        if is_universal(s):
            out.append(s)
            continue
        g = nnf(s)
        sk = _Skolemizer(namer, registry, f"sentence {k}", lambda fam: fam, True)
        out.append(prenex_universal(sk.run(g)))
    for sym in registry.values():
        if sym.name not in vocab:
            vocab = vocab.add(sym.name, FUNCTION, sym.arity, sym.indexed)
    return Theory(vocab, out, T.mode), registry


def skolemize_theory(T: Theory, qec_form: str = REPRESENTATIVES, budget: int = 8,
                     materialized: bool = False, strict: bool = False) -> SkolemizationResult:
    """Morleyize, then both stages; deterministic names for identical input."""
    res = morleyize(T)
    namer = _Namer()
    stage1 = build_T_plusplus(res, qec_form, budget, materialized, strict, namer)
    registry = dict(stage1.registry)
    theory, registry = to_universal(stage1.t_pp, namer, registry)
    return SkolemizationResult(stage1.vocab_pp, stage1.t_pp, theory.vocab, theory, registry,
                               stage1.translations, stage1.truncated, res)


def skolemize_sentence(s, vocab: Vocabulary, mode="standard"):
    """Stage 2 alone on one sentence; returns (sentence, registry)."""
    T, reg = to_universal(Theory(vocab, [s], mode))
    return T.sentences[0], reg
