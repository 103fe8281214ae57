"""Replace positive cofinality-quantifier occurrences by fresh tag relations.

Each distinct ``(C, body up to renaming)`` gets one tag ``R#<hash>`` whose
arity is the number of free variables of the quantified formula.  The tag
comes with the one-directional axiom ``forall z (R(z) -> Qcof ...)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from .analysis import (
    POSITIVE,
    alpha_canonical,
    alpha_equal,
    free_order,
    polarity_of_quantifiers,
    substitute,
)
from .errors import DanglingTag, NotPositive, TagHashCollision, UnsupportedKind
from .formulas import (
    RELATION,
    Forall,
    Implies,
    QCof,
    Rel,
    Theory,
    Var,
    Vocabulary,
    children,
    to_text,
    with_children,
)

TAG_PREFIX = "R#"


@dataclass(frozen=True)
class TagRow:
    name: str
    alias: str
    formula: QCof  # canonical quantifier node; free variables are z0, z1, ...
    arity: int

    @property
    def zs(self) -> tuple:
        return tuple(f"z{k}" for k in range(self.arity))

    def instance(self, args) -> QCof:
        return substitute(self.formula, dict(zip(self.zs, args)))

    def axiom(self):
        head = Rel(self.name, tuple(Var(z) for z in self.zs))
        body = Implies(head, self.formula)
        return Forall(self.zs, body) if self.zs else body


@dataclass
class MorleyizationResult:
    base_vocab: Vocabulary
    vocab: Vocabulary
    rows: dict  # name -> TagRow
    t_star: Theory
    t_cof: Theory
    mode: str = "standard"
    occurrences: int = 0

    @property
    def t_plus(self) -> Theory:
        return Theory(self.vocab, self.t_star.sentences + self.t_cof.sentences, self.mode)

    @property
    def aliases(self) -> dict:
        return {r.name: r.alias for r in self.rows.values()}

    def row_by_alias(self, alias) -> TagRow:
        for r in self.rows.values():
            if r.alias == alias:
                return r
        raise KeyError(alias)

    def table(self) -> list:
        return [
            {"tag": r.name, "alias": r.alias, "arity": r.arity, "formula": to_text(r.formula)}
            for r in sorted(self.rows.values(), key=lambda r: int(r.alias[1:]))
        ]


def check_positive(T: Theory) -> list:
    """Offending ``(sentence index, path)`` pairs; empty means every QCof is positive."""
    bad = []
    for k, s in enumerate(T.sentences):
        for path, kind, pol in polarity_of_quantifiers(s):
            if kind == "qcof" and pol != POSITIVE:
                bad.append((k, path))
    return bad


def tag_name(key: str) -> str:
    return TAG_PREFIX + hashlib.sha256(key.encode()).hexdigest()[:8]


def canonical_row(node: QCof):
    """``(key, canonical formula, free-variable order)`` for a QCof node."""
    order = free_order(node)
    if any(v.index is not None for v in node.fv):
        raise UnsupportedKind("cannot tag a cofinality quantifier with schematic free variables")
    canon = alpha_canonical(node, free_order=order)
    canon = substitute(canon, {f"$z{k}": Var(f"z{k}") for k in range(len(order))})
    return to_text(canon), canon, order


class _Builder:
    def __init__(self, hasher=tag_name):
        self.rows: dict[str, TagRow] = {}
        self.keys: dict[str, str] = {}
        self.hasher = hasher
        self.occurrences = 0

    def tag(self, node: QCof):
        self.occurrences += 1
        key, canon, order = canonical_row(node)
        name = self.hasher(key)
        if name in self.keys and self.keys[name] != key:
            raise TagHashCollision(f"tag {name} already names a different formula")
        if name not in self.rows:
            self.keys[name] = key
            self.rows[name] = TagRow(name, f"R{len(self.rows)}", canon, len(order))
        return Rel(name, tuple(Var(v) for v in order))

    def replace(self, f):
        kids = [self.replace(c) for c in children(f)]
        g = with_children(f, kids) if kids else f
        if isinstance(g, QCof):
            return self.tag(g)
        return g


def morleyize(T: Theory, hasher=tag_name) -> MorleyizationResult:
    bad = check_positive(T)
    if bad:
        raise NotPositive(f"cofinality quantifier in non-positive position at {bad}")
    b = _Builder(hasher)
    t_star = [b.replace(s) for s in T.sentences]
    vocab = T.vocab
    for r in b.rows.values():
        vocab = vocab.add(r.name, RELATION, r.arity)
    rows = dict(sorted(b.rows.items(), key=lambda kv: int(kv[1].alias[1:])))
    t_cof = [r.axiom() for r in rows.values()]
    return MorleyizationResult(
        base_vocab=T.vocab,
        vocab=vocab,
        rows=rows,
        t_star=Theory(vocab, t_star, T.mode),
        t_cof=Theory(vocab, t_cof, T.mode),
        mode=T.mode,
        occurrences=b.occurrences,
    )


def _unfold(f, rows):
    if isinstance(f, Rel) and f.name.startswith(TAG_PREFIX):
        row = rows.get(f.name)
        if row is None:
            raise DanglingTag(f"tag {f.name} has no table row")
        inst = row.instance(f.args)
        return _unfold(inst, rows)
    kids = children(f)
    return with_children(f, [_unfold(c, rows) for c in kids]) if kids else f


def unmorleyize(res: MorleyizationResult) -> Theory:
    sentences = [_unfold(s, res.rows) for s in res.t_star.sentences]
    return Theory(res.base_vocab, sentences, res.mode)


def roundtrip_ok(T: Theory, res: Optional[MorleyizationResult] = None) -> bool:
    res = res or morleyize(T)
    back = unmorleyize(res)
    return len(back.sentences) == len(T.sentences) and all(
        alpha_equal(a, b) for a, b in zip(back.sentences, T.sentences)
    )


@dataclass
class TagReport:
    confirmations: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def tag_models(M, res: MorleyizationResult, **kw) -> TagReport:
    """Evaluate each tagged tuple's cofinality obligation in ``M``."""
    from .finite_eval import eval_finite
    from .order_eval import OrderEvaluator
    from .structures import FiniteStructure

    rep = TagReport()
    if isinstance(M, FiniteStructure):
        support = lambda name: sorted(M.relations.get(name, ()), key=repr)
        check = lambda f, env: eval_finite(M, f, env, **kw)
    else:
        ev = OrderEvaluator(M, **kw)
        support = lambda name: sorted(M.tags.get(name, ()), key=repr)
        check = ev.eval
    for row in res.rows.values():
        for tup in support(row.name):
            env = dict(zip(row.zs, tup))
            entry = (row.name, row.alias, tup)
            (rep.confirmations if check(row.formula, env) else rep.violations).append(entry)
    return rep
