"""Seeded generators shared by the test modules."""

from __future__ import annotations

import random

from cofkit import orders as O
from cofkit.analysis import depth
from cofkit.formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    QCof,
    Rel,
    Theory,
    Var,
    Vocabulary,
)
from cofkit.ordinals import OrdinalCNF, nat, omega_pow
from cofkit.orders import OMEGA_COF, kappa

VOCAB = Vocabulary.of(relations={"<": 2, "E": 2, "P": 1})
TAG_SETS = ((OMEGA_COF,), (OMEGA_COF, kappa(1)), (kappa(1),), (kappa(2),))


class _Names:
    def __init__(self):
        self.n = 0

    def __call__(self):
        self.n += 1
        return f"v{self.n}"


def _atom(rng, scope):
    if not scope:
        return Exists(("u",), Rel("P", (Var("u"),)))
    a, b = rng.choice(scope), rng.choice(scope)
    k = rng.randrange(4)
    if k == 0:
        return Rel("<", (Var(a), Var(b)))
    if k == 1:
        return Rel("E", (Var(a), Var(b)))
    if k == 2:
        return Rel("P", (Var(a),))
    return Eq(Var(a), Var(b))


def _formula(rng, levels, scope, names, cof=True):
    """Free variables stay within ``scope``; QCof occurs only positively when ``cof``."""
    if levels <= 1 or rng.random() < 0.2:
        return _atom(rng, scope)
    d = levels - 1
    k = rng.randrange(8 if cof else 6)
    if k == 0:
        return And((_formula(rng, d, scope, names, cof), _formula(rng, d, scope, names, cof)))
    if k == 1:
        return Or((_formula(rng, d, scope, names, cof), _formula(rng, d, scope, names, cof)))
    if k == 2:
        return Not(_formula(rng, d, scope, names, False))
    if k in (3, 4):
        v = names()
        body = _formula(rng, d, scope + [v], names, cof)
        return Exists((v,), body) if k == 3 else Forall((v,), body)
    if k == 5:
        return Implies(_formula(rng, d, scope, names, False), _formula(rng, d, scope, names, cof))
    x, y = names(), names()
    order = Rel("<", (Var(x), Var(y)))
    extra = _formula(rng, d - 1, scope + [x, y], names, cof) if d > 2 and rng.random() < 0.6 else None
    body = order if extra is None else And((order, extra))
    return QCof(rng.choice(TAG_SETS), (x,), (y,), body)


def positive_theory(rng: random.Random, max_depth: int = 5, max_sentences: int = 6) -> Theory:
    """A theory whose QCof occurrences are all positive."""
    names = _Names()
    sentences = []
    target = rng.randint(1, max_sentences)
    while len(sentences) < target:
        f = _formula(rng, rng.randint(2, max_depth), [], names)
        if depth(f) <= max_depth:
            sentences.append(f)
    return Theory(VOCAB, sentences)


def positive_theories(seed: int, n: int, **kw):
    rng = random.Random(seed)
    return [positive_theory(rng, **kw) for _ in range(n)]


# order terms -----------------------------------------------------------------------------------


def _small_ordinal(rng, below_exp=4) -> OrdinalCNF:
    o = nat(0)
    for e in sorted(rng.sample(range(below_exp), rng.randint(1, 3)), reverse=True):
        o = o + omega_pow(nat(e), rng.randint(1, 3))
    return o


def ordinal_term(rng, depth=2):
    """A kappa-free, Q-free order term built from finite orders and ordinals below w^4."""
    k = rng.randrange(6 if depth > 0 else 2)
    if k == 0:
        return O.Fin(rng.randint(1, 4))
    if k == 1:
        return O.Ord(_small_ordinal(rng))
    if k in (2, 3, 4):
        return O.Sum(tuple(ordinal_term(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    return O.LexProd(ordinal_term(rng, depth - 1), ordinal_term(rng, depth - 1))


def ordinal_terms(seed: int, n: int):
    rng = random.Random(seed)
    return [ordinal_term(rng) for _ in range(n)]


def countable_terms():
    """Countable order terms of many shapes, without kappa atoms."""
    base = [
        O.Q,
        O.Fin(1),
        O.Fin(5),
        O.Ord(omega_pow(nat(1))),
        O.Ord(omega_pow(nat(1)) + nat(1)),
        O.Ord(omega_pow(nat(2))),
        O.Ord(omega_pow(omega_pow(nat(1)))),
        O.Ord(omega_pow(nat(2)) + omega_pow(nat(1))),
        O.Ord(omega_pow(omega_pow(nat(1)) + nat(1))),
    ]
    out = list(base)
    for a in base:
        for b in (O.Q, O.Fin(1), O.Ord(omega_pow(nat(1)))):
            out.append(O.Sum((a, b)))
    for a in (O.Q, O.Fin(2), O.Ord(omega_pow(nat(1)))):
        for b in (O.Q, O.Fin(3), O.Ord(omega_pow(nat(2)))):
            out.append(O.LexProd(a, b))
    seen, uniq = set(), []
    for t in out:
        t = O.normalize(t)
        key = O.format_term(t)
        if key not in seen:
            seen.add(key)
            uniq.append(t)
    return uniq


def any_term(rng, depth=2):
    """Order terms that may also use the rationals and kappa atoms."""
    k = rng.randrange(8 if depth > 0 else 4)
    if k == 0:
        return O.Fin(rng.randint(1, 4))
    if k == 1:
        return O.Ord(_small_ordinal(rng))
    if k == 2:
        return O.Q
    if k == 3:
        return O.NamedRegular(rng.randint(1, 2))
    if k in (4, 5):
        return O.Sum(tuple(any_term(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    return O.LexProd(any_term(rng, depth - 1), any_term(rng, depth - 1))
