"""Ehrenfeucht-Fraisse games on linear orders.

Finite pairs are decided by searching the game tree.  A position is the
sequence of gap lengths between played elements, which is all that matters
for pure orders.  Pairs of dense orders without endpoints are won by the
interval-matching strategy; that claim is validated against a seeded random
spoiler and a systematic boundary spoiler.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache

from . import orders as O


class Outcome(str, enum.Enum):
    DUPLICATOR = "DuplicatorWins"
    SPOILER = "SpoilerWins"
    UNDECIDED = "Undecided"


@dataclass
class GameState:
    rounds_played: int = 0
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)

    def is_partial_iso(self, A, B) -> bool:
        n = len(self.left)
        for i in range(n):
            for j in range(n):
                if O.cmp(A, self.left[i], self.left[j]) != O.cmp(B, self.right[i], self.right[j]):
                    return False
        return True


@dataclass
class EFResult:
    outcome: Outcome
    rounds: int
    method: str
    plays: int = 0
    losses: int = 0
    note: str = ""

    def line(self) -> str:
        extra = f", {self.plays} plays, {self.losses} duplicator losses" if self.plays else ""
        note = f" ({self.note})" if self.note else ""
        return f"rounds {self.rounds}: {self.outcome.value} by {self.method}{extra}{note}"


# finite orders -------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def tree_wins(ga: tuple, gb: tuple, r: int) -> bool:
    """Full game-tree search from gap sequences ``ga`` and ``gb`` with ``r`` rounds left."""
    if r == 0:
        return True
    for spoiler_left, gs, go in ((True, ga, gb), (False, gb, ga)):
        for i, size in enumerate(gs):
            for p in range(size):
                moved = gs[:i] + (p, size - 1 - p) + gs[i + 1:]
                answers = (go[:i] + (q, go[i] - 1 - q) + go[i + 1:] for q in range(go[i]))
                if not any(tree_wins(*((moved, g) if spoiler_left else (g, moved)), r - 1) for g in answers):
                    return False
    return True


@lru_cache(maxsize=None)
def gap_wins(m: int, n: int, r: int) -> bool:
    """Game-tree search using that a position is won iff every gap pair is won.

    Spoiler moves inside one gap split it in two; the other gaps are untouched.
    """
    if r == 0:
        return True
    for a, b in ((m, n), (n, m)):
        for p in range(a):
            if not any(gap_wins(p, q, r - 1) and gap_wins(a - 1 - p, b - 1 - q, r - 1) for q in range(b)):
                return False
    return True


def finite_game(m: int, n: int, rounds: int) -> bool:
    """Duplicator wins the ``rounds``-round game on orders of sizes ``m`` and ``n``."""
    return gap_wins(m, n, rounds)


def classical_threshold(m: int, n: int, rounds: int) -> bool:
    """Sizes agree, or both are at least ``2**rounds - 1``."""
    return m == n or min(m, n) >= 2 ** rounds - 1


# dense orders --------------------------------------------------------------------------------


def dense_without_endpoints(t) -> bool:
    """Shape test: the rationals, sums of such orders, and lexicographic
    products whose blocks are such orders."""
    t = O.normalize(t)
    if isinstance(t, O.Rationals):
        return True
    if isinstance(t, O.Sum):
        return all(dense_without_endpoints(p) for p in t.parts)
    if isinstance(t, O.LexProd):
        return dense_without_endpoints(t.block)
    return False


def spot_check_dense(t, budget: int = 12) -> bool:
    if O.first(t) is not None or O.last(t) is not None:
        return False
    xs = O.element_iter(t, budget)
    return all(O.between(t, a, b) is not None for a, b in zip(xs, xs[1:]))


def dense_response(mover, other, played_mover, played_other, e):
    """Answer ``e`` in the interval matching its position among played elements."""
    lo = hi = None
    for a, b in zip(played_mover, played_other):
        c = O.cmp(mover, a, e)
        if c == 0:
            return b
        if c < 0 and (lo is None or O.cmp(mover, lo[0], a) < 0):
            lo = (a, b)
        if c > 0 and (hi is None or O.cmp(mover, a, hi[0]) < 0):
            hi = (a, b)
    return O.between(other, None if lo is None else lo[1], None if hi is None else hi[1])


@lru_cache(maxsize=64)
def _base_pool(t, budget):
    return tuple(O.element_iter(t, budget))


def _spoiler_pool(t, played, rng, budget=12):
    pool = list(_base_pool(t, budget)) + list(played)
    ordered = O.sorted_elements(t, list(played))
    for lo, hi in zip([None] + ordered, ordered + [None]):
        e = O.between(t, lo, hi)
        if e is not None:
            pool.append(e)
    if rng is not None and len(pool) >= 2:
        pair = O.sorted_elements(t, rng.sample(pool, 2))
        e = O.between(t, *pair) if len(pair) == 2 else None
        if e is not None:
            pool.append(e)
    return pool


def play_dense(A, B, rounds, rng) -> bool:
    """One random play; True if the partial isomorphism survives."""
    st = GameState()
    for _ in range(rounds):
        left = rng.random() < 0.5
        mover, other = (A, B) if left else (B, A)
        pm, po = (st.left, st.right) if left else (st.right, st.left)
        e = rng.choice(_spoiler_pool(mover, pm, rng))
        r = dense_response(mover, other, pm, po, e)
        if r is None:
            return False
        pm.append(e)
        po.append(r)
        st.rounds_played += 1
        if not st.is_partial_iso(A, B):
            return False
    return True


def boundary_spoiler(A, B, rounds, width: int = 3) -> int:
    """Systematic spoiler: every side and every pool element, ``width`` per round.

    Returns the number of losing plays.
    """
    losses = 0

    def go(st_left, st_right, r):
        nonlocal losses
        if r == 0:
            return
        for left in (True, False):
            mover, other = (A, B) if left else (B, A)
            pm, po = (st_left, st_right) if left else (st_right, st_left)
            for e in _spoiler_pool(mover, pm, None, budget=width)[: width + len(pm) + 1]:
                resp = dense_response(mover, other, pm, po, e)
                nl, nr = (pm + [e], po + [resp]) if left else (po + [resp], pm + [e])
                if resp is None or not GameState(0, nl, nr).is_partial_iso(A, B):
                    losses += 1
                    continue
                go(nl, nr, r - 1)

    go([], [], min(rounds, 3))
    return losses


# decision ------------------------------------------------------------------------------------


def ef_decide(A, B, rounds: int, plays: int = 1000, seed: int = 0) -> EFResult:
    A, B = O.normalize(A), O.normalize(B)
    if isinstance(A, O.Fin) and isinstance(B, O.Fin):
        win = finite_game(A.n, B.n, rounds)
        return EFResult(Outcome.DUPLICATOR if win else Outcome.SPOILER, rounds, "game-tree search")
    if A == B:
        return EFResult(Outcome.DUPLICATOR, rounds, "copy strategy")
    if dense_without_endpoints(A) and dense_without_endpoints(B):
        if not (spot_check_dense(A) and spot_check_dense(B)):
            return EFResult(Outcome.UNDECIDED, rounds, "dense certification", note="semantic spot check failed")
        rng = random.Random(seed)
        losses = sum(0 if play_dense(A, B, rounds, rng) else 1 for _ in range(plays))
        losses += boundary_spoiler(A, B, rounds)
        out = Outcome.DUPLICATOR if losses == 0 else Outcome.UNDECIDED
        return EFResult(out, rounds, "interval-matching strategy", plays, losses)
    return EFResult(Outcome.UNDECIDED, rounds, "none", note="unsupported pair of shapes")


@dataclass
class SeparationReport:
    left: str
    right: str
    qcof_left: bool
    qcof_right: bool
    games: list

    @property
    def separated_by_qcof(self) -> bool:
        return self.qcof_left != self.qcof_right

    @property
    def ef_equivalent(self) -> bool:
        return all(g.outcome == Outcome.DUPLICATOR for g in self.games)

    def lines(self) -> list:
        out = [f"QCof(w; x<y): {self.left} -> {self.qcof_left}, {self.right} -> {self.qcof_right}"]
        out += ["  " + g.line() for g in self.games]
        return out


def separation_report(A, B, rounds: int = 6, plays: int = 1000, seed: int = 0) -> SeparationReport:
    from .formulas import Vocabulary, parse
    from .order_eval import eval_order
    from .structures import pure_order

    vocab = Vocabulary.of(relations={"<": 2})
    q = parse("(qcof (w) (x) (y) (< x y))", vocab)
    games = [ef_decide(A, B, n, plays, seed + n) for n in range(1, rounds + 1)]
    return SeparationReport(O.format_term(A), O.format_term(B), eval_order(pure_order(A), q),
                            eval_order(pure_order(B), q), games)
