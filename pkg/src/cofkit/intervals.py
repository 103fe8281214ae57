"""Finite unions of convex pieces of a symbolic order.

Piece endpoints are *cuts*: ``-inf``, ``+inf``, or the gap immediately
before / after an element.  Cuts are kept normalized (``after(a)`` becomes
``before(succ a)`` when ``a`` has a successor, ``before(first)`` becomes
``-inf`` and ``after(last)`` becomes ``+inf``), so two cuts are equal iff
they are the same gap and a piece ``(lo, hi)`` is empty iff ``lo >= hi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Optional

from . import orders as O
from .errors import NotSubset, OrderSyntaxError
from .sexpr import Atom, SList, read_one

NINF, BEFORE, AFTER, PINF = 0, 1, 2, 3


@dataclass(frozen=True)
class Cut:
    kind: int
    elt: object = None

    def __repr__(self):
        return {NINF: "-inf", PINF: "+inf"}.get(self.kind) or (
            f"{'before' if self.kind == BEFORE else 'after'}({self.elt!r})"
        )


MINUS_INF = Cut(NINF)
PLUS_INF = Cut(PINF)


def before(e) -> Cut:
    return Cut(BEFORE, e)


def after(e) -> Cut:
    return Cut(AFTER, e)


def norm_cut(t: O.OrderTerm, c: Cut) -> Cut:
    if c.kind == AFTER:
        s = O.succ(t, c.elt)
        if s is not None:
            return Cut(BEFORE, s)
        l = O.last(t)
        if l is not None and O.cmp(t, l, c.elt) == 0:
            return PLUS_INF
    if c.kind == BEFORE:
        f = O.first(t)
        if f is not None and O.cmp(t, f, c.elt) == 0:
            return MINUS_INF
    return c


def cut_cmp(t: O.OrderTerm, a: Cut, b: Cut) -> int:
    """Compare normalized cuts."""
    if a.kind in (NINF, PINF) or b.kind in (NINF, PINF):
        ka = -1 if a.kind == NINF else (1 if a.kind == PINF else 0)
        kb = -1 if b.kind == NINF else (1 if b.kind == PINF else 0)
        return (ka > kb) - (ka < kb)
    c = O.cmp(t, a.elt, b.elt)
    if c:
        return c
    return (a.kind > b.kind) - (a.kind < b.kind)


def cut_below(t, c: Cut, e) -> bool:
    """True iff the cut lies below element ``e``."""
    if c.kind == NINF:
        return True
    if c.kind == PINF:
        return False
    r = O.cmp(t, c.elt, e)
    return r <= 0 if c.kind == BEFORE else r < 0


def cut_above(t, c: Cut, e) -> bool:
    if c.kind == PINF:
        return True
    if c.kind == NINF:
        return False
    r = O.cmp(t, e, c.elt)
    return r < 0 if c.kind == BEFORE else r <= 0


class IntervalSet:
    """Canonical finite union of pieces ``(lo, hi)`` over ``owner``."""

    __slots__ = ("owner", "pieces")

    def __init__(self, owner: O.OrderTerm, pieces: Iterable[tuple[Cut, Cut]] = ()):
        owner = O.normalize(owner)
        self.owner = owner
        key = cmp_to_key(lambda p, q: cut_cmp(owner, p[0], q[0]))
        normed = []
        for lo, hi in pieces:
            lo, hi = norm_cut(owner, lo), norm_cut(owner, hi)
            if cut_cmp(owner, lo, hi) < 0:
                normed.append((lo, hi))
        normed.sort(key=key)
        merged: list[tuple[Cut, Cut]] = []
        for lo, hi in normed:
            if merged and cut_cmp(owner, lo, merged[-1][1]) <= 0:
                plo, phi = merged[-1]
                merged[-1] = (plo, hi if cut_cmp(owner, hi, phi) > 0 else phi)
            else:
                merged.append((lo, hi))
        self.pieces = tuple(merged)

    # constructors

    @classmethod
    def empty(cls, owner) -> "IntervalSet":
        return cls(owner, ())

    @classmethod
    def full(cls, owner) -> "IntervalSet":
        return cls(owner, [(MINUS_INF, PLUS_INF)])

    @classmethod
    def point(cls, owner, e) -> "IntervalSet":
        return cls(owner, [(before(e), after(e))])

    @classmethod
    def below(cls, owner, e, inclusive=False) -> "IntervalSet":
        return cls(owner, [(MINUS_INF, after(e) if inclusive else before(e))])

    @classmethod
    def above(cls, owner, e, inclusive=False) -> "IntervalSet":
        return cls(owner, [(before(e) if inclusive else after(e), PLUS_INF)])

    @classmethod
    def between(cls, owner, a, b) -> "IntervalSet":
        """Open interval (a, b)."""
        return cls(owner, [(after(a), before(b))])

    # queries

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.owner == other.owner and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.owner, self.pieces))

    def __repr__(self):
        return f"IntervalSet({format_intervalset(self)})"

    def is_empty(self) -> bool:
        return not self.pieces

    def __contains__(self, e) -> bool:
        t = self.owner
        return any(cut_below(t, lo, e) and cut_above(t, hi, e) for lo, hi in self.pieces)

    def top_cut(self) -> Optional[Cut]:
        return self.pieces[-1][1] if self.pieces else None

    def boundary_elements(self) -> list:
        out = []
        for lo, hi in self.pieces:
            for c in (lo, hi):
                if c.kind in (BEFORE, AFTER):
                    out.append(c.elt)
        return out

    def max_element(self):
        """Largest element, or None if there is no largest one."""
        if not self.pieces:
            return None
        hi = self.pieces[-1][1]
        if hi.kind == AFTER:
            return hi.elt
        if hi.kind == BEFORE:
            return O.pred(self.owner, hi.elt)
        return O.last(self.owner)

    # boolean algebra

    def _segments(self, *others: "IntervalSet"):
        t = self.owner
        cuts = [MINUS_INF, PLUS_INF]
        for s in (self,) + others:
            if s.owner != t:
                raise ValueError("interval sets over different owners")
            for lo, hi in s.pieces:
                cuts += [lo, hi]
        cuts.sort(key=cmp_to_key(lambda a, b: cut_cmp(t, a, b)))
        uniq = []
        for c in cuts:
            if not uniq or cut_cmp(t, uniq[-1], c) != 0:
                uniq.append(c)
        return list(zip(uniq, uniq[1:]))

    def _covers(self, seg) -> bool:
        t = self.owner
        return any(cut_cmp(t, lo, seg[0]) <= 0 and cut_cmp(t, seg[1], hi) <= 0 for lo, hi in self.pieces)

    def _combine(self, other, op) -> "IntervalSet":
        segs = self._segments(other)
        return IntervalSet(self.owner, [s for s in segs if op(self._covers(s), other._covers(s))])

    def union(self, other):
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other):
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def complement(self, within: Optional["IntervalSet"] = None):
        bound = within if within is not None else IntervalSet.full(self.owner)
        return bound.difference(self)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def issubset(self, other) -> bool:
        return self.difference(other).is_empty()

    def cardinality(self) -> O.Cardinal:
        t = self.owner
        total: O.Cardinal = 0
        for lo, hi in self.pieces:
            a, ai = _lower_bound(lo)
            b, bi = _upper_bound(hi)
            total = O.card_add(total, O.card_range(t, a, ai, b, bi))
        return total


def _lower_bound(c: Cut):
    if c.kind == NINF:
        return None, True
    return c.elt, c.kind == BEFORE


def _upper_bound(c: Cut):
    if c.kind == PINF:
        return None, True
    return c.elt, c.kind == AFTER


def cofinality_of_set(s: IntervalSet) -> O.CofTag:
    if s.is_empty():
        return O.ZERO_COF
    hi = s.top_cut()
    if hi.kind == PINF:
        return O.cofinality(s.owner)
    if hi.kind == AFTER:
        return O.ONE_COF
    if O.pred(s.owner, hi.elt) is not None:
        return O.ONE_COF
    return O.left_cofinality(s.owner, hi.elt)


def is_cofinal_in(s1: IntervalSet, s2: IntervalSet) -> bool:
    """Every element of ``s2`` lies at or below some element of ``s1``."""
    if not s1.issubset(s2):
        raise NotSubset("first set is not contained in the second")
    if s2.is_empty():
        return True
    if s1.is_empty():
        return False
    return cut_cmp(s1.owner, s1.top_cut(), s2.top_cut()) == 0


# text format -----------------------------------------------------------------


def parse_intervalset(x, owner: O.OrderTerm) -> IntervalSet:
    """``(is (piece <cut> <cut>) ...)``, ``all`` or ``none``; cuts are ``-inf``,
    ``+inf``, ``(before e)``, ``(after e)``."""
    if isinstance(x, str):
        x = read_one(x)
    owner = O.normalize(owner)
    if isinstance(x, Atom):
        if x.text == "all":
            return IntervalSet.full(owner)
        if x.text == "none":
            return IntervalSet.empty(owner)
        raise OrderSyntaxError(f"expected an interval set, got {x.text!r}", x.pos)
    if not x.items or not isinstance(x[0], Atom) or x[0].text != "is":
        raise OrderSyntaxError("interval sets are written (is (piece lo hi) ...)", x.pos)
    pieces = []
    for p in x.items[1:]:
        if not (isinstance(p, SList) and len(p) == 3 and p[0].text == "piece"):
            raise OrderSyntaxError("expected (piece lo hi)", p.pos)
        pieces.append((_parse_cut(p[1], owner), _parse_cut(p[2], owner)))
    return IntervalSet(owner, pieces)


def _parse_cut(x, owner) -> Cut:
    if isinstance(x, Atom):
        if x.text == "-inf":
            return MINUS_INF
        if x.text == "+inf":
            return PLUS_INF
        raise OrderSyntaxError(f"bad cut {x.text!r}", x.pos)
    if len(x) == 2 and isinstance(x[0], Atom) and x[0].text in ("before", "after"):
        e = O.parse_element(x[1], owner)
        return before(e) if x[0].text == "before" else after(e)
    raise OrderSyntaxError("bad cut", x.pos)


def format_cut(t, c: Cut) -> str:
    if c.kind == NINF:
        return "-inf"
    if c.kind == PINF:
        return "+inf"
    word = "before" if c.kind == BEFORE else "after"
    return f"({word} {O.format_element(t, c.elt)})"


def format_intervalset(s: IntervalSet) -> str:
    if not s.pieces:
        return "none"
    return "(is " + " ".join(
        f"(piece {format_cut(s.owner, lo)} {format_cut(s.owner, hi)})" for lo, hi in s.pieces
    ) + ")"
