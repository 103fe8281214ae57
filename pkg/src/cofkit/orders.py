"""Symbolic linear orders.

An :class:`OrderTerm` denotes a linear order built from finite orders,
ordinals below epsilon_0, formal regular cardinals ``k1, k2, ...``, the
rationals, ordered sums and lexicographic products.  ``LexProd(block, index)``
is ``index``-many copies of ``block`` and compares the index coordinate first,
so ``LexProd(Rationals(), NamedRegular(1))`` is omega_1 copies of Q.

Elements are plain values mirroring the term shape: ``int`` for ``Fin``,
:class:`OrdinalCNF` for ``Ord``, :class:`Stratified` for ``NamedRegular``,
:class:`~fractions.Fraction` for ``Rationals``, :class:`At` for sums and
:class:`Pair` for products.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, total_ordering
from typing import Any, Optional, Union

from .errors import InvalidElement, OrderSyntaxError
from .ordinals import ZERO, OrdinalCNF, ordinals_below, parse_ordinal
from .sexpr import Atom, SList, read_one

Element = Any


# terms ---------------------------------------------------------------------


class OrderTerm:
    __slots__ = ()

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Empty(OrderTerm):
    pass


@dataclass(frozen=True)
class Fin(OrderTerm):
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("Fin needs a positive size")


@dataclass(frozen=True)
class Ord(OrderTerm):
    o: OrdinalCNF


@dataclass(frozen=True)
class NamedRegular(OrderTerm):
    i: int

    def __post_init__(self):
        if not isinstance(self.i, int) or self.i < 1:
            raise ValueError("named regular cardinals are k1, k2, ...")


@dataclass(frozen=True)
class Rationals(OrderTerm):
    pass


@dataclass(frozen=True)
class Sum(OrderTerm):
    parts: tuple[OrderTerm, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("Sum needs at least one part")


@dataclass(frozen=True)
class LexProd(OrderTerm):
    block: OrderTerm
    index: OrderTerm


Q = Rationals()


# elements --------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class Stratified:
    """sum_{j<i, descending} k_j * coeffs + tail, below the cardinal k_i."""

    coeffs: tuple[int, ...]
    tail: OrdinalCNF = ZERO

    def __lt__(self, other):
        return (self.coeffs, self.tail) < (other.coeffs, other.tail)


@dataclass(frozen=True)
class At:
    part: int
    elt: Any


@dataclass(frozen=True)
class Pair:
    index: Any
    block: Any


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


# cofinality tags -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CofTag:
    """Zero, One, Omega or Kappa(i); ``rank`` orders them by size."""

    rank: int

    @property
    def is_kappa(self) -> bool:
        return self.rank >= 3

    @property
    def kappa_index(self) -> int:
        return self.rank - 2

    def __str__(self):
        return {0: "0", 1: "1", 2: "w"}.get(self.rank, f"k{self.rank - 2}")

    def __repr__(self):
        return {0: "Zero", 1: "One", 2: "Omega"}.get(self.rank, f"Kappa({self.rank - 2})")


ZERO_COF = CofTag(0)
ONE_COF = CofTag(1)
OMEGA_COF = CofTag(2)


def kappa(i: int) -> CofTag:
    return CofTag(2 + i)


def parse_coftag(text: str) -> CofTag:
    if text == "w":
        return OMEGA_COF
    if text.startswith("k") and text[1:].isdigit() and int(text[1:]) >= 1:
        return kappa(int(text[1:]))
    raise OrderSyntaxError(f"unknown cofinality tag {text!r}")


# normalization ---------------------------------------------------------------


def normalize(t: OrderTerm) -> OrderTerm:
    if isinstance(t, Ord) and t.o.is_zero:
        return Empty()
    if isinstance(t, Sum):
        parts = []
        for p in t.parts:
            p = normalize(p)
            if isinstance(p, Sum):
                parts.extend(p.parts)
            elif not isinstance(p, Empty):
                parts.append(p)
        if not parts:
            return Empty()
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))
    if isinstance(t, LexProd):
        block, index = normalize(t.block), normalize(t.index)
        if isinstance(block, Empty) or isinstance(index, Empty):
            return Empty()
        if index == Fin(1):
            return block
        return LexProd(block, index)
    return t


def is_empty(t: OrderTerm) -> bool:
    return isinstance(normalize(t), Empty)


# validation and comparison -----------------------------------------------------


def validate(t: OrderTerm, e: Element) -> None:
    if not _valid(t, e):
        raise InvalidElement(f"{e!r} is not an element of {format_term(t)}")


def _valid(t, e) -> bool:
    if isinstance(t, Empty):
        return False
    if isinstance(t, Fin):
        return isinstance(e, int) and not isinstance(e, bool) and 0 <= e < t.n
    if isinstance(t, Ord):
        return isinstance(e, OrdinalCNF) and e < t.o
    if isinstance(t, NamedRegular):
        return (
            isinstance(e, Stratified)
            and len(e.coeffs) == t.i - 1
            and all(isinstance(c, int) and c >= 0 for c in e.coeffs)
            and isinstance(e.tail, OrdinalCNF)
        )
    if isinstance(t, Rationals):
        return isinstance(e, (int, Fraction)) and not isinstance(e, bool)
    if isinstance(t, Sum):
        return isinstance(e, At) and 0 <= e.part < len(t.parts) and _valid(t.parts[e.part], e.elt)
    if isinstance(t, LexProd):
        return isinstance(e, Pair) and _valid(t.index, e.index) and _valid(t.block, e.block)
    return False


def cmp(t: OrderTerm, a: Element, b: Element) -> int:
    """Three-way comparison without validation."""
    if isinstance(t, Sum):
        if a.part != b.part:
            return -1 if a.part < b.part else 1
        return cmp(t.parts[a.part], a.elt, b.elt)
    if isinstance(t, LexProd):
        c = cmp(t.index, a.index, b.index)
        return c if c else cmp(t.block, a.block, b.block)
    return -1 if a < b else (1 if b < a else 0)


def compare(a: Element, b: Element, t: OrderTerm) -> Ordering:
    validate(t, a)
    validate(t, b)
    return Ordering(cmp(t, a, b))


def sort_key(t: OrderTerm):
    return cmp_to_key(lambda a, b: cmp(t, a, b))


def sorted_elements(t: OrderTerm, elts) -> list:
    uniq = []
    for e in sorted(elts, key=sort_key(t)):
        if not uniq or cmp(t, uniq[-1], e) != 0:
            uniq.append(e)
    return uniq


# neighbours --------------------------------------------------------------------


def first(t: OrderTerm) -> Optional[Element]:
    if isinstance(t, Empty):
        return None
    if isinstance(t, Fin):
        return 0
    if isinstance(t, Ord):
        return None if t.o.is_zero else ZERO
    if isinstance(t, NamedRegular):
        return Stratified((0,) * (t.i - 1), ZERO)
    if isinstance(t, Rationals):
        return None
    if isinstance(t, Sum):
        for k, p in enumerate(t.parts):
            if not is_empty(p):
                f = first(p)
                return None if f is None else At(k, f)
        return None
    if isinstance(t, LexProd):
        fi, fb = first(t.index), first(t.block)
        return None if fi is None or fb is None else Pair(fi, fb)
    raise TypeError(t)


def last(t: OrderTerm) -> Optional[Element]:
    if isinstance(t, Fin):
        return t.n - 1
    if isinstance(t, Ord):
        return t.o.pred()
    if isinstance(t, (Empty, NamedRegular, Rationals)):
        return None
    if isinstance(t, Sum):
        for k in range(len(t.parts) - 1, -1, -1):
            if not is_empty(t.parts[k]):
                l = last(t.parts[k])
                return None if l is None else At(k, l)
        return None
    if isinstance(t, LexProd):
        li, lb = last(t.index), last(t.block)
        return None if li is None or lb is None else Pair(li, lb)
    raise TypeError(t)


def succ(t: OrderTerm, e: Element) -> Optional[Element]:
    """Immediate successor of ``e`` in ``t``, if any."""
    if isinstance(t, Fin):
        return e + 1 if e + 1 < t.n else None
    if isinstance(t, Ord):
        s = e.succ()
        return s if s < t.o else None
    if isinstance(t, NamedRegular):
        return Stratified(e.coeffs, e.tail.succ())
    if isinstance(t, Rationals):
        return None
    if isinstance(t, Sum):
        s = succ(t.parts[e.part], e.elt)
        if s is not None:
            return At(e.part, s)
        if last(t.parts[e.part]) is None or cmp(t.parts[e.part], last(t.parts[e.part]), e.elt) != 0:
            return None
        for k in range(e.part + 1, len(t.parts)):
            if not is_empty(t.parts[k]):
                f = first(t.parts[k])
                return None if f is None else At(k, f)
        return None
    if isinstance(t, LexProd):
        s = succ(t.block, e.block)
        if s is not None:
            return Pair(e.index, s)
        lb = last(t.block)
        if lb is None or cmp(t.block, lb, e.block) != 0:
            return None
        si = succ(t.index, e.index)
        fb = first(t.block)
        return None if si is None or fb is None else Pair(si, fb)
    raise TypeError(t)


def pred(t: OrderTerm, e: Element) -> Optional[Element]:
    if isinstance(t, Fin):
        return e - 1 if e > 0 else None
    if isinstance(t, Ord):
        return e.pred()
    if isinstance(t, NamedRegular):
        p = e.tail.pred()
        return None if p is None else Stratified(e.coeffs, p)
    if isinstance(t, Rationals):
        return None
    if isinstance(t, Sum):
        p = pred(t.parts[e.part], e.elt)
        if p is not None:
            return At(e.part, p)
        f = first(t.parts[e.part])
        if f is None or cmp(t.parts[e.part], f, e.elt) != 0:
            return None
        for k in range(e.part - 1, -1, -1):
            if not is_empty(t.parts[k]):
                l = last(t.parts[k])
                return None if l is None else At(k, l)
        return None
    if isinstance(t, LexProd):
        p = pred(t.block, e.block)
        if p is not None:
            return Pair(e.index, p)
        fb = first(t.block)
        if fb is None or cmp(t.block, fb, e.block) != 0:
            return None
        pi = pred(t.index, e.index)
        lb = last(t.block)
        return None if pi is None or lb is None else Pair(pi, lb)
    raise TypeError(t)


def between(t: OrderTerm, lo: Optional[Element], hi: Optional[Element]) -> Optional[Element]:
    """Some element strictly between ``lo`` and ``hi`` (None = unbounded), if one exists."""
    if lo is not None and hi is not None and cmp(t, lo, hi) >= 0:
        return None
    if isinstance(t, Empty):
        return None
    if isinstance(t, Fin):
        a = -1 if lo is None else lo
        b = t.n if hi is None else hi
        return (a + b) // 2 if b - a >= 2 else None
    if isinstance(t, Ord):
        cand = ZERO if lo is None else lo.succ()
        bound = t.o if hi is None else hi
        return cand if cand < bound else None
    if isinstance(t, NamedRegular):
        cand = first(t) if lo is None else Stratified(lo.coeffs, lo.tail.succ())
        return cand if hi is None or cand < hi else None
    if isinstance(t, Rationals):
        if lo is None and hi is None:
            return Fraction(0)
        if lo is None:
            return Fraction(hi) - 1
        if hi is None:
            return Fraction(lo) + 1
        return (Fraction(lo) + Fraction(hi)) / 2
    if isinstance(t, Sum):
        k1 = 0 if lo is None else lo.part
        k2 = len(t.parts) - 1 if hi is None else hi.part
        for k in range(k1, k2 + 1):
            l = lo.elt if lo is not None and k == lo.part else None
            h = hi.elt if hi is not None and k == hi.part else None
            e = between(t.parts[k], l, h)
            if e is not None:
                return At(k, e)
        return None
    if isinstance(t, LexProd):
        if lo is not None and hi is not None and cmp(t.index, lo.index, hi.index) == 0:
            e = between(t.block, lo.block, hi.block)
            return None if e is None else Pair(lo.index, e)
        if lo is not None:
            e = between(t.block, lo.block, None)
            if e is not None:
                return Pair(lo.index, e)
        i = between(t.index, None if lo is None else lo.index, None if hi is None else hi.index)
        if i is not None:
            b = first(t.block)
            if b is None:
                b = between(t.block, None, None)
            return Pair(i, b)
        if hi is not None:
            e = between(t.block, None, hi.block)
            if e is not None:
                return Pair(hi.index, e)
        return None
    raise TypeError(t)


# cofinality --------------------------------------------------------------------


def cofinality(t: OrderTerm) -> CofTag:
    t = normalize(t)
    if isinstance(t, Empty):
        return ZERO_COF
    if isinstance(t, Fin):
        return ONE_COF
    if isinstance(t, Ord):
        return ONE_COF if t.o.is_successor else OMEGA_COF
    if isinstance(t, NamedRegular):
        return kappa(t.i)
    if isinstance(t, Rationals):
        return OMEGA_COF
    if isinstance(t, Sum):
        return cofinality(t.parts[-1])
    if isinstance(t, LexProd):
        ci = cofinality(t.index)
        return cofinality(t.block) if ci == ONE_COF else ci
    raise TypeError(t)


def left_cofinality(t: OrderTerm, e: Element) -> CofTag:
    """Cofinality of the initial segment ``{x : x < e}``."""
    if isinstance(t, Fin):
        return ONE_COF if e > 0 else ZERO_COF
    if isinstance(t, Ord):
        return cofinality(Ord(e))
    if isinstance(t, NamedRegular):
        if not e.tail.is_zero:
            return cofinality(Ord(e.tail))
        # coeffs run k_{i-1} .. k_1; the lowest nonzero level decides
        for pos in range(len(e.coeffs) - 1, -1, -1):
            if e.coeffs[pos]:
                return kappa(len(e.coeffs) - pos)
        return ZERO_COF
    if isinstance(t, Rationals):
        return OMEGA_COF
    if isinstance(t, Sum):
        c = left_cofinality(t.parts[e.part], e.elt)
        if c != ZERO_COF:
            return c
        if e.part == 0:
            return ZERO_COF
        return cofinality(Sum(t.parts[: e.part]))
    if isinstance(t, LexProd):
        c = left_cofinality(t.block, e.block)
        if c != ZERO_COF:
            return c
        ci = left_cofinality(t.index, e.index)
        if ci == ONE_COF:
            return cofinality(t.block)
        return ci
    raise TypeError(t)


# cardinality -------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class InfiniteCard:
    """aleph_0 (level 0) or the formal cardinal k_level."""

    level: int

    def __lt__(self, other):
        if isinstance(other, int):
            return False
        return self.level < other.level

    def __gt__(self, other):
        if isinstance(other, int):
            return True
        return self.level > other.level

    def __str__(self):
        return "aleph0" if self.level == 0 else f"k{self.level}"


ALEPH0 = InfiniteCard(0)
Cardinal = Union[int, InfiniteCard]


def card_add(a: Cardinal, b: Cardinal) -> Cardinal:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    return max(a, b, key=_card_key)


def card_mul(a: Cardinal, b: Cardinal) -> Cardinal:
    if a == 0 or b == 0:
        return 0
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    return max(a, b, key=_card_key)


def _card_key(c):
    return (1, c.level) if isinstance(c, InfiniteCard) else (0, c)


def card_le(a: Cardinal, b: Cardinal) -> bool:
    return _card_key(a) <= _card_key(b)


def cardinality(t: OrderTerm) -> Cardinal:
    return card_range(t, None, True, None, True)


def _ordinal_diff(a: OrdinalCNF, b: OrdinalCNF) -> OrdinalCNF:
    """The unique d with a + d = b, for a <= b."""
    for k, ((ea, ca), (eb, cb)) in enumerate(zip(a.terms, b.terms)):
        if ea == eb and ca == cb:
            continue
        if ea == eb:
            return OrdinalCNF(((eb, cb - ca),) + b.terms[k + 1 :])
        return OrdinalCNF(b.terms[k:])
    return OrdinalCNF(b.terms[len(a.terms) :])


def _ord_count(a: OrdinalCNF, b: OrdinalCNF) -> Cardinal:
    """|[a, b)| for ordinals."""
    if not a < b:
        return 0
    d = _ordinal_diff(a, b)
    return d.as_int() if d.is_finite else ALEPH0


def card_range(t: OrderTerm, lo, lo_incl: bool, hi, hi_incl: bool) -> Cardinal:
    """Number of x with lo <(=) x <(=) hi; a None bound is an open end."""
    if isinstance(t, Empty):
        return 0
    if lo is not None and hi is not None:
        c = cmp(t, lo, hi)
        if c > 0 or (c == 0 and not (lo_incl and hi_incl)):
            return 0
        if c == 0:
            return 1
    if isinstance(t, Fin):
        a = 0 if lo is None else (lo if lo_incl else lo + 1)
        b = t.n if hi is None else (hi + 1 if hi_incl else hi)
        return max(0, b - a)
    if isinstance(t, Ord):
        a = ZERO if lo is None else (lo if lo_incl else lo.succ())
        b = t.o if hi is None else (hi.succ() if hi_incl else hi)
        return _ord_count(a, b)
    if isinstance(t, NamedRegular):
        a = first(t) if lo is None else (lo if lo_incl else Stratified(lo.coeffs, lo.tail.succ()))
        if hi is None:
            return InfiniteCard(t.i)
        b = Stratified(hi.coeffs, hi.tail.succ()) if hi_incl else hi
        if not a < b:
            return 0
        for pos, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
            if x != y:
                return InfiniteCard(len(a.coeffs) - pos)
        return _ord_count(a.tail, b.tail)
    if isinstance(t, Rationals):
        return ALEPH0
    if isinstance(t, Sum):
        k1 = 0 if lo is None else lo.part
        k2 = len(t.parts) - 1 if hi is None else hi.part
        total: Cardinal = 0
        for k in range(k1, k2 + 1):
            l, li = (lo.elt, lo_incl) if lo is not None and k == k1 else (None, True)
            h, hincl = (hi.elt, hi_incl) if hi is not None and k == k2 else (None, True)
            total = card_add(total, card_range(t.parts[k], l, li, h, hincl))
        return total
    if isinstance(t, LexProd):
        if lo is not None and hi is not None and cmp(t.index, lo.index, hi.index) == 0:
            return card_range(t.block, lo.block, lo_incl, hi.block, hi_incl)
        total: Cardinal = 0
        if lo is not None:
            total = card_add(total, card_range(t.block, lo.block, lo_incl, None, True))
        mid = card_range(
            t.index,
            None if lo is None else lo.index,
            lo is None,
            None if hi is None else hi.index,
            hi is None,
        )
        total = card_add(total, card_mul(mid, cardinality(t.block)))
        if hi is not None:
            total = card_add(total, card_range(t.block, None, True, hi.block, hi_incl))
        return total
    raise TypeError(t)


# sampling --------------------------------------------------------------------


def _rationals(n: int) -> list[Fraction]:
    seen: list[Fraction] = []
    seen_set = set()
    height = 1
    while len(seen) < n:
        for q in range(1, height + 1):
            p_abs = height - q
            for p in sorted({p_abs, -p_abs}):
                f = Fraction(p, q)
                if f not in seen_set:
                    seen_set.add(f)
                    seen.append(f)
                    if len(seen) >= n:
                        break
            if len(seen) >= n:
                break
        height += 1
    return sorted(seen)


def _stratified(i: int, n: int) -> list[Stratified]:
    if i == 1:
        return [Stratified((), o) for o in ordinals_below(None, n)]
    out = []
    budget = 0
    while len(out) < n:
        for total in range(budget + 1):
            for coeffs in _compositions(total, i - 1):
                for tail in ordinals_below(None, budget - total + 1):
                    if tail.complexity() == budget - total:
                        out.append(Stratified(coeffs, tail))
        budget += 1
    return sorted(set(out))[:n] if len(set(out)) >= n else sorted(set(out))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def element_iter(t: OrderTerm, budget: int) -> list:
    """Deterministic ascending sample of at most ``budget`` elements spread over ``t``."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    return sorted_elements(t, _sample(normalize(t), budget))


def _sample(t, n):
    if n <= 0 or isinstance(t, Empty):
        return []
    if isinstance(t, Fin):
        return list(range(min(n, t.n)))
    if isinstance(t, Ord):
        return ordinals_below(t.o, n)
    if isinstance(t, NamedRegular):
        return _stratified(t.i, n)
    if isinstance(t, Rationals):
        return _rationals(n)
    if isinstance(t, Sum):
        pools = [_sample(p, n) for p in t.parts]
        out = []
        depth = 0
        while len(out) < n and any(depth < len(p) for p in pools):
            for k, pool in enumerate(pools):
                if depth < len(pool) and len(out) < n:
                    out.append(At(k, pool[depth]))
            depth += 1
        return out
    if isinstance(t, LexProd):
        idx = _sample(t.index, n)
        if not idx:
            return []
        per, extra = divmod(n, len(idx))
        out = []
        for k, i in enumerate(idx):
            m = per + (1 if k < extra else 0)
            for b in _sample(t.block, max(m, 0)):
                out.append(Pair(i, b))
        return out[:n]
    raise TypeError(t)


# text syntax -----------------------------------------------------------------


def parse_term(text: str) -> OrderTerm:
    """Parse ``empty``, ``fin 5``, ``ord "w^w*2+3"``, ``k1``, ``Q``, ``(sum ...)``, ``(lexprod b i)``."""
    from .sexpr import read_all

    exprs = read_all(text)
    # allow the bare two-token forms at top level
    if len(exprs) == 2 and isinstance(exprs[0], Atom) and exprs[0].text in ("fin", "ord"):
        exprs = [SList(tuple(exprs))]
    if len(exprs) != 1:
        raise OrderSyntaxError(f"expected one order term in {text!r}")
    return normalize(term_from_sexpr(exprs[0]))


def term_from_sexpr(x) -> OrderTerm:
    out = _terms([x])
    if len(out) != 1:
        raise OrderSyntaxError(f"expected one order term, got {len(out)}", getattr(x, "pos", None))
    return out[0]


def _term_at(items, i):
    x = items[i]
    if isinstance(x, SList):
        if not x.items:
            raise OrderSyntaxError("empty term list", x.pos)
        head = x.items[0]
        if isinstance(head, Atom) and head.text == "sum":
            parts = _terms(x.items[1:])
            if not parts:
                raise OrderSyntaxError("sum needs parts", x.pos)
            return Sum(tuple(parts)), i + 1
        if isinstance(head, Atom) and head.text == "lexprod":
            parts = _terms(x.items[1:])
            if len(parts) != 2:
                raise OrderSyntaxError("lexprod takes block and index", x.pos)
            return LexProd(parts[0], parts[1]), i + 1
        inner = _terms(list(x.items))
        if len(inner) != 1:
            raise OrderSyntaxError("expected one order term in parentheses", x.pos)
        return inner[0], i + 1
    word = x.text
    if word == "empty":
        return Empty(), i + 1
    if word == "Q":
        return Q, i + 1
    if word.startswith("k") and word[1:].isdigit():
        if int(word[1:]) < 1:
            raise OrderSyntaxError("named regular cardinals are k1, k2, ...", x.pos)
        return NamedRegular(int(word[1:])), i + 1
    if word in ("fin", "ord"):
        if i + 1 >= len(items) or not isinstance(items[i + 1], Atom):
            raise OrderSyntaxError(f"{word} needs an argument", x.pos)
        arg = items[i + 1]
        if word == "fin":
            if not arg.text.isdigit() or int(arg.text) < 1:
                raise OrderSyntaxError("fin needs a positive integer", arg.pos)
            return Fin(int(arg.text)), i + 2
        return Ord(parse_ordinal(arg.text)), i + 2
    raise OrderSyntaxError(f"unknown order term {word!r}", x.pos)


def _terms(items):
    out = []
    i = 0
    while i < len(items):
        t, i = _term_at(items, i)
        out.append(t)
    return out


def format_term(t: OrderTerm) -> str:
    if isinstance(t, Empty):
        return "empty"
    if isinstance(t, Fin):
        return f"(fin {t.n})"
    if isinstance(t, Ord):
        return f'(ord "{t.o}")'
    if isinstance(t, NamedRegular):
        return f"k{t.i}"
    if isinstance(t, Rationals):
        return "Q"
    if isinstance(t, Sum):
        return "(sum " + " ".join(format_term(p) for p in t.parts) + ")"
    if isinstance(t, LexProd):
        return f"(lexprod {format_term(t.block)} {format_term(t.index)})"
    raise TypeError(t)


def parse_stratified(text: str, i: int) -> Stratified:
    coeffs = [0] * (i - 1)
    tail_parts = []
    for chunk in text.replace(" ", "").split("+"):
        if chunk.startswith("k"):
            name, _, mult = chunk.partition("*")
            j = int(name[1:])
            if not 1 <= j < i:
                raise OrderSyntaxError(f"k{j} is not below k{i}")
            coeffs[i - 1 - j] += int(mult) if mult else 1
        elif chunk:
            tail_parts.append(chunk)
    tail = parse_ordinal("+".join(tail_parts)) if tail_parts else ZERO
    return Stratified(tuple(coeffs), tail)


def format_stratified(e: Stratified) -> str:
    i = len(e.coeffs) + 1
    parts = []
    for pos, c in enumerate(e.coeffs):
        if c:
            j = i - 1 - pos
            parts.append(f"k{j}" if c == 1 else f"k{j}*{c}")
    if not e.tail.is_zero or not parts:
        parts.append(str(e.tail))
    return "+".join(parts)


def parse_element(x, t: OrderTerm) -> Element:
    """Element literal for carrier ``t``; accepts text or an s-expression."""
    if isinstance(x, str):
        x = read_one(x)
    t = normalize(t)
    e = _element_from(x, t)
    validate(t, e)
    return e


def _element_from(x, t):
    if isinstance(t, Sum):
        if not (isinstance(x, SList) and len(x) == 3 and x[0].text == "at"):
            raise OrderSyntaxError("sum elements are written (at <part> <elt>)", getattr(x, "pos", None))
        k = int(x[1].text)
        if not 0 <= k < len(t.parts):
            raise InvalidElement(f"part {k} out of range")
        return At(k, _element_from(x[2], t.parts[k]))
    if isinstance(t, LexProd):
        if not (isinstance(x, SList) and len(x) == 3 and x[0].text == "lex"):
            raise OrderSyntaxError("product elements are written (lex <index> <block>)", getattr(x, "pos", None))
        return Pair(_element_from(x[1], t.index), _element_from(x[2], t.block))
    if not isinstance(x, Atom):
        raise OrderSyntaxError("expected an element literal", x.pos)
    try:
        if isinstance(t, Fin):
            return int(x.text)
        if isinstance(t, Ord):
            return parse_ordinal(x.text)
        if isinstance(t, NamedRegular):
            return parse_stratified(x.text, t.i)
        if isinstance(t, Rationals):
            return Fraction(x.text)
    except (ValueError, ZeroDivisionError) as exc:
        raise OrderSyntaxError(f"bad element literal {x.text!r}: {exc}", x.pos) from None
    raise OrderSyntaxError(f"no elements in {format_term(t)}", x.pos)


def format_element(t: OrderTerm, e: Element) -> str:
    if isinstance(t, Sum):
        return f"(at {e.part} {format_element(t.parts[e.part], e.elt)})"
    if isinstance(t, LexProd):
        return f"(lex {format_element(t.index, e.index)} {format_element(t.block, e.block)})"
    if isinstance(t, Fin):
        return str(e)
    if isinstance(t, Ord):
        s = str(e)
        return s if s.isdigit() else f'"{s}"'
    if isinstance(t, NamedRegular):
        s = format_stratified(e)
        return s if s.isdigit() else f'"{s}"'
    if isinstance(t, Rationals):
        return str(Fraction(e))
    raise TypeError(t)
