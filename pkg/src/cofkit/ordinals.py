"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
descending exponents; exponents are themselves ordinals.  Only the
arithmetic needed by the order algebra is provided.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterator, Optional

from .errors import OrderSyntaxError

__all__ = [
    "OrdinalCNF",
    "ZERO",
    "ONE",
    "OMEGA",
    "nat",
    "omega_pow",
    "parse_ordinal",
    "ordinals_below",
]


@total_ordering
@dataclass(frozen=True)
class OrdinalCNF:
    terms: tuple[tuple["OrdinalCNF", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"CNF coefficient must be a positive int, got {coeff!r}")
            if prev is not None and not exp._key < prev._key:
                raise ValueError("CNF exponents must be strictly descending")
            prev = exp
        # nested tuples compare exactly like CNF term lists
        key = tuple((e._key, c) for e, c in self.terms)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    # comparison ---------------------------------------------------------

    def _cmp(self, other: "OrdinalCNF") -> int:
        return (self._key > other._key) - (self._key < other._key)

    def __eq__(self, other):
        return isinstance(other, OrdinalCNF) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, OrdinalCNF):
            return NotImplemented
        return self._key < other._key

    # shape ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def as_int(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def succ(self) -> "OrdinalCNF":
        return self + ONE

    def pred(self) -> Optional["OrdinalCNF"]:
        """Immediate predecessor, or None for zero and limits."""
        if not self.is_successor:
            return None
        *head, (exp, coeff) = self.terms
        if coeff > 1:
            head.append((exp, coeff - 1))
        return OrdinalCNF(tuple(head))

    def __add__(self, other: "OrdinalCNF") -> "OrdinalCNF":
        if not other.terms:
            return self
        lead_exp, lead_coeff = other.terms[0]
        kept = [t for t in self.terms if lead_exp < t[0]]
        same = [c for e, c in self.terms if e == lead_exp]
        if same:
            kept.append((lead_exp, same[0] + lead_coeff))
            kept.extend(other.terms[1:])
        else:
            kept.extend(other.terms)
        return OrdinalCNF(tuple(kept))

    def times_nat(self, n: int) -> "OrdinalCNF":
        """Right multiplication by a natural number."""
        out = ZERO
        for _ in range(n):
            out = out + self
        return out

    def complexity(self) -> int:
        return _complexity(self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            if exp.is_zero:
                parts.append(str(coeff))
                continue
            if exp == ONE:
                base = "w"
            elif exp.is_finite:
                base = f"w^{exp.as_int()}"
            elif exp == OMEGA:
                base = "w^w"
            else:
                base = f"w^({exp})"
            parts.append(base if coeff == 1 else f"{base}*{coeff}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"OrdinalCNF({str(self)!r})"


ZERO = OrdinalCNF(())


def nat(n: int) -> OrdinalCNF:
    if n < 0:
        raise ValueError("negative ordinal")
    return OrdinalCNF(((ZERO, n),)) if n else ZERO


ONE = nat(1)


def omega_pow(e: OrdinalCNF, coeff: int = 1) -> OrdinalCNF:
    return OrdinalCNF(((e, coeff),))


OMEGA = omega_pow(ONE)


@lru_cache(maxsize=None)
def _complexity(o: OrdinalCNF) -> int:
    return sum(c + _complexity(e) for e, c in o.terms)


# parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|(\^)|(\*)|(\+)|(\()|(\)))")


def parse_ordinal(text: str) -> OrdinalCNF:
    """Parse ``w^<cnf>*<nat>`` terms joined by ``+``; naturals allowed."""
    toks: list[tuple[str, str, int]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrderSyntaxError(f"bad ordinal syntax at {pos}: {text!r}", pos)
        kinds = ("num", "w", "^", "*", "+", "(", ")")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                toks.append((kind, val, m.start(m.lastindex)))
        pos = m.end()
    parser = _OrdParser(toks, text)
    result = parser.sum()
    if parser.i != len(toks):
        raise OrderSyntaxError(f"trailing input in ordinal {text!r}", toks[parser.i][2])
    return result


class _OrdParser:
    def __init__(self, toks, text):
        self.toks = toks
        self.text = text
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            where = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
            raise OrderSyntaxError(f"expected {kind!r} in ordinal {self.text!r}", where)
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def sum(self) -> OrdinalCNF:
        out = self.term()
        while self.peek() == "+":
            self.take("+")
            out = out + self.term()
        return out

    def term(self) -> OrdinalCNF:
        if self.peek() == "num":
            return nat(int(self.take("num")))
        if self.peek() == "(":
            self.take("(")
            inner = self.sum()
            self.take(")")
            return inner
        self.take("w")
        exp = ONE
        if self.peek() == "^":
            self.take("^")
            exp = self.atom()
        coeff = 1
        if self.peek() == "*":
            self.take("*")
            coeff = int(self.take("num"))
        return omega_pow(exp).times_nat(coeff)

    def atom(self) -> OrdinalCNF:
        if self.peek() == "num":
            return nat(int(self.take("num")))
        if self.peek() == "(":
            self.take("(")
            inner = self.sum()
            self.take(")")
            return inner
        self.take("w")
        if self.peek() == "^":
            self.take("^")
            return omega_pow(self.atom())
        return OMEGA


# enumeration -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _below_with_complexity(bound: Optional[OrdinalCNF], k: int) -> tuple[OrdinalCNF, ...]:
    """All ordinals < bound (None: unbounded) of complexity exactly k."""
    if bound is not None and bound.is_zero:
        return ()
    if k == 0:
        return (ZERO,)
    out: list[OrdinalCNF] = []
    lead_exp = bound.terms[0][0] if bound is not None else None
    lead_coeff = bound.terms[0][1] if bound is not None else None
    for ce in range(k):
        # first exponent f with complexity ce; coefficient c with ce + c <= k
        exps = _below_with_complexity(None if lead_exp is None else lead_exp.succ(), ce)
        for f in exps:
            for coeff in range(1, k - ce + 1):
                rest_k = k - ce - coeff
                if lead_exp is None or f < lead_exp:
                    rest_bound = omega_pow(f)
                elif coeff < lead_coeff:
                    rest_bound = omega_pow(f)
                elif coeff == lead_coeff:
                    rest_bound = OrdinalCNF(bound.terms[1:])
                else:
                    continue
                for rest in _below_with_complexity(rest_bound, rest_k):
                    out.append(OrdinalCNF(((f, coeff),) + rest.terms))
    return tuple(out)


def ordinals_below(bound: Optional[OrdinalCNF], n: int, max_complexity: int = 64) -> list[OrdinalCNF]:
    """The first ``n`` ordinals below ``bound`` ranked by (complexity, value), sorted."""
    found: list[OrdinalCNF] = []
    for k in range(max_complexity + 1):
        if bound is not None and bound.is_finite and k >= bound.as_int():
            break
        level = sorted(_below_with_complexity(bound, k))
        found.extend(level[: n - len(found)])
        if len(found) >= n:
            break
    return sorted(found)


def iter_naturals() -> Iterator[OrdinalCNF]:
    n = 0
    while True:
        yield nat(n)
        n += 1
