"""Explicit cofinal sequences, used as an independent cofinality oracle.

``cofinal_sequence(t)`` builds ``n -> element`` for orders whose cofinality
is omega, shape by shape, without consulting ``orders.cofinality``.
"""

from __future__ import annotations

from fractions import Fraction

from . import orders as O
from .errors import NoWitnessEnumerator
from .ordinals import OrdinalCNF, omega_pow


def fundamental(o: OrdinalCNF, n: int) -> OrdinalCNF:
    """The n-th term of the standard ascending sequence converging to a limit ``o``."""
    if not o.is_limit:
        raise NoWitnessEnumerator(f"{o} is not a limit ordinal")
    *head, (exp, coeff) = o.terms
    base = OrdinalCNF(tuple(head) + (((exp, coeff - 1),) if coeff > 1 else ()))
    if exp.is_successor:
        return base + omega_pow(exp.pred()).times_nat(n + 1)
    return base + omega_pow(fundamental(exp, n))


def cofinal_sequence(t: O.OrderTerm):
    t = O.normalize(t)
    if isinstance(t, O.Rationals):
        return lambda n: Fraction(n)
    if isinstance(t, O.Ord):
        if not t.o.is_limit:
            raise NoWitnessEnumerator(f"{O.format_term(t)} has a last element or is empty")
        return lambda n: fundamental(t.o, n)
    if isinstance(t, O.Sum):
        k = len(t.parts) - 1
        inner = cofinal_sequence(t.parts[k])
        return lambda n: O.At(k, inner(n))
    if isinstance(t, O.LexProd):
        top = O.last(t.index)
        if top is not None:
            inner = cofinal_sequence(t.block)
            return lambda n: O.Pair(top, inner(n))
        inner = cofinal_sequence(t.index)
        anchor = O.element_iter(t.block, 1)[0]
        return lambda n: O.Pair(inner(n), anchor)
    if isinstance(t, O.NamedRegular):
        raise NoWitnessEnumerator(f"k{t.i} has uncountable cofinality; no enumeration")
    raise NoWitnessEnumerator(f"{O.format_term(t)} has no cofinal omega-sequence")


def check_sequence(t: O.OrderTerm, seq, length: int = 12, probes: int = 24, reach: int = 400) -> bool:
    """Strictly ascending on a prefix, and every probe element is eventually passed."""
    xs = [seq(n) for n in range(length)]
    for a, b in zip(xs, xs[1:]):
        O.validate(t, a)
        if O.cmp(t, a, b) >= 0:
            return False
    for e in O.element_iter(t, probes):
        if not any(O.cmp(t, e, seq(n)) < 0 for n in range(reach)):
            return False
    return True


def oracle_cofinality(t: O.OrderTerm) -> O.CofTag:
    """Cofinality from boundary inspection and explicit sequences only."""
    t = O.normalize(t)
    if isinstance(t, O.Empty):
        return O.ZERO_COF
    if _has_max(t):
        return O.ONE_COF
    if isinstance(t, O.NamedRegular):
        return O.kappa(t.i)
    try:
        seq = cofinal_sequence(t)
    except NoWitnessEnumerator:
        if isinstance(t, O.Sum):
            return oracle_cofinality(t.parts[-1])
        if isinstance(t, O.LexProd):
            return oracle_cofinality(t.block if _has_max(t.index) else t.index)
        raise
    if not check_sequence(t, seq):
        raise NoWitnessEnumerator(f"sequence for {O.format_term(t)} failed its check")
    return O.OMEGA_COF


def _has_max(t) -> bool:
    """A largest element, found by looking at the right end of each shape."""
    if isinstance(t, O.Empty):
        return False
    if isinstance(t, O.Fin):
        return True
    if isinstance(t, O.Ord):
        return t.o.is_successor
    if isinstance(t, (O.Rationals, O.NamedRegular)):
        return False
    if isinstance(t, O.Sum):
        return _has_max(t.parts[-1])
    if isinstance(t, O.LexProd):
        return _has_max(t.index) and _has_max(t.block)
    raise TypeError(t)

