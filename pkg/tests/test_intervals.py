import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from cofkit import orders as O
from cofkit.intervals import (
    MINUS_INF,
    PLUS_INF,
    IntervalSet,
    after,
    before,
    cofinality_of_set,
    format_intervalset,
    is_cofinal_in,
    parse_intervalset,
)
from cofkit.ordinals import OMEGA, nat
from cofkit.sexpr import read_one


def _random_set(rng, t, samples):
    pieces = []
    for _ in range(rng.randint(0, 3)):
        a, b = sorted(rng.sample(range(len(samples)), 2)) if len(samples) > 1 else (0, 0)
        lo = MINUS_INF if rng.random() < 0.2 else rng.choice((before, after))(samples[a])
        hi = PLUS_INF if rng.random() < 0.2 else rng.choice((before, after))(samples[b])
        pieces.append((lo, hi))
    return IntervalSet(t, pieces)


def _case(seed):
    rng = random.Random(seed)
    t = O.normalize(gen.any_term(rng, depth=1))
    samples = O.sorted_elements(t, O.element_iter(t, 10))
    return t, samples, _random_set(rng, t, samples), _random_set(rng, t, samples)


cases = st.integers(0, 10**6).map(_case)


@given(cases)
@settings(max_examples=80)
def test_boolean_operations_match_membership(case):
    t, samples, a, b = case
    for e in samples:
        assert (e in a.union(b)) == (e in a or e in b)
        assert (e in a.intersection(b)) == (e in a and e in b)
        assert (e in a.difference(b)) == (e in a and e not in b)
        assert (e in a.complement()) == (e not in a)


@given(cases)
@settings(max_examples=80)
def test_canonical_form(case):
    t, samples, a, b = case
    assert a.union(a) == a
    assert a.union(b) == b.union(a)
    assert a.complement().complement() == a
    assert a.union(b).complement() == a.complement().intersection(b.complement())
    assert a.intersection(b).issubset(a)


@given(cases)
@settings(max_examples=80)
def test_text_roundtrip(case):
    t, samples, a, b = case
    assert parse_intervalset(read_one(format_intervalset(a)), t) == a


@given(cases)
@settings(max_examples=80)
def test_max_element_is_the_top(case):
    t, samples, a, b = case
    m = a.max_element()
    if m is not None:
        assert m in a
        assert all(O.cmp(t, e, m) <= 0 for e in samples if e in a)
        assert cofinality_of_set(a) == O.ONE_COF


def test_empty_pieces_vanish():
    assert IntervalSet(O.Q, [(after(Fraction(1)), before(Fraction(1)))]).is_empty()
    assert IntervalSet(O.Fin(3), [(after(0), before(1))]).is_empty()
    assert IntervalSet.between(O.Fin(3), 0, 2) == IntervalSet.point(O.Fin(3), 1)


def test_cofinality_of_sets():
    w2 = O.parse_term('(ord "w*2")')
    assert cofinality_of_set(IntervalSet.below(w2, OMEGA)) == O.OMEGA_COF
    assert cofinality_of_set(IntervalSet.below(w2, nat(5))) == O.ONE_COF
    assert cofinality_of_set(IntervalSet.full(O.parse_term("(lexprod Q k1)"))) == O.kappa(1)
    assert cofinality_of_set(IntervalSet.empty(O.Q)) == O.ZERO_COF


def test_cofinal_subsets():
    w2 = O.parse_term('(ord "w*2")')
    full = IntervalSet.full(w2)
    assert is_cofinal_in(IntervalSet.above(w2, OMEGA), full)
    assert not is_cofinal_in(IntervalSet.below(w2, OMEGA), full)
    q = IntervalSet.full(O.Q)
    assert is_cofinal_in(IntervalSet.above(O.Q, Fraction(7)), q)


def test_cardinality_of_sets():
    assert IntervalSet.between(O.Fin(9), 1, 5).cardinality() == 3
    assert IntervalSet.below(O.parse_term('(ord "w*2")'), OMEGA).cardinality() == O.ALEPH0
