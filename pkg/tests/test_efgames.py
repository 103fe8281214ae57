import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cofkit import orders as O
from cofkit.efgames import (
    Outcome,
    classical_threshold,
    dense_without_endpoints,
    ef_decide,
    gap_wins,
    play_dense,
    separation_report,
    spot_check_dense,
    tree_wins,
)

sizes = st.integers(0, 9)


@given(sizes, sizes, st.integers(0, 3))
@settings(max_examples=200)
def test_gap_search_matches_full_tree_search(m, n, r):
    assert gap_wins(m, n, r) == tree_wins((m,), (n,), r)


@given(sizes, sizes, st.integers(0, 3))
@settings(max_examples=200)
def test_game_is_symmetric(m, n, r):
    assert gap_wins(m, n, r) == gap_wins(n, m, r)


@given(st.integers(0, 20), st.integers(0, 20), st.integers(1, 4))
@settings(max_examples=200)
def test_classical_threshold_is_sufficient(m, n, r):
    if classical_threshold(m, n, r):
        assert gap_wins(m, n, r)


def test_small_exact_values():
    assert gap_wins(3, 3, 5)
    assert gap_wins(1, 2, 1) and not gap_wins(1, 2, 2)
    assert gap_wins(7, 8, 3)
    assert not gap_wins(6, 7, 3)


@pytest.mark.parametrize("text", ["Q", "(sum Q Q)", "(lexprod Q k1)", "(lexprod Q (fin 1))"])
def test_dense_shapes(text):
    t = O.parse_term(text)
    assert dense_without_endpoints(t) and spot_check_dense(t)


@pytest.mark.parametrize("text", ['(ord "w")', "(fin 3)", "(sum Q (fin 1))", "(lexprod (fin 2) Q)"])
def test_non_dense_shapes(text):
    assert not dense_without_endpoints(O.parse_term(text))


@given(st.integers(0, 10**6), st.integers(1, 6))
@settings(max_examples=50, deadline=None)
def test_dense_duplicator_never_loses(seed, rounds):
    A, B = O.Q, O.LexProd(O.Q, O.NamedRegular(1))
    assert play_dense(A, B, rounds, random.Random(seed))


def test_decisions_by_method():
    assert ef_decide(O.Fin(3), O.Fin(3), 4).method == "game-tree search"
    assert ef_decide(O.Fin(2), O.Fin(3), 3).outcome == Outcome.SPOILER
    w = O.parse_term('(ord "w")')
    assert ef_decide(w, w, 3).method == "copy strategy"
    assert ef_decide(w, O.Q, 3).outcome == Outcome.UNDECIDED
    r = ef_decide(O.Q, O.parse_term("(sum Q Q)"), 4, plays=50, seed=1)
    assert r.outcome == Outcome.DUPLICATOR and r.plays == 50 and r.losses == 0


def test_separation_report_is_seeded():
    A, B = O.Q, O.LexProd(O.Q, O.NamedRegular(1))
    a = separation_report(A, B, rounds=3, plays=30, seed=5)
    b = separation_report(A, B, rounds=3, plays=30, seed=5)
    assert a.lines() == b.lines()
    assert a.separated_by_qcof and a.ef_equivalent
