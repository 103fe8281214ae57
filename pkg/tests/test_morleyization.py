import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from cofkit import orders as O
from cofkit.analysis import alpha_equal, relation_symbols
from cofkit.errors import NotPositive
from cofkit.files import read_structure
from cofkit.formulas import Theory, Vocabulary, parse
from cofkit.morleyization import morleyize, roundtrip_ok, tag_models, unmorleyize
from cofkit.structures import pure_order

DATA = Path(__file__).parent / "data"
LT = Vocabulary.of(relations={"<": 2})
theories = st.integers(0, 10**6).map(lambda s: gen.positive_theory(random.Random(s)))


@given(theories)
@settings(max_examples=80, deadline=None)
def test_roundtrip(T):
    res = morleyize(T)
    assert roundtrip_ok(T, res)
    assert not any(r.name in T.vocab for r in res.rows.values())


@given(theories)
@settings(max_examples=60, deadline=None)
def test_tagged_theory_has_no_cofinality_quantifiers(T):
    res = morleyize(T)
    for s in res.t_star.sentences:
        assert "qcof" not in _kinds(s)
    assert len(res.t_cof.sentences) == len(res.rows)


def _kinds(f):
    from cofkit.analysis import polarity_of_quantifiers

    return [k for _, k, _ in polarity_of_quantifiers(f)]


@given(theories)
@settings(max_examples=40, deadline=None)
def test_tagging_is_deterministic(T):
    a, b = morleyize(T), morleyize(T)
    assert a.table() == b.table()


def test_alpha_equal_occurrences_share_a_row():
    T = Theory(LT, [parse("(and (qcof (w) (x) (y) (< x y)) (qcof (w) (a) (b) (< a b)))", LT)])
    res = morleyize(T)
    assert len(res.rows) == 1
    assert list(res.aliases.values()) == ["R0"]
    assert res.row_by_alias("R0").arity == 0


def test_parameters_become_tag_arguments():
    V = Vocabulary.of(relations={"E": 2, "P": 1})
    T = Theory(V, [parse("(forall (z) (-> (P z) (qcof (w) (x) (y) (and (E x y) (E z x)))))", V)])
    row = next(iter(morleyize(T).rows.values()))
    assert row.arity == 1
    back = unmorleyize(morleyize(T))
    assert alpha_equal(back.sentences[0], T.sentences[0])


def test_negative_occurrences_are_rejected():
    T = Theory(LT, [parse("(not (qcof (w) (x) (y) (< x y)))", LT)])
    with pytest.raises(NotPositive):
        morleyize(T)


def test_tag_models_on_orders():
    T = Theory(LT, [parse("(qcof (w) (x) (y) (< x y))", LT)])
    res = morleyize(T)
    name = res.row_by_alias("R0").name
    good = pure_order(O.Q, {name: {()}})
    bad = pure_order(O.parse_term("(sum Q (fin 1))"), {name: {()}})
    assert tag_models(good, res).ok
    assert not tag_models(bad, res).ok


def test_tag_rows_mention_only_base_symbols():
    T = Theory(LT, [parse("(qcof (w) (x) (y) (< x y))", LT)])
    res = morleyize(T)
    for row in res.rows.values():
        assert relation_symbols(row.formula) <= {"<"}


def test_structure_files_resolve_aliases():
    T = Theory(LT, [parse("(qcof (w) (x) (y) (< x y))", LT)])
    res = morleyize(T)
    S = read_structure((DATA / "q.str").read_text())
    assert set(S.tags) == {"R0"}
    assert res.row_by_alias("R0").name in res.aliases
