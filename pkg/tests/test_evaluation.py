import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cofkit import orders as O
from cofkit.errors import EvaluationError
from cofkit.finite_eval import (
    LINEAR_WITH_LAST,
    NOT_LINEAR,
    FiniteEvaluator,
    SchemaContext,
    classify_relation,
    eval_finite,
)
from cofkit.formulas import And, Eq, Exists, Forall, Not, Or, Rel, Var, Vocabulary, parse
from cofkit.intervals import IntervalSet
from cofkit.order_eval import check_order_axioms, definable_set, eval_order
from cofkit.structures import FiniteStructure, Surrogate, pure_order

LT = Vocabulary.of(relations={"<": 2})


def _order_formula(rng, depth, scope):
    if depth == 0 or (scope and rng.random() < 0.25):
        a, b = rng.choice(scope), rng.choice(scope)
        return Rel("<", (Var(a), Var(b))) if rng.random() < 0.8 else Eq(Var(a), Var(b))
    k = rng.random()
    if k < 0.15:
        return Not(_order_formula(rng, depth - 1, scope))
    if k < 0.35:
        return (And if rng.random() < 0.5 else Or)(
            (_order_formula(rng, depth - 1, scope), _order_formula(rng, depth - 1, scope)))
    v = f"v{len(scope)}"
    return (Exists if rng.random() < 0.5 else Forall)((v,), _order_formula(rng, depth - 1, scope + [v]))


def _order_sentence(seed):
    rng = random.Random(seed)
    return (Exists if rng.random() < 0.5 else Forall)(("v0",), _order_formula(rng, 3, ["v0"]))


def finite_order(n):
    return FiniteStructure(LT, tuple(range(n)), {"<": {(i, j) for i in range(n) for j in range(n) if i < j}})


@given(st.integers(0, 10**6), st.integers(1, 5))
@settings(max_examples=120, deadline=None)
def test_symbolic_and_finite_evaluation_agree_on_finite_orders(seed, n):
    f = _order_sentence(seed)
    assert eval_order(pure_order(O.Fin(n)), f) == eval_finite(finite_order(n), f)


@pytest.mark.parametrize(
    "text,carrier,expected",
    [
        ("(forall (x) (exists (y) (< x y)))", "Q", True),
        ("(forall (x) (exists (y) (< x y)))", '(ord "w+1")', False),
        ("(forall (x y) (-> (< x y) (exists (z) (and (< x z) (< z y)))))", "Q", True),
        ("(forall (x y) (-> (< x y) (exists (z) (and (< x z) (< z y)))))", '(ord "w")', False),
        ("(exists (x) (forall (y) (not (< y x))))", '(ord "w^2")', True),
        ("(qcof (w) (x) (y) (< x y))", '(ord "w^w")', True),
        ("(qcof (w) (x) (y) (< x y))", "(lexprod Q k1)", False),
        ("(qcof (k1) (x) (y) (< x y))", "(lexprod Q k1)", True),
        ("(qcard aleph0 (x) (= x x))", '(ord "w")', True),
        ("(qcard k1 (x) (= x x))", '(ord "w")', False),
    ],
)
def test_order_sentences(text, carrier, expected):
    assert eval_order(pure_order(O.parse_term(carrier)), parse(text, LT)) is expected


def test_definable_sets_are_interval_unions():
    M = pure_order(O.Q)
    s = definable_set(M, parse("(< c x)", LT), "x", {"c": Fraction(1)})
    assert s == IntervalSet.above(O.Q, Fraction(1))
    assert Fraction(2) in s and Fraction(1) not in s


def test_order_axioms_detect_reversed_and_reflexive_encodings():
    M = pure_order(O.Q)
    assert check_order_axioms(M, parse("(< y x)", LT))
    assert check_order_axioms(M, parse("(or (< x y) (= x y))", LT))


def test_finite_quantifiers_follow_the_surrogate():
    V = Vocabulary.of(relations={"P": 1})
    M = FiniteStructure(V, (0, 1, 2), {"P": {(0,), (1,), (2,)}})
    f = parse("(qcard aleph0 (x) (P x))", V)
    assert eval_finite(M, f, surrogate=Surrogate.from_base(3))
    assert not eval_finite(M, f, surrogate=Surrogate.from_base(4))
    ec = parse("(qec fin2 (x) (y) (= x y))", Vocabulary.of(relations={"P": 1}))
    assert eval_finite(M, ec)


def test_finite_cofinality_is_false():
    assert not eval_finite(finite_order(3), parse("(qcof (w) (x) (y) (< x y))", LT))


def test_classify_relation():
    pts = [0, 1, 2]
    assert classify_relation(pts, {(0, 1), (1, 2), (0, 2)})[0] == LINEAR_WITH_LAST
    assert classify_relation(pts, {(0, 1), (1, 0)})[0] == NOT_LINEAR


def test_schema_budget():
    ctx = SchemaContext(Surrogate.from_base(2), budget=4)
    f = parse("(forall (y) (bigand (n aleph0) (< y y)))", LT)
    assert FiniteEvaluator(finite_order(2), ctx).eval(f) is False


def test_unbound_variable():
    with pytest.raises(EvaluationError):
        FiniteEvaluator(finite_order(2)).eval(parse("(< x x)", LT))
