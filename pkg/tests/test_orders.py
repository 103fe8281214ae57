import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from cofkit import orders as O
from cofkit.errors import InvalidElement, OrderSyntaxError
from cofkit.ordinals import OMEGA, ONE, ZERO, OrdinalCNF, nat, omega_pow, parse_ordinal
from cofkit.witnesses import check_sequence, cofinal_sequence, oracle_cofinality

ordinals = st.lists(st.tuples(st.integers(0, 3), st.integers(1, 4)), max_size=4).map(
    lambda ts: sum((omega_pow(nat(e), c) for e, c in ts), ZERO)
)
terms = st.integers(0, 10**6).map(lambda s: O.normalize(gen.any_term(random.Random(s))))
ordinal_terms = st.integers(0, 10**6).map(lambda s: O.normalize(gen.ordinal_term(random.Random(s))))


# ordinals --------------------------------------------------------------------------------------


@given(ordinals, ordinals, ordinals)
def test_ordinal_addition_is_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(ordinals, ordinals)
def test_adding_on_the_right_never_decreases(a, b):
    assert not (a + b) < a
    if not b.is_zero:
        assert a < a + b


@given(ordinals)
def test_ordinal_text_roundtrip(a):
    assert parse_ordinal(str(a)) == a


@given(ordinals, ordinals)
def test_ordinal_difference(a, b):
    lo, hi = sorted([a, b])
    assert lo + O._ordinal_diff(lo, hi) == hi


@given(ordinals)
def test_successor_and_predecessor(a):
    assert a < a.succ()
    assert a.succ().pred() == a
    assert a.is_zero or a.is_successor != a.is_limit


def test_left_absorption():
    assert nat(1) + OMEGA == OMEGA
    assert OMEGA + nat(1) != OMEGA
    assert omega_pow(nat(1)) + omega_pow(nat(2)) == omega_pow(nat(2))
    assert str(parse_ordinal("w^2*3+w+4")) == "w^2*3+w+4"
    assert parse_ordinal("0") == ZERO and parse_ordinal("1") == ONE


@pytest.mark.parametrize("bad", ["", "w^", "3+", "x"])
def test_bad_ordinal_literals(bad):
    with pytest.raises(Exception):
        parse_ordinal(bad)


# order terms -----------------------------------------------------------------------------------


@given(terms)
@settings(max_examples=60)
def test_term_text_roundtrip(t):
    assert O.parse_term(O.format_term(t)) == t


@given(terms)
@settings(max_examples=60)
def test_sample_elements_are_valid_and_sorted(t):
    xs = O.sorted_elements(t, O.element_iter(t, 8))
    for e in xs:
        O.validate(t, e)
        assert O.parse_element(O.format_element(t, e), t) == e
    for a, b in zip(xs, xs[1:]):
        assert O.cmp(t, a, b) < 0 and O.cmp(t, b, a) > 0
        mid = O.between(t, a, b)
        if mid is not None:
            assert O.cmp(t, a, mid) < 0 < O.cmp(t, b, mid)


@given(terms)
@settings(max_examples=60)
def test_succ_and_pred_are_inverse(t):
    for e in O.element_iter(t, 6):
        s = O.succ(t, e)
        if s is not None:
            assert O.cmp(t, e, s) < 0
            assert O.pred(t, s) == e
            assert O.between(t, e, s) is None


@given(terms)
@settings(max_examples=60)
def test_first_and_last_bound_the_samples(t):
    lo, hi = O.first(t), O.last(t)
    for e in O.element_iter(t, 6):
        if lo is not None:
            assert O.cmp(t, lo, e) <= 0
        if hi is not None:
            assert O.cmp(t, e, hi) <= 0
    assert (hi is not None) == (O.cofinality(t) == O.ONE_COF)


@given(ordinal_terms)
@settings(max_examples=100)
def test_cofinality_matches_the_enumerator(t):
    assert O.cofinality(t) == oracle_cofinality(t)


@given(terms)
@settings(max_examples=60)
def test_witness_sequences_are_cofinal(t):
    if O.cofinality(t) != O.OMEGA_COF:
        return
    assert check_sequence(t, cofinal_sequence(t), probes=12, reach=200)


def test_normalization():
    assert O.normalize(O.Sum((O.Q, O.Sum((O.Fin(1), O.Q))))) == O.Sum((O.Q, O.Fin(1), O.Q))
    assert O.normalize(O.LexProd(O.Q, O.Fin(1))) == O.Q


@pytest.mark.parametrize(
    "text,cof",
    [
        ("Q", "w"),
        ("(fin 3)", "1"),
        ('(ord "w^w")', "w"),
        ('(ord "w+1")', "1"),
        ("k1", "k1"),
        ("(lexprod Q k1)", "k1"),
        ("(lexprod k1 (fin 2))", "k1"),
        ("(sum k2 Q)", "w"),
        ("(sum Q (fin 1))", "1"),
    ],
)
def test_cofinality_examples(text, cof):
    assert str(O.cofinality(O.parse_term(text))) == cof


def test_cardinalities():
    assert O.cardinality(O.parse_term("(sum (fin 2) (fin 3))")) == 5
    assert O.cardinality(O.parse_term('(ord "w^2")')) == O.ALEPH0
    assert O.cardinality(O.parse_term("(lexprod Q k1)")) == O.cardinality(O.NamedRegular(1))


def test_rational_elements():
    assert O.between(O.Q, Fraction(0), Fraction(1)) == Fraction(1, 2)
    assert O.succ(O.Q, Fraction(0)) is None


def test_left_cofinality_of_limits():
    w2 = O.parse_term('(ord "w*2")')
    assert O.left_cofinality(w2, OMEGA) == O.OMEGA_COF
    assert O.left_cofinality(w2, nat(3)) == O.ONE_COF
    assert O.left_cofinality(w2, ZERO) == O.ZERO_COF


@pytest.mark.parametrize("text", ["(fin)", "(sum)", "(lexprod Q)", "(ord w)x", "(bogus 1)", "k0"])
def test_bad_terms(text):
    with pytest.raises(OrderSyntaxError) as exc:
        O.parse_term(text)
    assert exc.value.diagnostic()["code"] == "order-syntax"


def test_bad_elements():
    with pytest.raises(InvalidElement):
        O.parse_element("7", O.Fin(3))
    with pytest.raises((InvalidElement, OrderSyntaxError)):
        O.parse_element('"w"', O.parse_term('(ord "w")'))
    with pytest.raises(OrderSyntaxError):
        O.parse_element("(at 0 1)", O.Q)


def test_ordinal_constructor_rejects_unsorted_terms():
    with pytest.raises(Exception):
        OrdinalCNF(((ZERO, 1), (ONE, 1)))
