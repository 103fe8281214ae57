from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cofkit import orders as O
from cofkit.aec import (
    campaign,
    check_coherence,
    cofinality_theory,
    fin_chain,
    find_lift,
    insertion_chain,
    proper_extend,
    run_chain,
    skolem_hull,
    strong_sub,
    strong_sub_via_lifts,
    tagged_end_chain,
)
from cofkit.embeddings import (
    end_extend,
    identity,
    inclusion,
    infer_inclusion,
    insert_part,
    prefix_extend,
    thicken,
)
from cofkit.errors import NotExpressible
from cofkit.expansion import all_structures
from cofkit.formulas import Theory, Vocabulary, parse
from cofkit.intervals import IntervalSet, after
from cofkit.morleyization import morleyize
from cofkit.skolemization import skolemize_theory
from cofkit.structures import FiniteStructure, pure_order

RES = morleyize(cofinality_theory())
TAG = next(iter(RES.rows))


def tagged(text):
    return pure_order(O.parse_term(text), {TAG: {()}})


# embeddings ----------------------------------------------------------------------------------


def test_end_extension_maps_into_the_first_part():
    M = pure_order(O.Q)
    emb = end_extend(M, O.Fin(2))
    assert O.format_term(emb.target.carrier) == "(sum Q (fin 2))"
    a, b = Fraction(0), Fraction(3)
    assert O.cmp(emb.target.carrier, emb(a), emb(b)) < 0
    assert emb.sup_image(IntervalSet.full(O.Q)) == emb.top


def test_sup_image_of_bounded_sets():
    M = pure_order(O.Q)
    emb = end_extend(M, O.parse_term("(sum (fin 1) Q)"))
    s = IntervalSet.below(O.Q, Fraction(1))
    assert emb.sup_image(s) is not None
    assert emb.sup_image(IntervalSet.empty(O.Q)) is None
    point = IntervalSet.point(O.Q, Fraction(2))
    assert emb.sup_image(point) == after(emb(Fraction(2)))


@pytest.mark.parametrize("build", [
    lambda M: end_extend(M, O.Fin(2)),
    lambda M: prefix_extend(M, O.Fin(2)),
    lambda M: thicken(M, 2),
    lambda M: insert_part(M, 0, O.Q),
])
def test_inclusions_are_recognized(build):
    # the recognized inclusion may differ from the one used to build the target
    M = pure_order(O.parse_term("(sum Q Q)"))
    emb = build(M)
    again = infer_inclusion(M, emb.target)
    xs = O.sorted_elements(M.carrier, O.element_iter(M.carrier, 6))
    for a, b in zip(xs, xs[1:]):
        assert O.cmp(emb.target.carrier, again(a), again(b)) < 0


def test_unrecognized_targets():
    with pytest.raises(NotExpressible):
        infer_inclusion(pure_order(O.Q), pure_order(O.parse_term('(ord "w")')))


@given(st.integers(0, 3))
@settings(max_examples=4, deadline=None)
def test_composition_of_inclusions(k):
    M = pure_order(O.Q)
    a = end_extend(M, O.Fin(k + 1))
    b = prefix_extend(a.target, O.Q)
    c = a.then(b)
    for e in O.element_iter(O.Q, 5):
        assert c(e) == b(a(e))


# the strong substructure relation ------------------------------------------------------------


def test_reflexive_on_tagged_orders():
    M = tagged("Q")
    assert strong_sub(M, M, identity(M), RES)


def test_adding_a_last_point_breaks_cofinality():
    M, N = tagged("Q"), tagged("(sum Q (fin 1))")
    v = strong_sub(M, N, infer_inclusion(M, N), RES)
    assert not v and v.witness[0] == "cofinality"


def test_bounded_image_is_not_strong():
    M = tagged("Q")
    emb = end_extend(M, O.parse_term("(sum (fin 1) Q)"))
    assert not strong_sub(M, emb.target, emb, RES)
    top = prefix_extend(M, O.Q)
    assert strong_sub(M, top.target, top, RES)


def test_insertion_keeps_cofinality():
    M = tagged("(sum Q Q)")
    N = tagged("(sum Q Q Q)")
    assert strong_sub(M, N, insert_part(M, 0, O.Q), RES)


def test_elementarity_failure_is_reported():
    M, N = pure_order(O.Q), pure_order(O.parse_term("(sum Q (fin 1))"))
    has_last = parse("(exists (x) (forall (y) (not (< x y))))", M.vocab)
    assert strong_sub(M, N, infer_inclusion(M, N))
    v = strong_sub(M, N, infer_inclusion(M, N), fragment=[has_last])
    assert not v and v.witness[0] == "elementarity"


def test_coherence_on_insertions():
    M0 = tagged("(sum Q Q)")
    e01 = insert_part(M0, 0, O.Q)
    e12 = insert_part(e01.target, 1, O.Q)
    assert check_coherence(M0, e01.target, e12.target, e01, e12, RES)


def test_proper_extension_exists():
    N, emb, v = proper_extend(tagged("(sum Q Q)"), RES)
    assert v.holds and N.carrier != O.parse_term("(sum Q Q)")


# chains ---------------------------------------------------------------------------------------


def test_finite_chain_union():
    rep = run_chain(fin_chain())
    assert rep.union_cofinality == O.OMEGA_COF


def test_tagged_end_chain_union_loses_the_tag():
    rep = run_chain(tagged_end_chain())
    assert not rep.union_ok


def test_insertion_chain_is_smooth():
    rep = run_chain(insertion_chain(res=RES))
    assert rep.steps_ok and rep.union_ok and rep.smooth
    assert rep.lines()[0].startswith("chain")


# finite structures, lifts and hulls ----------------------------------------------------------

V_E = Vocabulary.of(relations={"E": 2})


def test_finite_inclusion_and_lifts():
    T = Theory(V_E, [parse("(forall (x) (exists (y) (E x y)))", V_E)])
    sk = skolemize_theory(T)
    N = FiniteStructure(V_E, (0, 1, 2), {"E": {(0, 1), (1, 0), (2, 0)}})
    M = N.restrict((0, 1))
    emb = inclusion(M, N)
    assert emb.preserves()
    assert strong_sub_via_lifts(M, N, emb, sk)
    lift = find_lift(N, sk)
    hull = skolem_hull((2,), lift)
    assert set(hull.elements) >= {2} and hull.within_bound


def test_hull_is_closed():
    T = Theory(V_E, [parse("(forall (x) (exists (y) (E x y)))", V_E)])
    sk = skolemize_theory(T)
    for M in all_structures(V_E, 3):
        lift = find_lift(M, sk)
        if lift is None:
            continue
        hull = skolem_hull((0,), lift)
        for (name, ix), tab in lift.expansion.functions.items():
            for args, v in tab.items():
                if set(args) <= set(hull.elements):
                    assert v in hull.elements


def test_small_campaign_is_clean_and_seeded():
    a, b = campaign(seed=3, instances=40), campaign(seed=3, instances=40)
    assert a.ok and a.instances >= 40
    assert a.lines() == b.lines()
