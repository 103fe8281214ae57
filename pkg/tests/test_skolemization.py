import random
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from cofkit.aec import find_lift
from cofkit.analysis import is_universal
from cofkit.expansion import all_structures, compare_theory, expansion_exists
from cofkit.finite_eval import SchemaContext, eval_finite
from cofkit.formulas import Theory, Vocabulary, parse
from cofkit.skolemization import materialize, skolemize_sentence, skolemize_theory
from cofkit.structures import FiniteStructure, Surrogate

V_E = Vocabulary.of(relations={"E": 2})
V_EP = Vocabulary.of(relations={"E": 2, "P": 1})
theories = st.integers(0, 10**6).map(lambda s: gen.positive_theory(random.Random(s), max_depth=3, max_sentences=2))


@given(theories)
@settings(max_examples=40, deadline=None)
def test_output_is_universal(T):
    sk = skolemize_theory(T)
    assert sk.universal
    assert all(is_universal(s) for s in sk.theory.sentences)
    assert set(T.vocab) <= set(sk.theory.vocab)


@given(theories)
@settings(max_examples=20, deadline=None)
def test_names_are_deterministic(T):
    a, b = skolemize_theory(T), skolemize_theory(T)
    assert a.theory.sentences == b.theory.sentences
    assert list(a.registry) == list(b.registry)


@given(st.sampled_from([
    "(forall (x) (exists (y) (E x y)))",
    "(exists (x) (and (P x) (forall (y) (E x y))))",
    "(forall (x) (-> (P x) (exists (y) (and (E y x) (not (P y))))))",
    "(exists (x y) (and (E x y) (not (E y x))))",
    "(forall (x) (exists (y) (forall (z) (or (E y z) (P x)))))",
]))
@settings(max_examples=5, deadline=None)
def test_first_order_skolemization_is_equisatisfiable_on_small_structures(text):
    T = Theory(V_EP, [parse(text, V_EP)])
    sk = skolemize_theory(T)
    checked, bad = compare_theory(T, sk.theory, max_size=2)
    assert checked > 0 and not bad


def test_registry_records_block_and_classical_symbols():
    T = Theory(V_E, [parse("(forall (x) (exists (y) (E x y)))", V_E),
                     parse("(qcof (w) (x) (y) (E x y))", V_E)])
    sk = skolemize_theory(T)
    kinds = {s.kind for s in sk.registry.values()}
    assert kinds == {"block", "skolem"}
    assert any(s.indexed for s in sk.registry.values() if s.kind == "block")
    assert all(s.origin for s in sk.registry.values())


def test_cofinality_sentence_matches_truth_on_small_structures():
    T = Theory(V_E, [parse("(qcof (w) (x) (y) (E x y))", V_E)])
    sk = skolemize_theory(T)
    for s in (2, 3):
        checked, bad = compare_theory(T, sk.theory, max_size=2, ctx=SchemaContext(Surrogate.from_base(s)))
        assert not bad


def test_materialization_expands_schemas():
    T = Theory(V_E, [parse("(qcof (w) (x) (y) (E x y))", V_E)])
    lazy = skolemize_theory(T, budget=3)
    eager = skolemize_theory(T, budget=3, materialized=True)
    assert eager.universal and lazy.universal
    assert len(str(eager.theory.sentences)) > len(str(lazy.theory.sentences))
    f = parse("(forall (y) (bigand (n aleph0) (E y y)))", V_E)
    assert "bigand" not in str(materialize(f, 3)).lower()


def test_single_sentence_stage():
    s, reg = skolemize_sentence(parse("(forall (x) (exists (y) (E x y)))", V_E), V_E)
    assert is_universal(s) and len(reg) == 1


def test_lift_of_a_model():
    T = Theory(V_E, [parse("(forall (x) (exists (y) (E x y)))", V_E)])
    sk = skolemize_theory(T)
    for M in all_structures(V_E, 2):
        lift = find_lift(M, sk)
        if all(eval_finite(M, s) for s in T.sentences):
            assert lift is not None and lift.reduct_ok() and lift.models()
        else:
            assert lift is None


def test_expansion_search_reports_a_witness_table():
    V = Vocabulary.of(relations={"E": 2}, functions={"f": 1})
    f = parse("(forall (x) (E x (f x)))", V)
    M = next(M for M in all_structures(V_E, 2) if M.relations["E"] == {(0, 1), (1, 0)})
    table = expansion_exists(FiniteStructure(V, M.universe, M.relations), f, ["f"])
    assert table == {("f", None, (0,)): 1, ("f", None, (1,)): 0}


def test_three_valued_search_agrees_with_brute_force():
    V = Vocabulary.of(relations={"E": 2}, functions={"f": 1, "g": 1})
    f = parse("(forall (x) (or (E x (f x)) (and (E (g x) x) (not (= (f x) (g x))))))", V)
    for M in all_structures(V_E, 2):
        found = expansion_exists(FiniteStructure(V, M.universe, M.relations), f, ["f", "g"]) is not None
        brute = any(
            eval_finite(FiniteStructure(V, M.universe, M.relations,
                                        {("f", None): dict(zip([(0,), (1,)], a)),
                                         ("g", None): dict(zip([(0,), (1,)], b))}), f)
            for a in product(M.universe, repeat=2) for b in product(M.universe, repeat=2)
        )
        assert found == brute
