import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from cofkit import orders as O
from cofkit.analysis import alpha_equal
from cofkit.errors import InputError
from cofkit.expansion import all_structures
from cofkit.files import (
    FileFormatError,
    dump_tree,
    load_tree,
    read_params,
    read_structure,
    read_theory,
    write_structure,
    write_theory,
)
from cofkit.formulas import Vocabulary
from cofkit.structures import FiniteStructure, OrderStructure

DATA = Path(__file__).parent / "data"


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_theory_roundtrip(seed):
    T = gen.positive_theory(random.Random(seed))
    back = read_theory(write_theory(T))
    assert back.vocab == T.vocab
    assert all(alpha_equal(a, b) for a, b in zip(back.sentences, T.sentences))


@pytest.mark.parametrize("M", list(all_structures(Vocabulary.of(relations={"E": 2, "P": 1}), 2))[::9])
def test_finite_structure_roundtrip(M):
    assert read_structure(write_structure(M), vocab=M.vocab) == M


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_order_structure_roundtrip(seed):
    t = O.normalize(gen.any_term(random.Random(seed)))
    S = read_structure(f"(carrier {O.format_term(t)})")
    again = read_structure(write_structure(S))
    assert again.carrier == S.carrier


def test_fixtures_load():
    assert isinstance(read_structure((DATA / "cycle3.str").read_text()), FiniteStructure)
    S = read_structure((DATA / "q1.str").read_text())
    assert isinstance(S, OrderStructure) and S.tags == {"R0": {()}}
    T = read_theory((DATA / "cof.thy").read_text())
    assert len(T.sentences) == 1


def test_params():
    assert read_params((DATA / "qparams.txt").read_text(), O.Q) == [Fraction(0), Fraction(1, 2), Fraction(-3)]


@pytest.mark.parametrize("text", ["(vocab (E x))", "(sentence (E x y))", "(vocab (E 2)) (bogus)"])
def test_bad_theories(text):
    with pytest.raises(InputError) as exc:
        read_theory(text)
    assert exc.value.diagnostic()["code"]


def test_bad_structures():
    with pytest.raises(InputError):
        read_structure("(universe 0 1) (rel E (0 5))")
    with pytest.raises(FileFormatError):
        read_structure("(universe 0 1) (bogus E)")


def test_tree_roundtrip():
    tree = {"command": "demo", "ok": True, "seed": 3, "result": {"rows": [1, "x", None, [True]]}}
    assert load_tree(dump_tree(tree)) == tree
