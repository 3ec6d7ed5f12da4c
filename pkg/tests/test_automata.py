import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lassos, parity_automata
from wadgelab import automata as am
from wadgelab.automata import LassoWord, OmegaAutomaton, Parity, WeakOutput
from wadgelab.catalog import pi_complete, sigma_complete
from wadgelab.errors import AlphabetMismatch, ParseError

ONE_ONE = sigma_complete(1)  # at least one 1


def test_run_lasso_examples():
    assert am.run_lasso(ONE_ONE, LassoWord([], [0])) is False
    assert am.run_lasso(ONE_ONE, LassoWord([1], [0])) is True
    assert am.run_lasso(ONE_ONE, LassoWord([0, 0], [0, 1])) is True


def test_lasso_letter_and_str():
    w = LassoWord([1], [0, 1])
    assert w.take(5) == (1, 0, 1, 0, 1)
    assert str(LassoWord([], [0])) == "(0)^w"


def test_run_rejects_foreign_letters():
    with pytest.raises(AlphabetMismatch):
        am.run_lasso(ONE_ONE, LassoWord([2], [0]))


def test_weak_output_must_stabilise():
    osc = OmegaAutomaton(2, ((1, 1), (0, 0)), 0, WeakOutput((Fraction(0), Fraction(1))))
    with pytest.raises(ValueError):
        am.run_lasso(osc, LassoWord([], [0]))


def test_basic_sets():
    assert am.is_empty(am.empty(3))
    assert not am.is_empty(am.full(3))
    assert am.is_empty(am.intersect(ONE_ONE, am.complement(ONE_ONE)))
    assert am.equivalent(am.union(ONE_ONE, am.complement(ONE_ONE)), am.full(2))


def test_minus_example():
    two = sigma_complete(2)  # odd count of ones, saturated at two
    diff = am.difference(ONE_ONE, two)
    assert am.run_lasso(diff, LassoWord([1, 1], [0]))
    assert not am.run_lasso(diff, LassoWord([1], [0]))


def test_closure_of_open_set_is_full():
    assert am.equivalent(am.closure(ONE_ONE), am.full(2))
    assert am.is_closed(pi_complete(1))
    assert not am.is_closed(ONE_ONE)
    assert am.is_clopen(am.cylinder(2, [0, 1]))


def test_residual():
    assert am.equivalent(am.residual(ONE_ONE, [1]), am.full(2))
    assert am.equivalent(am.residual(ONE_ONE, [0]), ONE_ONE)


@given(parity_automata(), parity_automata(), st.lists(lassos(), min_size=5, max_size=5))
def test_boolean_operations_pointwise(a, b, words):
    for w in words:
        x, y = am.run_lasso(a, w), am.run_lasso(b, w)
        assert am.run_lasso(am.complement(a), w) == (not x)
        assert am.run_lasso(am.intersect(a, b), w) == (x and y)
        assert am.run_lasso(am.union(a, b), w) == (x or y)
        assert am.run_lasso(am.product_combine(a, b, "xor"), w) == (x != y)


@given(parity_automata(max_states=5), st.lists(lassos(), min_size=8, max_size=8))
def test_reduce_preserves_language(a, words):
    r = am.reduce(a)
    assert r.state_count <= a.state_count
    assert all(am.run_lasso(r, w) == am.run_lasso(a, w) for w in words)
    assert am.canonical_key(am.reduce(r)) == am.canonical_key(r)


@given(parity_automata())
def test_emptiness_matches_witness(a):
    w = am.accepted_lasso(a)
    if w is None:
        assert am.is_empty(a)
    else:
        assert am.run_lasso(a, w)


@given(parity_automata())
def test_closure_contains_and_is_closed(a):
    c = am.closure(a)
    assert am.subset(a, c)
    assert am.is_closed(c)


@given(parity_automata())
def test_json_roundtrip(a):
    assert am.from_json(am.to_json(a)) == a


def test_json_field_order_and_rationals():
    f = OmegaAutomaton(2, ((0, 0),), 0, WeakOutput((Fraction(1, 2),)))
    doc = json.loads(am.to_json(f))
    assert list(doc) == ["alphabet", "states", "initial", "delta", "acceptance"]
    assert doc["acceptance"]["outputs"] == ["1/2"]
    assert am.format_rational(Fraction(3)) == "3/1"


@pytest.mark.parametrize("text", ["2/4", "1/0", "x", "1.5"])
def test_parse_rational_is_strict(text):
    with pytest.raises(ParseError):
        am.parse_rational(text)


def test_parse_errors_name_the_field():
    doc = json.loads(am.to_json(ONE_ONE))
    del doc["initial"]
    with pytest.raises(ParseError, match="initial"):
        am.from_dict(doc)
    with pytest.raises(ParseError, match="line 1"):
        am.from_json("{")


def test_incomplete_parity_rows_get_a_rejecting_sink():
    doc = {"alphabet": 2, "states": 1, "initial": 0, "delta": [[0]], "acceptance": {"kind": "parity", "priorities": [0]}}
    a = am.from_dict(doc)
    assert am.run_lasso(a, LassoWord([], [0]))
    assert not am.run_lasso(a, LassoWord([1], [0]))


def test_incomplete_weak_rows_rejected():
    doc = {"alphabet": 2, "states": 1, "initial": 0, "delta": [[0, None]],
           "acceptance": {"kind": "weak-output", "outputs": ["0/1"]}}
    with pytest.raises(ParseError):
        am.from_dict(doc)


def test_product_requires_equal_alphabets():
    with pytest.raises(AlphabetMismatch):
        am.intersect(am.full(2), am.full(3))


def test_complement_is_priority_shift():
    a = OmegaAutomaton(2, ((0, 1), (0, 1)), 0, Parity((1, 0)))
    assert am.complement(a).acceptance.priorities == (2, 1)
