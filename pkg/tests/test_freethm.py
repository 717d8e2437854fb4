import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ROOT, golden
from paralab.errors import ResourceError
from paralab.freethm import (
    EvalError,
    ParseError,
    PyCandidate,
    TableCandidate,
    UnsupportedFeature,
    check_candidate,
    emit_free_theorem,
    eval_term,
    evaluate_instance,
    parse_term,
    parse_type,
    show_type,
    split_variance,
)
from paralab.freethm.check import APPEND, IDENTITY, INSERTION_SORT
from paralab.values import Lst

SORT = "forall a. (a * a -> Bool) -> List a -> List a"
APPEND_T = "forall a. List a -> List a -> List a"
ID_T = "forall a. a -> a"
CANDIDATES = ROOT / "fixtures" / "candidates"


def _emit(t):
    return json.loads(json.dumps(emit_free_theorem(t).to_json(), sort_keys=True, ensure_ascii=False))


@pytest.mark.parametrize("name,t", [("sorting", SORT), ("append", APPEND_T), ("identity", ID_T)])
def test_golden_theorems(name, t):
    assert _emit(t) == golden(f"freethm_{name}.json")


def test_normalized_forms_read_as_equations():
    assert emit_free_theorem(ID_T).normalized == "i2 (f_A x) = f_B (i2 x)"
    assert emit_free_theorem(APPEND_T).normalized == "map i2 (f_A xs ys) = f_B (map i2 xs) (map i2 ys)"


def test_parser_round_trip():
    for t in [SORT, APPEND_T, ID_T, "forall a. a * a -> a + a", "forall a. (a -> Nat) -> a -> Nat"]:
        assert show_type(parse_type(show_type(parse_type(t)))) == show_type(parse_type(t))


def test_parser_errors():
    with pytest.raises(UnsupportedFeature):
        parse_type("forall a. forall b. a -> b")
    with pytest.raises(ParseError):
        parse_type("forall a. (a -> ")


def test_variance_split():
    s = split_variance(parse_type(SORT).body.dom, "a")
    assert not s.covariant


def test_interpreter():
    assert eval_term(parse_term(APPEND), (Lst(("a",)), Lst(("b", "c")))) == Lst(("a", "b", "c"))
    assert eval_term(parse_term(IDENTITY), ("x",)) == "x"
    with pytest.raises(ResourceError):
        eval_term(parse_term("letrec loop x = loop x in loop"), ("x",), step_budget=500)
    with pytest.raises(EvalError):
        eval_term(parse_term("fst true"))


def test_insertion_sort_is_parametric():
    v = check_candidate(SORT, INSERTION_SORT, sizes=(2, 3), list_bound=3)
    assert v.ok and v.checked > 0


def test_append_and_identity_are_parametric():
    assert check_candidate(APPEND_T, (CANDIDATES / "append.txt").read_text(), sizes=(2, 3)).ok
    assert check_candidate(ID_T, IDENTITY, sizes=(2, 3)).ok


def test_sorting_by_carrier_order_is_caught():
    def by_label(A, lt, xs):
        return Lst(tuple(sorted(xs.items)))

    v = check_candidate(SORT, PyCandidate(by_label), sizes=(2, 3), list_bound=3)
    assert not v.ok
    assert set(v.witness) >= {"i2", "d0", "d1", "lhs", "rhs"}
    assert v.witness["lhs"] != v.witness["rhs"]


def test_fixed_element_table_is_caught():
    cand = TableCandidate.from_json(json.loads((CANDIDATES / "fixed_point.json").read_text()))
    v = check_candidate(ID_T, cand, sizes=(2, 3))
    assert not v.ok
    assert v.witness["A"] == 2


def test_raw_and_normalized_instances_agree():
    for t, c in [(ID_T, IDENTITY), (APPEND_T, APPEND)]:
        raw = evaluate_instance(t, c, sizes=(2,), form="raw")
        norm = evaluate_instance(t, c, sizes=(2,), form="normalized")
        assert raw[0] and norm[0]
        # the normalized form quantifies over d0 only
        assert norm[1] <= raw[1]


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["0", "1"]))
def test_any_constant_choice_breaks_identity(k):
    # returning a fixed element is not parametric once the carrier has two points
    cand = PyCandidate(lambda A, x: k if k in A else A[0])
    assert not check_candidate(ID_T, cand, sizes=(2,)).ok
