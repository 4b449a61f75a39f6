import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from onlinepm.catalog import DEGENERATE_AND, LINF_SMALL, WILDCARD
from onlinepm.relation import (
    Alphabet,
    DeltaMatrix,
    HammingRelation,
    RelationError,
    UnknownSymbolError,
    boolean_matrix,
    check_pattern,
    delta,
    dumps_delta_matrix,
    load_delta_matrix,
    metric_matrix,
)

FIG1_DOC = {"pattern_alphabet": ["x", "y", "z"], "text_alphabet": ["a", "b", "c"],
            "entries": [[0, 0, 0], [0, 1, 1], [0, 1, 1]]}


def test_load_degenerate_document():
    m = load_delta_matrix(json.dumps(FIG1_DOC))
    assert m.shape == (3, 3)
    assert m.is_boolean
    assert m == DEGENERATE_AND


def test_load_one_by_one():
    m = load_delta_matrix({"pattern_alphabet": ["x"], "text_alphabet": ["a"], "entries": [[1]]})
    assert m.shape == (1, 1) and m.delta("x", "a") == 1


@pytest.mark.parametrize(
    "doc",
    [
        {"pattern_alphabet": ["x"], "text_alphabet": ["a", "b", "c"], "entries": [[0, 1]]},
        {"pattern_alphabet": ["x", "x"], "text_alphabet": ["a"], "entries": [[0], [1]]},
        {"pattern_alphabet": ["x"], "text_alphabet": ["a"], "entries": [["one"]]},
        {"pattern_alphabet": ["x"], "text_alphabet": ["a"], "entries": [[-1]]},
        {"pattern_alphabet": ["x"], "text_alphabet": ["a"], "entries": [[0.5]]},
        {"pattern_alphabet": ["x"], "text_alphabet": ["a"], "entries": [[True]]},
        {"pattern_alphabet": ["x"], "entries": [[0]]},
        {"pattern_alphabet": [], "text_alphabet": ["a"], "entries": []},
        {"pattern_alphabet": [1], "text_alphabet": ["a"], "entries": [[0]]},
        [1, 2],
    ],
)
def test_load_rejects_malformed(doc):
    with pytest.raises(RelationError):
        load_delta_matrix(doc)


def test_load_rejects_bad_json():
    with pytest.raises(RelationError):
        load_delta_matrix("{not json")


def test_delta_examples():
    assert delta(WILDCARD, "*", "b") == 1
    assert delta(WILDCARD, "x", "b") == 0
    assert delta(LINF_SMALL, 0, 3) == 3
    with pytest.raises(UnknownSymbolError):
        delta(WILDCARD, "q", "a")
    with pytest.raises(UnknownSymbolError):
        delta(WILDCARD, "x", "c")


def test_entries_are_read_only():
    with pytest.raises(ValueError):
        WILDCARD.entries[0, 0] = 0


docs = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.fixed_dictionaries(
            {
                "pattern_alphabet": st.lists(st.text(min_size=1, max_size=3), min_size=r, max_size=r, unique=True),
                "text_alphabet": st.lists(st.text(min_size=1, max_size=3), min_size=c, max_size=c, unique=True),
                "entries": st.lists(st.lists(st.integers(0, 9), min_size=c, max_size=c), min_size=r, max_size=r),
            }
        )
    )
)


@given(docs)
@settings(deadline=None)
def test_round_trip(doc):
    m = load_delta_matrix(doc)
    again = load_delta_matrix(dumps_delta_matrix(m))
    assert again == m
    assert hash(again) == hash(m)
    for i, p in enumerate(doc["pattern_alphabet"]):
        for j, t in enumerate(doc["text_alphabet"]):
            assert m.delta(p, t) == doc["entries"][i][j]


def test_alphabet():
    a = Alphabet(("a", "b", "c"))
    assert a.index("c") == 2 and "b" in a and "d" not in a and a[1] == "b"
    assert a.width == 2 and Alphabet(("a",)).width == 1
    assert a.encode("cab").tolist() == [2, 0, 1]
    with pytest.raises(RelationError):
        Alphabet(("a", "a"))
    with pytest.raises(UnknownSymbolError):
        a.index(["unhashable"])


def test_negate_and_submatrix():
    neg = WILDCARD.negate()
    assert neg.entries.tolist() == [[0, 0], [0, 1]]
    sub = DEGENERATE_AND.submatrix(["y"], ["b", "c"])
    assert sub.entries.tolist() == [[1, 1]]
    with pytest.raises(RelationError):
        LINF_SMALL.negate()


def test_check_pattern():
    assert check_pattern(WILDCARD, "*x") == ("*", "x")
    with pytest.raises(ValueError):
        check_pattern(WILDCARD, "")
    with pytest.raises(UnknownSymbolError):
        check_pattern(WILDCARD, "*y")


def test_metric_matrices():
    assert metric_matrix("hamming", [0, 1]).entries.tolist() == [[0, 1], [1, 0]]
    assert metric_matrix("l1", [0, 1], [2, 3]).entries.tolist() == [[2, 3], [1, 2]]
    assert metric_matrix("l2", [0, 1], [2, 3]).entries.tolist() == [[4, 9], [1, 4]]
    assert metric_matrix("product", [0, 2], [1, 3]).entries.tolist() == [[0, 0], [2, 6]]
    with pytest.raises(ValueError):
        metric_matrix("cosine", [0])


def test_boolean_matrix_names():
    m = boolean_matrix([[1, 0], [0, 1]])
    assert m.pattern_alphabet.symbols == ("p0", "p1") and m.text_alphabet.symbols == ("t0", "t1")


def test_hamming_relation():
    h = HammingRelation(("$", 0, 1))
    assert h.delta("$", "$") == 0 and h.delta(0, 1) == 1
    assert h.scores(np.array([0, 1]), np.array([0, 2])).tolist() == [0, 1]
