import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from onlinepm.canonical import ALWAYS_ZERO, DEAD_P, DEAD_T, build_canonical_map, canonicalize_pattern
from onlinepm.catalog import CHARACTER_CLASSES, EXACT_PAIR, WILDCARD
from onlinepm.classifier import WildcardPresentError
from onlinepm.relation import boolean_matrix


def test_character_class_maps():
    cmap = build_canonical_map(CHARACTER_CLASSES)
    assert cmap.pattern_map == {"v": "v", "y": "v", "x": "x", "z": "x", "w": DEAD_P}
    assert cmap.text_map == {"a": "a", "c": "a", "b": "b", "d": "b", "e": "b", "f": DEAD_T}
    # partners share a code
    assert cmap.pattern_code["v"] == cmap.text_code["b"] != 0
    assert cmap.pattern_code["x"] == cmap.text_code["a"] != 0
    assert cmap.text_code["f"] == 0 and cmap.n_classes == 2


def test_identity_and_all_zero():
    cmap = build_canonical_map(EXACT_PAIR)
    assert cmap.pattern_map == {"x": "x", "y": "y"} and cmap.text_map == {"a": "a", "b": "b"}
    zero = build_canonical_map(boolean_matrix([[0, 0], [0, 0]]))
    assert set(zero.pattern_map.values()) == {DEAD_P} and set(zero.text_map.values()) == {DEAD_T}


def test_wildcard_rejected():
    with pytest.raises(WildcardPresentError):
        build_canonical_map(WILDCARD)


def test_canonicalize_examples():
    cmap = build_canonical_map(CHARACTER_CLASSES)
    assert canonicalize_pattern(cmap, "vyxz") == ("v", "v", "x", "x")
    assert canonicalize_pattern(cmap, "vw") is ALWAYS_ZERO
    assert canonicalize_pattern(build_canonical_map(EXACT_PAIR), "xyyx") == tuple("xyyx")
    with pytest.raises(KeyError):
        canonicalize_pattern(cmap, "vq")


wildcard_free = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
)).filter(lambda rows: not oracles.has_wildcard(rows))


@given(wildcard_free)
@settings(max_examples=200)
def test_maps_are_idempotent_and_smallest(rows):
    m = boolean_matrix(rows)
    cmap = build_canonical_map(m)
    for s, c in cmap.pattern_map.items():
        if c is DEAD_P:
            assert not any(m.row(s))
            continue
        assert cmap.pattern_map[c] == c and m.row(c) == m.row(s)
        earlier = m.pattern_alphabet.symbols[:m.pattern_alphabet.index(c)]
        assert all(m.row(e) != m.row(s) for e in earlier)
    for t, c in cmap.text_map.items():
        if c is not DEAD_T:
            assert cmap.text_map[c] == c and m.column(c) == m.column(t)


@given(wildcard_free)
@settings(max_examples=60, deadline=None)
def test_semantics_preserved(rows):
    """AND over the original strings equals exact equality of codes with the dead-text flag."""
    m = boolean_matrix(rows)
    cmap = build_canonical_map(m)
    pa, ta = list(m.pattern_alphabet), list(m.text_alphabet)
    for length in range(1, 4):
        for P in itertools.product(pa, repeat=length):
            canon = canonicalize_pattern(cmap, P)
            for W in itertools.product(ta, repeat=length):
                want = oracles.window_value(lambda p, t: rows[pa.index(p)][ta.index(t)], "and", P, W)
                if canon is ALWAYS_ZERO or any(cmap.text_map[t] is DEAD_T for t in W):
                    got = 0
                else:
                    got = int(cmap.pattern_codes(canon) == [cmap.text_code[t] for t in W])
                assert got == want
