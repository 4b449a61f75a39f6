import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from onlinepm.bits import StateFormatError
from onlinepm.catalog import BINARY_HAMMING, CHARACTER_CLASSES, EXACT_PAIR, LINF_SMALL, WILDCARD
from onlinepm.classifier import OperatorKind
from onlinepm.engines import (
    ConjunctionEngine,
    RingEngine,
    SublinearUnavailableError,
    TrivialEngine,
    make_engine,
    metric_engine,
)
from onlinepm.relation import DeltaMatrix, RelationError, UnknownSymbolError, metric_matrix


def last(engine, text):
    return engine.feed(text)[-1]


def test_ring_examples():
    assert last(RingEngine(BINARY_HAMMING, "sum", [1, 0, 1]), [1, 0, 0]) == 1
    assert last(RingEngine(LINF_SMALL, "max", [0, 1]), [2, 3]) == 2
    assert last(RingEngine(WILDCARD, "and", "*x"), "ba") == 1
    assert RingEngine(BINARY_HAMMING, "sum", [1, 0, 1]).feed([1, 0, 1, 1, 0, 1]) == [None, None, 0, 2, 2, 0]


def test_parity_examples():
    for window, expected in (([0, 1], 0), ([0, 0], 1), ([1, 1], 1)):
        assert last(RingEngine(BINARY_HAMMING, "eq", [0, 0]), window) == expected


def test_left_reports_oldest_position():
    engine = RingEngine(BINARY_HAMMING, "left", [1, 0, 0])
    assert engine.feed([0, 1, 1, 1]) == [None, None, 1, 0]


def test_ring_rejects_bad_input():
    with pytest.raises(RelationError):
        RingEngine(LINF_SMALL, "and", [0, 1])
    with pytest.raises(UnknownSymbolError):
        RingEngine(BINARY_HAMMING, "sum", [0, 2])
    engine = RingEngine(BINARY_HAMMING, "sum", [0])
    with pytest.raises(UnknownSymbolError):
        engine.push(5)


def test_conjunction_examples():
    assert ConjunctionEngine(EXACT_PAIR, "xy", seed=1).feed("ab") == [None, 1]
    assert last(ConjunctionEngine(CHARACTER_CLASSES, "vyxz", seed=1), "bdac") == 1
    assert last(RingEngine(CHARACTER_CLASSES, "and", "vyxz"), "bdac") == 1
    # f matches nothing: zero while it is inside the window
    engine = ConjunctionEngine(CHARACTER_CLASSES, "vx", seed=1)
    assert engine.feed("afba") == [None, 0, 0, 1]
    assert ConjunctionEngine(CHARACTER_CLASSES, "vw", seed=1).feed("bbbb") == [None, 0, 0, 0]


def test_conjunction_or_by_duality():
    neg = EXACT_PAIR.negate()
    text = list("abbaab")
    assert ConjunctionEngine(neg, "xy", seed=2, op="or").feed(text) == RingEngine(neg, "or", "xy").feed(text)
    with pytest.raises(ValueError):
        ConjunctionEngine(EXACT_PAIR, "xy", op="sum")
    with pytest.raises(SublinearUnavailableError):
        ConjunctionEngine(WILDCARD, "*x")


def test_trivial_engines():
    for op, expected in (("true", 1), ("false", 0)):
        assert TrivialEngine(BINARY_HAMMING, op, [0, 1]).feed([1, 1, 0]) == [None, expected, expected]
    assert TrivialEngine(BINARY_HAMMING, "right", [0, 1]).feed([1, 1, 0]) == [None, 0, 1]
    # a single position is its own fold
    assert TrivialEngine(BINARY_HAMMING, "true", [0]).feed([0, 1]) == [0, 1]
    with pytest.raises(ValueError):
        TrivialEngine(BINARY_HAMMING, "and", [0])


def test_make_engine_choices():
    assert isinstance(make_engine(EXACT_PAIR, "and", "xy", seed=1), ConjunctionEngine)
    assert isinstance(make_engine(EXACT_PAIR, "and", "xy", engine="baseline"), RingEngine)
    assert isinstance(make_engine(WILDCARD, "and", "*x"), RingEngine)
    assert isinstance(make_engine(EXACT_PAIR, "right", "xy"), TrivialEngine)
    assert isinstance(make_engine(LINF_SMALL, "sum", [0, 1]), RingEngine)
    for matrix, op, pattern in ((WILDCARD, "and", "*x"), (LINF_SMALL, "sum", [0, 1]), (EXACT_PAIR, "eq", "xy")):
        with pytest.raises(SublinearUnavailableError):
            make_engine(matrix, op, pattern, engine="sublinear")
    with pytest.raises(ValueError):
        make_engine(EXACT_PAIR, "and", "xy", engine="fast")


def test_metric_engines():
    P, W = [1, 0, 2], [2, 2, 0]
    assert last(metric_engine("hamming", P, [0, 1, 2]), W) == 3
    assert last(metric_engine("l1", P), W) == 1 + 2 + 2
    assert last(metric_engine("l2", P), W) == 1 + 4 + 4
    assert last(metric_engine("linf", P), W) == 2
    assert last(metric_engine("correlation", P), W) == 2 + 0 + 0
    with pytest.raises(KeyError):
        metric_engine("cosine", P)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12), st.lists(st.integers(0, 1), min_size=12, max_size=30))
def test_correlation_hamming_identity(P, T):
    """On 0/1 values: Hamming = |P|_1 + |W|_1 - 2 * correlation."""
    m = len(P)
    ham = metric_engine("hamming", P, [0, 1]).feed(T)
    corr = metric_engine("correlation", P, [0, 1]).feed(T)
    for i in range(m - 1, len(T)):
        assert ham[i] == sum(P) + sum(T[i - m + 1:i + 1]) - 2 * corr[i]


@pytest.mark.parametrize("op", [op for op in OperatorKind])
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_ring_matches_fold_at_every_position(op, data):
    hi = 1 if op.boolean else 4
    r, c = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    rows = data.draw(st.lists(st.lists(st.integers(0, hi), min_size=c, max_size=c), min_size=r, max_size=r))
    matrix = DeltaMatrix(tuple(range(r)), tuple(range(c)), rows)
    P = data.draw(st.lists(st.integers(0, r - 1), min_size=1, max_size=16))
    T = data.draw(st.lists(st.integers(0, c - 1), max_size=64))
    got = RingEngine(matrix, op, P).feed(T)
    want = oracles.sliding_outputs(lambda p, t: rows[p][t], op.value, P, T)
    assert {i: v for i, v in enumerate(got) if v is not None} == want


def test_conjunction_agrees_with_ring_on_random_instances():
    rng = random.Random(7)
    disagreements = 0
    for _ in range(10_000):
        m = rng.randint(1, 8)
        P = [rng.choice("vwxyz") if rng.random() < 0.1 else rng.choice("vxyz") for _ in range(m)]
        T = [rng.choice("abcde") if rng.random() < 0.95 else "f" for _ in range(m + rng.randint(0, 8))]
        fast = ConjunctionEngine(CHARACTER_CLASSES, P, seed=rng.getrandbits(64)).feed(T)
        slow = RingEngine(CHARACTER_CLASSES, "and", P).feed(T)
        disagreements += fast != slow
    assert disagreements == 0


def _engines():
    rng = random.Random(3)
    yield RingEngine(BINARY_HAMMING, "sum", [rng.randint(0, 1) for _ in range(20)]), [0, 1]
    yield RingEngine(LINF_SMALL, "max", [0, 1, 1]), [2, 3]
    yield TrivialEngine(BINARY_HAMMING, "right", [0, 1, 1]), [0, 1]
    yield TrivialEngine(BINARY_HAMMING, "true", [0]), [0, 1]
    yield ConjunctionEngine(CHARACTER_CLASSES, list("vyvyvyxzvy"), seed=9), list("abcdef")
    yield ConjunctionEngine(CHARACTER_CLASSES, list("vw"), seed=9), list("abcdef")
    yield ConjunctionEngine(EXACT_PAIR.negate(), list("xyxyyy"), seed=9, op="or"), list("ab")


@pytest.mark.parametrize("engine,symbols", list(_engines()))
def test_export_import_round_trip(engine, symbols):
    rng = random.Random(5)
    for steps in range(0, 3 * engine.m + 3):
        state = engine.export_state()
        twin = type(engine).import_state(state, **engine.program)
        assert twin.export_state() == state
        assert twin.current() == engine.current()
        probe = [rng.choice(symbols) for _ in range(engine.m + 2)]
        assert twin.clone().feed(probe) == engine.clone().feed(probe)
        engine.push(rng.choice(symbols))


def test_import_rejects_foreign_state():
    ring = RingEngine(BINARY_HAMMING, "sum", [0, 1])
    with pytest.raises(StateFormatError):
        ConjunctionEngine.import_state(ring.export_state(), matrix=EXACT_PAIR)
    with pytest.raises(StateFormatError):
        RingEngine.import_state(ring.export_state()[:-1], **ring.program)


def test_ring_state_size_independent_of_content():
    rng = random.Random(1)
    sizes = set()
    for _ in range(20):
        engine = RingEngine(BINARY_HAMMING, "sum", [rng.randint(0, 1) for _ in range(64)])
        engine.feed([rng.randint(0, 1) for _ in range(128)])
        sizes.add(engine.state_bits)
    assert len(sizes) == 1


def test_clone_is_independent():
    engine = RingEngine(BINARY_HAMMING, "sum", [0, 1])
    engine.feed([0, 1])
    twin = engine.clone()
    twin.push(1)
    assert engine.window() == (0, 1) and twin.window() == (1, 1)


def test_integer_relation_engine_outputs():
    m = metric_matrix("l1", [0, 5])
    assert RingEngine(m, "sum", [0, 5]).feed([5, 0]) == [None, 10]
