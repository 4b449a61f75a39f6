"""One-way communication protocols built from streaming engines.

Alice runs an engine on her input, exports its state and sends the bits to
Bob.  Bob rebuilds the engine from the message and the public program (the
relation and operator, never the pattern), feeds his own symbols and
answers.  If a streaming engine answered correctly with small state, the
protocol would solve the communication problem with a message of that
size, so message lengths of exact engines exhibit the space they need.

Every ``run_*`` function takes a ``channel`` callable applied to the
message in transit (identity by default) so that tests can tamper with it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from scipy.stats import binomtest

from onlinepm.bits import BitReader, BitWriter, split_envelopes
from onlinepm.catalog import AB_HAMMING, EXACT_PAIR, PARITY_PROBE, WILDCARD, WILDCARD_SYMBOL
from onlinepm.classifier import OperatorKind
from onlinepm.engines import ConjunctionEngine, RingEngine, StreamEngine
from onlinepm.fingerprint import MERSENNE_61
from onlinepm.nonlocal_engines import EditEngine
from onlinepm.relation import Alphabet, HammingRelation

Channel = Callable[[str], str]

SEED_BITS = 64


def _identity(message: str) -> str:
    return message


@dataclass(frozen=True)
class OneWayProblem:
    name: str  # EQUALITY, INDEXING or DISJOINTNESS
    alice_input: object
    bob_input: object

    def truth(self):
        if self.name == "EQUALITY":
            return tuple(self.alice_input) == tuple(self.bob_input)
        if self.name == "INDEXING":
            return self.alice_input[self.bob_input]
        if self.name == "DISJOINTNESS":
            return not set(self.alice_input) & set(self.bob_input)
        raise ValueError(f"unknown problem {self.name!r}")


@dataclass
class ProtocolTranscript:
    reduction: str
    problem: OneWayProblem
    message_bits: int
    answer: object
    details: dict = field(default_factory=dict)

    @property
    def truth(self):
        return self.problem.truth()

    @property
    def correct(self) -> bool:
        return self.answer == self.truth


@dataclass(frozen=True)
class TrialStats:
    trials: int
    successes: int
    mean_message_bits: float
    ci_low: float
    ci_high: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "ci95": [self.ci_low, self.ci_high],
            "mean_message_bits": self.mean_message_bits,
        }


def proportion_ci(successes: int, trials: int) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(0.95, method="wilson")
    return float(ci.low), float(ci.high)


def summarize(transcripts: Iterable[ProtocolTranscript], success=lambda t: t.correct) -> TrialStats:
    transcripts = list(transcripts)
    k = sum(1 for t in transcripts if success(t))
    n = len(transcripts)
    low, high = proportion_ci(k, n)
    bits = sum(t.message_bits for t in transcripts) / n
    return TrialStats(n, k, bits, low, high)


def _restore(cls, message: str, program: dict) -> StreamEngine:
    return cls.import_state(message, **program)


# -- indexing through a changing output --------------------------------


def _indexing_by_difference(reduction, engine: StreamEngine, X: Sequence, n: int, a, b, channel) -> ProtocolTranscript:
    problem = OneWayProblem("INDEXING", tuple(X), n)
    # Alice
    for s in X:
        engine.advance(s)
    message = engine.export_state()
    cls, program = type(engine), engine.program
    del engine
    # Bob
    received = channel(message)
    bob = _restore(cls, received, program)
    for _ in range(n):
        bob.advance(a)
    d = bob.current()
    d_next = bob.push(a)
    answer = a if d == d_next else b
    return ProtocolTranscript(reduction, problem, len(message), answer, {"d": d, "d_next": d_next})


def run_indexing_via_sum(
    X: Sequence,
    n: int,
    relation=AB_HAMMING,
    x="a",
    a="a",
    b="b",
    factory: Optional[Callable[[Sequence], StreamEngine]] = None,
    channel: Channel = _identity,
) -> ProtocolTranscript:
    """Recover X[n] from a summing engine run on the pattern x^m.

    Needs ``delta(x, a) != delta(x, b)``.  After Bob appends n copies of a,
    the pattern's first position is aligned with X[n]; one more a changes
    the output by delta(x, X[n]) - delta(x, a).
    """
    if relation.delta(x, a) == relation.delta(x, b):
        raise ValueError("the probe symbol must score a and b differently")
    pattern = [x] * len(X)
    engine = factory(pattern) if factory else RingEngine(relation, OperatorKind.SUM, pattern)
    return _indexing_by_difference("indexing-via-sum", engine, X, n, a, b, channel)


def run_parity_indexing(X: Sequence, n: int, op: OperatorKind | str = OperatorKind.EQ, channel: Channel = _identity) -> ProtocolTranscript:
    """Same reduction with the parity folds EQ or NEQ over delta(x,a)=0, delta(x,b)=1."""
    op = OperatorKind.parse(op)
    if op not in (OperatorKind.EQ, OperatorKind.NEQ):
        raise ValueError("parity indexing needs EQ or NEQ")
    engine = RingEngine(PARITY_PROBE, op, ["x"] * len(X))
    return _indexing_by_difference(f"parity-indexing-{op.value}", engine, X, n, "a", "b", channel)


def run_indexing_via_wildcard(X: Sequence, n: int, channel: Channel = _identity) -> ProtocolTranscript:
    """The pattern is X over {*, x}; Bob streams a^n b a^(m-n-1) and reads the AND."""
    m = len(X)
    problem = OneWayProblem("INDEXING", tuple(X), n)
    engine = RingEngine(WILDCARD, OperatorKind.AND, X)
    message = engine.export_state()
    program = engine.program
    del engine
    bob = _restore(RingEngine, channel(message), program)
    out = None
    for i in range(m):
        out = bob.push("b" if i == n else "a")
    answer = WILDCARD_SYMBOL if out == 1 else "x"
    return ProtocolTranscript("indexing-via-wildcard", problem, len(message), answer, {"output": out})


def run_indexing_via_edit(X: Sequence[int], n: int, channel: Channel = _identity) -> ProtocolTranscript:
    """Pattern X over {0,1}: d after m zeros counts the ones, d' after the unit vector e_n drops iff X[n] = 1."""
    m = len(X)
    problem = OneWayProblem("INDEXING", tuple(X), n)
    engine = EditEngine((0, 1), X)
    message = engine.export_state()
    program = engine.program
    del engine
    bob = _restore(EditEngine, channel(message), program)
    d = bob.feed([0] * m)[-1]
    d_unit = bob.feed([1 if i == n else 0 for i in range(m)])[-1]
    answer = 1 if d_unit < d else 0
    return ProtocolTranscript("indexing-via-edit", problem, len(message), answer, {"d": d, "d_unit": d_unit})


# -- equality ----------------------------------------------------------


def run_equality(
    X: Sequence[int],
    Y: Sequence[int],
    engine: str = "sublinear",
    seed=None,
    repetitions: int = 1,
    channel: Channel = _identity,
) -> ProtocolTranscript:
    """X becomes a pattern over {x, y}, Y a text over {a, b}; the final AND output says X == Y.

    With the randomized engine, ``repetitions`` independent states are sent
    and Bob takes the majority.
    """
    if len(X) != len(Y):
        raise ValueError("X and Y must have the same length")
    problem = OneWayProblem("EQUALITY", tuple(X), tuple(Y))
    pattern = ["y" if bit else "x" for bit in X]
    rng = random.Random(seed)
    if engine == "sublinear":
        engines = [ConjunctionEngine(EXACT_PAIR, pattern, seed=rng.getrandbits(64)) for _ in range(repetitions)]
    elif engine == "baseline":
        engines = [RingEngine(EXACT_PAIR, OperatorKind.AND, pattern) for _ in range(repetitions)]
    else:
        raise ValueError(f"unknown engine choice {engine!r}")
    cls, program = type(engines[0]), engines[0].program
    message = "".join(e.export_state() for e in engines)
    del engines
    text = ["b" if bit else "a" for bit in Y]
    votes = []
    for part in split_envelopes(channel(message)):
        bob = _restore(cls, part, program)
        votes.append(bob.feed(text)[-1])
    answer = 2 * sum(votes) > len(votes)
    return ProtocolTranscript("equality", problem, len(message), answer, {"votes": votes})


# -- disjointness ------------------------------------------------------


@dataclass(frozen=True)
class HashSpec:
    """h(x) = ((a*x + b) mod p) mod range, with a != 0."""

    p: int
    a: int
    b: int
    range: int

    def __call__(self, x: int) -> int:
        return ((self.a * x + self.b) % self.p) % self.range

    @classmethod
    def from_seed(cls, seed: int, range_: int, universe: int, p: int = MERSENNE_61) -> "HashSpec":
        if universe >= p:
            raise ValueError("universe must be smaller than the prime")
        rng = random.Random(seed)
        return cls(p, rng.randrange(1, p), rng.randrange(0, p), range_)


PAD_ALICE = "$"
PAD_BOB = "$'"


def _hashed_string(elements: Sequence[int], h: HashSpec, length: int, pad) -> list:
    s = [pad] * length
    for x in elements:
        s[h(x)] = x  # later writes overwrite earlier ones
    return s


def disjointness_relation(universe: int) -> HammingRelation:
    return HammingRelation(Alphabet((PAD_ALICE, PAD_BOB) + tuple(range(universe))))


def run_disjointness(
    A: Sequence[int],
    B: Sequence[int],
    c: int,
    seed: int,
    universe: Optional[int] = None,
    relation: Optional[HammingRelation] = None,
    channel: Channel = _identity,
) -> ProtocolTranscript:
    """Hash both sets into strings of length c*m and compare them with a Hamming engine.

    Alice writes x at position h(x) of a string padded with '$', Bob does
    the same with B and pad "$'".  The Hamming distance is c*m whenever the
    sets are disjoint; Bob declares them disjoint iff it is.  The hash seed
    travels in the first 64 bits of the message.
    """
    m = len(A)
    if len(B) != m or m == 0:
        raise ValueError("A and B must be non-empty and of equal size")
    if len(set(A)) != m or len(set(B)) != m:
        raise ValueError("A and B must be sets")
    if universe is None:
        universe = len(relation.pattern_alphabet) - 2 if relation else max(max(A), max(B)) + 1
    length = c * m
    if c < 2 or universe < length:
        raise ValueError("need c > 1 and a universe of at least c*m elements")
    if not (0 <= min(min(A), min(B)) and max(max(A), max(B)) < universe):
        raise ValueError("elements must lie in [0, universe)")
    if seed >> SEED_BITS:
        raise ValueError("seed must fit in 64 bits")
    relation = relation or disjointness_relation(universe)
    problem = OneWayProblem("DISJOINTNESS", tuple(A), tuple(B))
    # Alice
    h = HashSpec.from_seed(seed, length, universe)
    engine = RingEngine(relation, OperatorKind.SUM, _hashed_string(A, h, length, PAD_ALICE))
    message = BitWriter().uint(seed, SEED_BITS).getvalue() + engine.export_state()
    del engine, h
    # Bob
    received = channel(message)
    r = BitReader(received[:SEED_BITS])
    h_bob = HashSpec.from_seed(r.uint(SEED_BITS), length, universe)
    bob = _restore(RingEngine, received[SEED_BITS:], {"relation": relation, "op": OperatorKind.SUM})
    out = bob.feed(_hashed_string(B, h_bob, length, PAD_BOB))[-1]
    return ProtocolTranscript("disjointness", problem, len(message), out == length, {"output": out, "length": length})


def random_set_pair(m: int, universe: int, overlap: int, rng: random.Random) -> tuple[list[int], list[int]]:
    """Two m-element subsets of [universe] sharing exactly ``overlap`` elements."""
    pool = rng.sample(range(universe), 2 * m - overlap)
    shared = pool[:overlap]
    A = shared + pool[overlap:m]
    B = shared + pool[m:]
    rng.shuffle(A)
    rng.shuffle(B)
    return A, B


def disjointness_trials(m: int, c: int, trials: int, seed: int, overlap: int = 0, universe: Optional[int] = None) -> TrialStats:
    """Repeat the protocol on fresh random sets and hash seeds; success = correct answer."""
    universe = universe or 4 * c * m
    relation = disjointness_relation(universe)
    rng = random.Random(seed)
    runs = []
    for _ in range(trials):
        A, B = random_set_pair(m, universe, overlap, rng)
        runs.append(run_disjointness(A, B, c, rng.getrandbits(SEED_BITS), universe, relation))
    return summarize(runs)


# -- registry used by the command line and the growth exhibits -----------


def _random_bits(m: int, rng: random.Random) -> list[int]:
    return [rng.getrandbits(1) for _ in range(m)]


def _trial_sum(m, rng, **_):
    return run_indexing_via_sum([rng.choice("ab") for _ in range(m)], rng.randrange(m))


def _trial_parity(m, rng, **_):
    return run_parity_indexing([rng.choice("ab") for _ in range(m)], rng.randrange(m))


def _trial_wildcard(m, rng, **_):
    return run_indexing_via_wildcard([rng.choice((WILDCARD_SYMBOL, "x")) for _ in range(m)], rng.randrange(m))


def _trial_edit(m, rng, **_):
    return run_indexing_via_edit(_random_bits(m, rng), rng.randrange(m))


def _trial_equality(m, rng, engine="sublinear", **_):
    X = _random_bits(m, rng)
    Y = list(X) if rng.random() < 0.5 else _random_bits(m, rng)
    return run_equality(X, Y, engine=engine, seed=rng.getrandbits(64))


def _trial_disjointness(m, rng, c=8, overlap=None, **_):
    universe = 4 * c * m
    if overlap is None:
        overlap = rng.choice((0, 1))
    A, B = random_set_pair(m, universe, overlap, rng)
    return run_disjointness(A, B, c, rng.getrandbits(SEED_BITS), universe)


REDUCTIONS = {
    "indexing-via-sum": _trial_sum,
    "parity-indexing": _trial_parity,
    "indexing-via-wildcard": _trial_wildcard,
    "indexing-via-edit": _trial_edit,
    "equality": _trial_equality,
    "disjointness": _trial_disjointness,
}


def run_trials(name: str, m: int, trials: int, seed: int, **options) -> list[ProtocolTranscript]:
    try:
        trial = REDUCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown reduction {name!r}; expected one of {sorted(REDUCTIONS)}") from None
    rng = random.Random(seed)
    return [trial(m, rng, **options) for _ in range(trials)]
