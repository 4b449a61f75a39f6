"""Streaming engines for sliding-window distances.

Every engine consumes one text symbol at a time.  ``push`` returns the
distance of the pattern against the window ending at the new symbol, or
None while fewer than m symbols have arrived.  Outputs are keyed by the
window's end index; the window starting index is ``end - m + 1``.

All engines share one state contract: ``export_state()`` returns the
between-character state as a bit string, and
``Engine.import_state(bits, **engine.program)`` rebuilds an equivalent
engine.  ``program`` holds only what a party knows without the pattern
(the relation and the operator); anything derived from the pattern lives
in the exported state.
"""
from __future__ import annotations

import copy
from typing import Optional, Sequence

import numpy as np

from onlinepm.bits import BitReader, BitWriter, unwrap, wrap
from onlinepm.canonical import ALWAYS_ZERO, DEAD_T, build_canonical_map, canonicalize_pattern
from onlinepm.classifier import (
    OperatorKind,
    SpaceClass,
    TRIVIAL_OPERATORS,
    WildcardPresentError,
    classify,
)
from onlinepm.fingerprint import FingerprintMatcher
from onlinepm.relation import DeltaMatrix, RelationError, check_pattern, metric_matrix


class SublinearUnavailableError(ValueError):
    """A small-space engine was requested for a relation that needs linear space."""


class StreamEngine:
    m: int

    def advance(self, symbol) -> None:
        raise NotImplementedError

    def current(self) -> Optional[int]:
        raise NotImplementedError

    def push(self, symbol) -> Optional[int]:
        self.advance(symbol)
        return self.current()

    def feed(self, symbols) -> list:
        return [self.push(s) for s in symbols]

    def export_state(self) -> str:
        raise NotImplementedError

    @property
    def program(self) -> dict:
        raise NotImplementedError

    @property
    def state_bits(self) -> int:
        return len(self.export_state())

    def clone(self):
        # the relation and anything derived from it alone are immutable and shared
        shared = [v for k, v in vars(self).items() if k in self._shared]
        return copy.deepcopy(self, {id(v): v for v in shared})

    _shared = ("relation", "matrix", "op", "cmap", "pattern_alphabet", "text_alphabet", "alphabet", "_pattern")


def _write_indices(w: BitWriter, indices, width: int) -> None:
    w.bits("".join(format(int(i), f"0{width}b") for i in indices))


def _read_indices(r: BitReader, count: int, width: int) -> np.ndarray:
    chunk = r.bits(count * width)
    return np.array([int(chunk[k:k + width], 2) for k in range(0, len(chunk), width)], dtype=np.int64)


class WindowEngine(StreamEngine):
    """A copy of the pattern plus a circular buffer of the last m text symbols.

    Subclasses compute the output from the buffered window; the exported
    state is the same for all of them.
    """

    tag = "ring"

    def __init__(self, pattern_alphabet, text_alphabet, pattern: Sequence):
        pattern = tuple(pattern)
        if not pattern:
            raise ValueError("pattern must be non-empty")
        self.pattern_alphabet = pattern_alphabet
        self.text_alphabet = text_alphabet
        self.m = len(pattern)
        self._pattern = pattern_alphabet.encode(pattern)
        self._buf = np.zeros(self.m, dtype=np.int64)
        self._pos = 0
        self.fill = 0

    @classmethod
    def _alphabets(cls, **program):
        raise NotImplementedError

    @property
    def pattern(self) -> tuple:
        return tuple(self.pattern_alphabet[i] for i in self._pattern)

    def advance(self, symbol) -> None:
        self._buf[self._pos] = self.text_alphabet.index(symbol)
        self._pos = (self._pos + 1) % self.m
        if self.fill < self.m:
            self.fill += 1

    def window_indices(self) -> np.ndarray:
        """Buffered symbol indices, oldest first."""
        if self.fill < self.m:
            return self._buf[:self.fill].copy()
        return np.concatenate((self._buf[self._pos:], self._buf[:self._pos]))

    def window(self) -> tuple:
        return tuple(self.text_alphabet[i] for i in self.window_indices())

    def export_state(self) -> str:
        w = BitWriter().gamma(self.m)
        _write_indices(w, self._pattern, self.pattern_alphabet.width)
        w.fill(self.fill, self.m)
        _write_indices(w, self.window_indices(), self.text_alphabet.width)
        return wrap(self.tag, w.getvalue())

    @classmethod
    def import_state(cls, bits: str, **program):
        pa, ta = cls._alphabets(**program)
        r = unwrap(cls.tag, bits)
        m = r.gamma()
        pattern = _read_indices(r, m, pa.width)
        fill = r.fill(m)
        window = _read_indices(r, fill, ta.width)
        r.done()
        if m < 1 or (pattern >= len(pa)).any() or (window >= len(ta)).any():
            raise ValueError("state does not fit the relation")
        self = cls(pattern=[pa[i] for i in pattern], **program)
        for i in window:
            self.advance(ta[i])
        return self


class RingEngine(WindowEngine):
    """Baseline engine for any operator over any relation exposing ``scores``.

    Each output is recomputed from the whole window, O(m) per character.
    """

    def __init__(self, relation, op: OperatorKind | str, pattern: Sequence):
        op = OperatorKind.parse(op)
        if op.boolean and not relation.is_boolean:
            raise RelationError(f"operator {op.value} needs a Boolean relation")
        pattern = check_pattern(relation, pattern)
        super().__init__(relation.pattern_alphabet, relation.text_alphabet, pattern)
        self.relation = relation
        self.op = op

    @classmethod
    def _alphabets(cls, relation, op):
        return relation.pattern_alphabet, relation.text_alphabet

    @property
    def program(self) -> dict:
        return {"relation": self.relation, "op": self.op}

    def scores(self) -> np.ndarray:
        return self.relation.scores(self._pattern, self.window_indices())

    def current(self) -> Optional[int]:
        if self.fill < self.m:
            return None
        return self.op.fold(self.scores())


class TrivialEngine(StreamEngine):
    """Constant-space engine for TRUE, FALSE and RIGHT.

    RIGHT reports the score of the last position.  With m = 1 the fold is
    that single score for every operator, so the last symbols are kept then too.
    """

    tag = "trivial"

    def __init__(self, relation, op: OperatorKind | str, pattern: Sequence):
        op = OperatorKind.parse(op)
        if op not in TRIVIAL_OPERATORS:
            raise ValueError(f"{op.value} is not a constant-space operator")
        pattern = check_pattern(relation, pattern)
        self.relation = relation
        self.op = op
        self.m = len(pattern)
        self.fill = 0
        self._last_p = relation.pattern_alphabet.index(pattern[-1])
        self._last_t = 0

    @property
    def program(self) -> dict:
        return {"relation": self.relation, "op": self.op}

    def advance(self, symbol) -> None:
        self._last_t = self.relation.text_alphabet.index(symbol)
        self.fill = min(self.fill + 1, self.m)

    def current(self) -> Optional[int]:
        if self.fill < self.m:
            return None
        if self.op is OperatorKind.TRUE and self.m > 1:
            return 1
        if self.op is OperatorKind.FALSE and self.m > 1:
            return 0
        return int(self.relation.scores(np.array([self._last_p]), np.array([self._last_t]))[0])

    def export_state(self) -> str:
        w = BitWriter().gamma(self.m).fill(self.fill, self.m)
        if self.op is OperatorKind.RIGHT or self.m == 1:
            w.uint(self._last_p, self.relation.pattern_alphabet.width)
            w.uint(self._last_t, self.relation.text_alphabet.width)
        return wrap(self.tag, w.getvalue())

    @classmethod
    def import_state(cls, bits: str, relation, op) -> "TrivialEngine":
        op = OperatorKind.parse(op)
        r = unwrap(cls.tag, bits)
        m = r.gamma()
        fill = r.fill(m)
        last_p = last_t = 0
        if op is OperatorKind.RIGHT or m == 1:
            last_p = r.uint(relation.pattern_alphabet.width)
            last_t = r.uint(relation.text_alphabet.width)
        r.done()
        self = cls(relation, op, [relation.pattern_alphabet[last_p]] * m)
        self.fill, self._last_t = fill, last_t
        return self


class ConjunctionEngine(StreamEngine):
    """Polylogarithmic-space AND (or, by duality, OR) matcher for wildcard-free relations.

    Pattern and text symbols are replaced by their smallest equivalent
    symbols and fed as integer codes to a :class:`FingerprintMatcher`.  A
    text symbol that matches no pattern symbol forces the output to 0 for as
    long as it is inside the window; only its age is kept.  A pattern using
    a symbol that matches nothing gives 0 everywhere and keeps no matcher.
    """

    tag = "conjunction"

    def __init__(self, matrix: DeltaMatrix, pattern: Sequence, seed=None, op: OperatorKind | str = OperatorKind.AND):
        op = OperatorKind.parse(op)
        if op not in (OperatorKind.AND, OperatorKind.OR):
            raise ValueError("the small-space engine handles AND and OR only")
        pattern = check_pattern(matrix, pattern)
        self._setup(matrix, op, len(pattern))
        canonical = canonicalize_pattern(self.cmap, pattern)
        if canonical is ALWAYS_ZERO:
            self.matcher = None
        else:
            self.matcher = FingerprintMatcher(self.cmap.pattern_codes(canonical), seed)

    def _setup(self, matrix: DeltaMatrix, op: OperatorKind, m: int) -> None:
        work = matrix if op is OperatorKind.AND else matrix.negate()
        try:
            self.cmap = build_canonical_map(work)
        except WildcardPresentError:
            kind = "wildcard" if op is OperatorKind.AND else "negated wildcard"
            raise SublinearUnavailableError(f"relation contains the {kind} sub-relation; use the ring engine") from None
        self.matrix = matrix
        self.op = op
        self.m = m
        self.fill = 0
        self.dead_age: Optional[int] = None

    @property
    def program(self) -> dict:
        return {"matrix": self.matrix, "op": self.op}

    @property
    def always_zero(self) -> bool:
        return self.matcher is None

    def advance(self, symbol) -> None:
        if symbol not in self.cmap.text_map:
            self.matrix.text_alphabet.index(symbol)
        code = self.cmap.text_code[symbol]
        if self.dead_age is not None:
            self.dead_age += 1
            if self.dead_age >= self.m:
                self.dead_age = None
        if self.cmap.text_map[symbol] is DEAD_T:
            self.dead_age = 0
        if self.fill < self.m:
            self.fill += 1
        if self.matcher is not None:
            self.matcher.push_code(code)

    def current(self) -> Optional[int]:
        if self.fill < self.m:
            return None
        hit = self.matcher is not None and self.dead_age is None and self.matcher.matched
        return int(hit) if self.op is OperatorKind.AND else int(not hit)

    def export_state(self) -> str:
        w = BitWriter().flag(self.always_zero)
        if self.matcher is None:
            w.gamma(self.m)
        else:
            self.matcher.write_payload(w)
        w.fill(self.fill, self.m)
        w.gamma(0 if self.dead_age is None else self.dead_age + 1)
        return wrap(self.tag, w.getvalue())

    @classmethod
    def import_state(cls, bits: str, matrix: DeltaMatrix, op=OperatorKind.AND) -> "ConjunctionEngine":
        op = OperatorKind.parse(op)
        r = unwrap(cls.tag, bits)
        if r.flag():
            matcher, m = None, r.gamma()
        else:
            matcher = FingerprintMatcher.read_payload(r)
            m = matcher.m
        fill = r.fill(m)
        dead = r.gamma()
        r.done()
        self = cls.__new__(cls)
        self._setup(matrix, op, m)
        self.matcher = matcher
        self.fill = fill
        self.dead_age = None if dead == 0 else dead - 1
        return self


def make_engine(matrix: DeltaMatrix, op: OperatorKind | str, pattern: Sequence, engine: str = "auto", seed=None) -> StreamEngine:
    """Pick an engine for ``(op, matrix)``.

    ``baseline`` always gives the ring engine.  ``sublinear`` gives the
    constant- or polylog-space engine and refuses LINEAR-class relations.
    ``auto`` uses the small-space engine whenever the classification allows.
    """
    op = OperatorKind.parse(op)
    if engine not in ("auto", "baseline", "sublinear"):
        raise ValueError(f"unknown engine choice {engine!r}")
    if engine == "baseline":
        return RingEngine(matrix, op, pattern)
    report = classify(matrix, op, strict=False) if matrix.is_boolean or not op.boolean else None
    space = report.space_class if report else None
    if space is SpaceClass.CONSTANT:
        return TrivialEngine(matrix, op, pattern)
    if space is SpaceClass.LOGARITHMIC:
        return ConjunctionEngine(matrix, pattern, seed=seed, op=op)
    if engine == "sublinear":
        label = space.value if space else "invalid"
        raise SublinearUnavailableError(f"{op.value} over this relation is {label}; no small-space engine exists")
    return RingEngine(matrix, op, pattern)


def metric_engine(kind: str, pattern: Sequence[int], text_values: Sequence[int] | None = None) -> RingEngine:
    """Ring engine for a named distance over integer symbols.

    ``hamming``, ``l1``, ``l2`` and ``correlation`` sum a per-position score;
    ``linf`` takes the maximum of |x - a|.  ``text_values`` defaults to the
    values occurring in the pattern.
    """
    pattern = [int(v) for v in pattern]
    values = sorted(set(pattern) | set(text_values or pattern))
    if kind == "linf":
        return RingEngine(metric_matrix("l1", values), OperatorKind.MAX, pattern)
    score = {"hamming": "hamming", "l1": "l1", "l2": "l2", "correlation": "product"}[kind]
    return RingEngine(metric_matrix(score, values), OperatorKind.SUM, pattern)
