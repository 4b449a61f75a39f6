"""Sliding-window exact matching with O(log m) words of state.

Prefix doubling over polynomial fingerprints.  Level k keeps the start
positions whose text matched the pattern prefix of length ``lengths[k]``
(B, 2B, 4B, ..., and finally m, where the first B symbols are compared
literally) and that are waiting to be checked against
the next prefix length.  All starts pending at a level lie within a span
shorter than that level's prefix length, and occurrences of a string that
close together form an arithmetic progression whose step is the string's
period.  A level is therefore stored as (count, age of first start, text
fingerprint since the first start, step, fingerprint of the step-length
pattern prefix): five words, whatever the number of candidates.

Fingerprints are ``H(s) = sum s[k] * base^(len-1-k) mod p`` with
``p = 2^61 - 1`` and a seeded random base.  Two distinct strings of length L
collide with probability at most (L-1)/p, and a position triggers at most
log2(m)+1 comparisons of length at most m, so the per-position
false-positive probability is below m^2/p.  Equal strings always have equal
fingerprints, so while no collision occurs a true occurrence is never
missed.
"""
from __future__ import annotations

import random
from typing import Sequence

from onlinepm.bits import BitReader, BitWriter, unwrap, wrap
from onlinepm.relation import Alphabet

MERSENNE_61 = (1 << 61) - 1
FIELD_BITS = 61


class ProgressionError(RuntimeError):
    """A pending candidate broke the arithmetic-progression invariant (fingerprint collision)."""


def prefix_lengths(m: int, first: int = 1) -> list[int]:
    """Checked prefix lengths: first, 2*first, 4*first, ... below m, then m."""
    lengths = []
    L = first
    while L < m:
        lengths.append(L)
        L *= 2
    lengths.append(m)
    return lengths


def fingerprint(codes: Sequence[int], base: int, p: int = MERSENNE_61) -> int:
    h = 0
    for c in codes:
        h = (h * base + c) % p
    return h


class _Level:
    __slots__ = ("count", "age", "fp", "step", "step_fp")

    def __init__(self):
        self.count = 0
        self.age = 0  # current time minus the first pending start
        self.fp = 0  # fingerprint of the text from the first pending start to now
        self.step = 0
        self.step_fp = 0

    def clear(self):
        self.count = self.age = self.fp = self.step = self.step_fp = 0


class FingerprintMatcher:
    """Online exact matcher over non-negative integer codes.

    ``push_code`` returns True iff the last m codes equal the pattern (up to
    fingerprint collisions).  The first ``raw_prefix`` pattern codes and the
    most recent text codes are kept literally, so the fingerprint levels
    start at that length; ``raw_prefix=1`` gives pure prefix doubling
    1, 2, 4, ....  If an ``alphabet`` is given, ``push`` accepts symbols and
    encodes them as ``index + 1``; symbols outside it become 0.
    """

    p = MERSENNE_61

    def __init__(
        self,
        codes: Sequence[int],
        seed=None,
        *,
        base: int | None = None,
        raw_prefix: int = 8,
        alphabet: Alphabet | None = None,
    ):
        codes = [int(c) for c in codes]
        if not codes:
            raise ValueError("pattern must be non-empty")
        if min(codes) < 0:
            raise ValueError("codes must be non-negative")
        if raw_prefix < 1:
            raise ValueError("raw_prefix must be positive")
        if base is None:
            base = random.Random(seed).randrange(2, self.p)
        self.base = base
        self.alphabet = alphabet
        self.max_code = max(codes)
        values = [c + 1 for c in codes]
        self._setup(len(codes), min(raw_prefix, len(codes)))
        self.prefix = values[:self.raw]
        self.pattern_fp = [fingerprint(values[:L], base) for L in self.lengths]
        self._cache()

    def _setup(self, m: int, raw: int) -> None:
        self.m = m
        self.raw = raw
        self.lengths = prefix_lengths(m, raw)
        self.top = len(self.lengths) - 1  # index of the full-pattern length
        self.levels = [_Level() for _ in range(self.top)]
        self.recent: list[int] = []
        self.matched = False

    def _cache(self) -> None:
        # the raw-prefix fingerprint is recomputed, not stored
        self.pattern_fp[0] = fingerprint(self.prefix, self.base)

    @property
    def n_levels(self) -> int:
        return len(self.lengths)

    @property
    def code_width(self) -> int:
        return (self.max_code + 1).bit_length()

    def push(self, symbol) -> bool:
        if self.alphabet is None:
            return self.push_code(symbol)
        return self.push_code(self.alphabet.index(symbol) + 1 if symbol in self.alphabet else 0)

    push_char = push

    def push_code(self, c: int) -> bool:
        # codes above every pattern code can never match; they all become 0
        v = c + 1 if 0 <= c <= self.max_code else 0
        p, base = self.p, self.base
        levels, lengths = self.levels, self.lengths
        for lv in levels:
            if lv.count:
                lv.age += 1
                lv.fp = (lv.fp * base + v) % p
        recent = self.recent
        recent.append(v)
        if len(recent) > self.raw:
            del recent[0]
        matched = False
        # top-down, so a level is drained before the level below promotes into it
        for k in range(self.top - 1, -1, -1):
            lv = levels[k]
            if not lv.count or lv.age + 1 != lengths[k + 1]:
                continue
            head_age, head_fp = lv.age, lv.fp
            self._pop(lv)
            if head_fp == self.pattern_fp[k + 1]:
                if k + 1 == self.top:
                    matched = True
                else:
                    self._insert(levels[k + 1], head_age, head_fp)
        if recent == self.prefix:
            if self.top == 0:
                matched = True
            else:
                self._insert(levels[0], self.raw - 1, self.pattern_fp[0])
        self.matched = matched
        return matched

    def _pop(self, lv: _Level) -> None:
        if lv.count == 1:
            lv.clear()
            return
        # drop the first step characters from the head fingerprint
        span = lv.age + 1 - lv.step
        lv.fp = (lv.fp - lv.step_fp * pow(self.base, span, self.p)) % self.p
        lv.age -= lv.step
        lv.count -= 1
        if lv.count == 1:
            lv.step = lv.step_fp = 0

    def _insert(self, lv: _Level, age: int, fp: int) -> None:
        if lv.count == 0:
            lv.count, lv.age, lv.fp = 1, age, fp
        elif lv.count == 1:
            step = lv.age - age
            # H(T[s0..t]) = H(T[s0..s-1]) * base^(age+1) + H(T[s..t])
            lv.step = step
            lv.step_fp = (lv.fp - fp) * pow(self.base, -(age + 1), self.p) % self.p
            lv.count = 2
        else:
            if lv.age - lv.count * lv.step != age:
                raise ProgressionError(
                    f"candidate at age {age} breaks progression (head age {lv.age}, step {lv.step}, count {lv.count})"
                )
            lv.count += 1

    def occupied_levels(self) -> int:
        return sum(1 for lv in self.levels if lv.count)

    # -- serialization -------------------------------------------------

    def write_payload(self, w: BitWriter) -> None:
        width = self.code_width
        w.gamma(self.m).gamma(self.raw).gamma(self.max_code).uint(self.base, FIELD_BITS).flag(self.matched)
        for v in self.prefix:
            w.uint(v, width)
        w.fill(len(self.recent), self.raw)
        for v in self.recent:
            w.uint(v, width)
        for fp in self.pattern_fp[1:]:
            w.uint(fp, FIELD_BITS)
        for lv in self.levels:
            w.gamma(lv.count)
            if lv.count:
                w.gamma(lv.age).uint(lv.fp, FIELD_BITS)
            if lv.count >= 2:
                w.gamma(lv.step).uint(lv.step_fp, FIELD_BITS)

    @classmethod
    def read_payload(cls, r: BitReader, alphabet: Alphabet | None = None) -> "FingerprintMatcher":
        self = cls.__new__(cls)
        m, raw, max_code = r.gamma(), r.gamma(), r.gamma()
        if m < 1 or not 1 <= raw <= m:
            raise ValueError("inconsistent pattern length")
        self.base = r.uint(FIELD_BITS)
        self.alphabet = alphabet
        self.max_code = max_code
        self._setup(m, raw)
        self.matched = r.flag()
        width = self.code_width
        self.prefix = [r.uint(width) for _ in range(raw)]
        self.recent = [r.uint(width) for _ in range(r.fill(raw))]
        self.pattern_fp = [0] + [r.uint(FIELD_BITS) for _ in self.lengths[1:]]
        self._cache()
        for lv in self.levels:
            lv.count = r.gamma()
            if lv.count:
                lv.age, lv.fp = r.gamma(), r.uint(FIELD_BITS)
            if lv.count >= 2:
                lv.step, lv.step_fp = r.gamma(), r.uint(FIELD_BITS)
        return self

    def export_state(self) -> str:
        w = BitWriter()
        self.write_payload(w)
        return wrap("fingerprint", w.getvalue())

    @classmethod
    def import_state(cls, bits: str, alphabet: Alphabet | None = None) -> "FingerprintMatcher":
        r = unwrap("fingerprint", bits)
        self = cls.read_payload(r, alphabet)
        r.done()
        return self

    @property
    def state_bits(self) -> int:
        return len(self.export_state())


def preprocess_pattern(pattern: Sequence, seed, alphabet: Alphabet | None = None, raw_prefix: int = 8) -> FingerprintMatcher:
    """Fingerprint every power-of-two prefix of ``pattern`` and the full pattern.

    Without an explicit alphabet the distinct pattern symbols, sorted by their
    string form, are used.
    """
    pattern = list(pattern)
    if not pattern:
        raise ValueError("pattern must be non-empty")
    if alphabet is None:
        alphabet = Alphabet(tuple(sorted(set(pattern), key=str)))
    codes = [alphabet.index(s) + 1 for s in pattern]
    return FingerprintMatcher(codes, seed, alphabet=alphabet, raw_prefix=raw_prefix)
