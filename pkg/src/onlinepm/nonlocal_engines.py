"""Sliding-window edit distance and swap matching.

Neither distance decomposes over aligned positions, so both engines keep
the pattern and the last m symbols and recompute each output.
"""
from __future__ import annotations

from typing import Optional, Sequence

from onlinepm.engines import WindowEngine
from onlinepm.relation import Alphabet


def _as_alphabet(alphabet) -> Alphabet:
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Insert/delete/replace distance, two-row dynamic programme."""
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def swap_alignment(pattern: Sequence, window: Sequence) -> Optional[list[int]]:
    """Positions j of the disjoint adjacent swaps (j, j+1) turning ``pattern`` into ``window``.

    Returns None when no swap set works.  Greedy left to right is exact:
    when P[j] == W[j] and a swap at j is also possible, all four symbols
    are equal and the swap changes nothing.
    """
    m = len(pattern)
    if len(window) != m:
        return None
    swaps = []
    j = 0
    while j < m:
        if pattern[j] == window[j]:
            j += 1
        elif j + 1 < m and pattern[j] == window[j + 1] and pattern[j + 1] == window[j]:
            swaps.append(j)
            j += 2
        else:
            return None
    return swaps


SWAP_CODES = {"*": "00100", "x": "00010", "a": "00010", "b": "01000"}


def swap_encode(symbols: Sequence) -> str:
    """Replace each symbol of {*, x, a, b} by its 5-bit block."""
    try:
        return "".join(SWAP_CODES[s] for s in symbols)
    except KeyError as exc:
        raise ValueError(f"symbol {exc.args[0]!r} has no swap encoding") from None


class EditEngine(WindowEngine):
    """Edit distance between the pattern and the last m text symbols."""

    tag = "edit"

    def __init__(self, alphabet, pattern: Sequence):
        alphabet = _as_alphabet(alphabet)
        super().__init__(alphabet, alphabet, pattern)
        self.alphabet = alphabet

    @classmethod
    def _alphabets(cls, alphabet):
        alphabet = _as_alphabet(alphabet)
        return alphabet, alphabet

    @property
    def program(self) -> dict:
        return {"alphabet": self.alphabet}

    def current(self) -> Optional[int]:
        if self.fill < self.m:
            return None
        return levenshtein(self._pattern.tolist(), self.window_indices().tolist())


class SwapEngine(WindowEngine):
    """1 iff the pattern swap-matches the last m text symbols."""

    tag = "swap"

    def __init__(self, alphabet, pattern: Sequence):
        alphabet = _as_alphabet(alphabet)
        super().__init__(alphabet, alphabet, pattern)
        self.alphabet = alphabet

    @classmethod
    def _alphabets(cls, alphabet):
        alphabet = _as_alphabet(alphabet)
        return alphabet, alphabet

    @property
    def program(self) -> dict:
        return {"alphabet": self.alphabet}

    def alignment(self) -> Optional[list[int]]:
        if self.fill < self.m:
            return None
        return swap_alignment(self._pattern.tolist(), self.window_indices().tolist())

    def current(self) -> Optional[int]:
        if self.fill < self.m:
            return None
        return int(self.alignment() is not None)
