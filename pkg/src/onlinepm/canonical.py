"""Rewrite a wildcard-free Boolean relation onto exact matching.

Symbols with identical rows (pattern side) or identical columns (text side)
are interchangeable, so each one is replaced by the smallest equivalent
symbol in enumeration order.  Symbols that match nothing are marked dead.
On the surviving symbols the relation is a permuted identity, so every
canonical pattern symbol has exactly one partner text symbol and matching
reduces to equality of integer codes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from onlinepm.classifier import WildcardPresentError, contains_wildcard_submatrix
from onlinepm.relation import DeltaMatrix


class _Sentinel:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return self.name


DEAD_P = _Sentinel("DEAD_P")
DEAD_T = _Sentinel("DEAD_T")
ALWAYS_ZERO = _Sentinel("ALWAYS_ZERO")


@dataclass(frozen=True)
class CanonicalMap:
    pattern_map: dict
    text_map: dict
    # canonical symbol -> code in 1..k; partners share a code, dead symbols get 0
    pattern_code: dict
    text_code: dict

    def pattern_codes(self, pattern: Sequence) -> list[int]:
        return [self.pattern_code[s] for s in pattern]

    @property
    def n_classes(self) -> int:
        return max(self.pattern_code.values(), default=0)


def _smallest_equivalent(vectors: dict, order: Sequence) -> dict:
    first: dict = {}
    out = {}
    for s in order:
        key = vectors[s]
        first.setdefault(key, s)
        out[s] = first[key]
    return out


def build_canonical_map(matrix: DeltaMatrix) -> CanonicalMap:
    found, _ = contains_wildcard_submatrix(matrix)
    if found:
        raise WildcardPresentError("relation contains the wildcard sub-relation")
    pa, ta = matrix.pattern_alphabet, matrix.text_alphabet
    rows = {s: matrix.row(s) for s in pa}
    cols = {s: matrix.column(s) for s in ta}
    pattern_map = _smallest_equivalent(rows, pa.symbols)
    text_map = _smallest_equivalent(cols, ta.symbols)
    for s in pa:
        if not any(rows[s]):
            pattern_map[s] = DEAD_P
    for s in ta:
        if not any(cols[s]):
            text_map[s] = DEAD_T

    pattern_code, text_code = {}, {}
    code = 0
    for s in pa:
        if pattern_map[s] == s:
            code += 1
            pattern_code[s] = code
            partner = next(t for t in ta if text_map[t] is not DEAD_T and text_map[t] == t and matrix.delta(s, t))
            text_code[partner] = code
    for s in pa:
        if pattern_map[s] is DEAD_P:
            pattern_code[s] = 0
        else:
            pattern_code[s] = pattern_code[pattern_map[s]]
    for t in ta:
        if text_map[t] is DEAD_T:
            text_code[t] = 0
        else:
            text_code[t] = text_code[text_map[t]]
    return CanonicalMap(pattern_map, text_map, pattern_code, text_code)


def canonicalize_pattern(cmap: CanonicalMap, pattern: Sequence):
    """Rewrite ``pattern`` onto canonical symbols, or ALWAYS_ZERO if it uses a dead symbol."""
    out = []
    for s in pattern:
        if s not in cmap.pattern_map:
            raise KeyError(s)
        c = cmap.pattern_map[s]
        if c is DEAD_P:
            return ALWAYS_ZERO
        out.append(c)
    return tuple(out)
