"""Alphabets and score relations shared by every engine.

A relation maps a (pattern symbol, text symbol) pair to a non-negative
integer score.  Boolean relations only use the values 0 and 1.  Symbols are
opaque hashable tokens; the order of an alphabet is the enumeration order
used whenever a "smallest" symbol has to be chosen.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

Symbol = Hashable


class RelationError(ValueError):
    """Malformed alphabet or relation document."""


class UnknownSymbolError(KeyError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        index = {}
        for i, s in enumerate(symbols):
            if s in index:
                raise RelationError(f"duplicate symbol {s!r}")
            index[s] = i
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __getitem__(self, i: int):
        return self.symbols[i]

    def index(self, symbol) -> int:
        try:
            return self._index[symbol]
        except (KeyError, TypeError):
            raise UnknownSymbolError(symbol) from None

    def encode(self, symbols: Iterable) -> np.ndarray:
        return np.fromiter((self.index(s) for s in symbols), dtype=np.int64)

    @property
    def width(self) -> int:
        """Bits needed to store one symbol index (at least 1)."""
        return max(1, (len(self.symbols) - 1).bit_length())


class DeltaMatrix:
    """Explicit |pattern alphabet| x |text alphabet| table of scores.

    Instances are immutable; the entry array is read-only.
    """

    def __init__(self, pattern_alphabet, text_alphabet, entries):
        if not isinstance(pattern_alphabet, Alphabet):
            pattern_alphabet = Alphabet(tuple(pattern_alphabet))
        if not isinstance(text_alphabet, Alphabet):
            text_alphabet = Alphabet(tuple(text_alphabet))
        table = np.array(entries, dtype=np.int64).reshape(len(pattern_alphabet), len(text_alphabet))
        if (table < 0).any():
            raise RelationError("scores must be non-negative")
        table.setflags(write=False)
        self.pattern_alphabet = pattern_alphabet
        self.text_alphabet = text_alphabet
        self.entries = table

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def is_boolean(self) -> bool:
        return bool(np.isin(self.entries, (0, 1)).all())

    def delta(self, p, t) -> int:
        return int(self.entries[self.pattern_alphabet.index(p), self.text_alphabet.index(t)])

    def scores(self, p_idx: np.ndarray, t_idx: np.ndarray) -> np.ndarray:
        return self.entries[p_idx, t_idx]

    def row(self, p) -> tuple[int, ...]:
        return tuple(int(v) for v in self.entries[self.pattern_alphabet.index(p)])

    def column(self, t) -> tuple[int, ...]:
        return tuple(int(v) for v in self.entries[:, self.text_alphabet.index(t)])

    def negate(self) -> "DeltaMatrix":
        if not self.is_boolean:
            raise RelationError("only Boolean relations can be negated")
        return DeltaMatrix(self.pattern_alphabet, self.text_alphabet, 1 - self.entries)

    def submatrix(self, pattern_symbols: Sequence, text_symbols: Sequence) -> "DeltaMatrix":
        rows = [self.pattern_alphabet.index(s) for s in pattern_symbols]
        cols = [self.text_alphabet.index(s) for s in text_symbols]
        return DeltaMatrix(tuple(pattern_symbols), tuple(text_symbols), self.entries[np.ix_(rows, cols)])

    def to_document(self) -> dict[str, Any]:
        return {
            "pattern_alphabet": [str(s) for s in self.pattern_alphabet],
            "text_alphabet": [str(s) for s in self.text_alphabet],
            "entries": self.entries.tolist(),
        }

    def __eq__(self, other):
        if not isinstance(other, DeltaMatrix):
            return NotImplemented
        return (
            self.pattern_alphabet == other.pattern_alphabet
            and self.text_alphabet == other.text_alphabet
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.pattern_alphabet.symbols, self.text_alphabet.symbols, self.entries.tobytes()))

    def __repr__(self):
        rows = ", ".join(f"{p}:{''.join(map(str, r))}" for p, r in zip(self.pattern_alphabet, self.entries.tolist()))
        return f"DeltaMatrix({list(self.text_alphabet.symbols)}; {rows})"


class HammingRelation:
    """Implicit mismatch relation over one shared alphabet: score 1 iff symbols differ.

    Used where the alphabet is too large for an explicit table (for instance a
    universe of set elements plus two padding tokens).
    """

    is_boolean = True

    def __init__(self, alphabet: Alphabet | Sequence):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        self.pattern_alphabet = alphabet
        self.text_alphabet = alphabet

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.pattern_alphabet), len(self.text_alphabet)

    def delta(self, p, t) -> int:
        return int(self.pattern_alphabet.index(p) != self.text_alphabet.index(t))

    def scores(self, p_idx: np.ndarray, t_idx: np.ndarray) -> np.ndarray:
        return (p_idx != t_idx).astype(np.int64)


def delta(matrix: DeltaMatrix, p, t) -> int:
    return matrix.delta(p, t)


def _check_entry(value, r: int, c: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise RelationError(f"entry ({r},{c}) is not an integer: {value!r}")
    if value < 0:
        raise RelationError(f"entry ({r},{c}) is negative")
    return value


def load_delta_matrix(source: str | bytes | dict) -> DeltaMatrix:
    """Parse and validate a JSON relation document.

    The document is ``{"pattern_alphabet": [...], "text_alphabet": [...],
    "entries": [[...], ...]}`` with one row per pattern symbol.
    """
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise RelationError(f"not valid JSON: {exc}") from None
    else:
        doc = source
    if not isinstance(doc, dict):
        raise RelationError("document must be a JSON object")
    try:
        pattern_symbols = doc["pattern_alphabet"]
        text_symbols = doc["text_alphabet"]
        rows = doc["entries"]
    except KeyError as exc:
        raise RelationError(f"missing field {exc.args[0]!r}") from None
    for name, syms in (("pattern_alphabet", pattern_symbols), ("text_alphabet", text_symbols)):
        if not isinstance(syms, list) or not syms:
            raise RelationError(f"{name} must be a non-empty list")
        if not all(isinstance(s, str) for s in syms):
            raise RelationError(f"{name} symbols must be strings")
    if not isinstance(rows, list) or len(rows) != len(pattern_symbols):
        raise RelationError("entries must have one row per pattern symbol")
    table = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(text_symbols):
            raise RelationError(f"row {r} must have {len(text_symbols)} entries")
        table.append([_check_entry(v, r, c) for c, v in enumerate(row)])
    return DeltaMatrix(Alphabet(tuple(pattern_symbols)), Alphabet(tuple(text_symbols)), table)


def load_delta_matrix_file(path: str | Path) -> DeltaMatrix:
    return load_delta_matrix(Path(path).read_text())


def dumps_delta_matrix(matrix: DeltaMatrix) -> str:
    return json.dumps(matrix.to_document())


def check_pattern(relation, pattern: Sequence) -> tuple:
    pattern = tuple(pattern)
    if not pattern:
        raise ValueError("pattern must be non-empty")
    for s in pattern:
        relation.pattern_alphabet.index(s)
    return pattern


def boolean_matrix(rows: Sequence[Sequence[int]], pattern_symbols=None, text_symbols=None) -> DeltaMatrix:
    """Build a relation from a nested list, naming symbols p0.. / t0.. by default."""
    rows = [list(r) for r in rows]
    n_rows, n_cols = len(rows), len(rows[0]) if rows else 0
    pattern_symbols = pattern_symbols or [f"p{i}" for i in range(n_rows)]
    text_symbols = text_symbols or [f"t{j}" for j in range(n_cols)]
    return DeltaMatrix(tuple(pattern_symbols), tuple(text_symbols), rows)


def metric_matrix(kind: str, pattern_values: Iterable[int], text_values: Iterable[int] | None = None) -> DeltaMatrix:
    """Relation for a numeric per-position score over integer-valued symbols.

    ``kind`` is one of ``hamming`` ([x != a]), ``l1`` (|x - a|), ``l2``
    ((x - a)^2) or ``product`` (x * a, the cross-correlation score).  The
    symbols are the integer values themselves.
    """
    pv = sorted(set(int(v) for v in pattern_values))
    tv = pv if text_values is None else sorted(set(int(v) for v in text_values))
    if min(pv + tv) < 0:
        raise RelationError("symbol values must be non-negative")
    x = np.array(pv)[:, None]
    a = np.array(tv)[None, :]
    if kind == "hamming":
        table = (x != a).astype(np.int64)
    elif kind == "l1":
        table = np.abs(x - a)
    elif kind == "l2":
        table = (x - a) ** 2
    elif kind == "product":
        table = x * a
    else:
        raise ValueError(f"unknown metric {kind!r}")
    return DeltaMatrix(tuple(pv), tuple(tv), table)
