"""Validity and space classification of (aggregator, relation) pairs.

The sliding-window distance of a pattern P against a window W is the fold
of ``op`` over the per-position scores ``delta(P[j], W[j])``.  Depending on
the aggregator and on the shape of the relation, the persistent state an
online algorithm needs is constant, polylogarithmic or linear in m.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from onlinepm.relation import DeltaMatrix, RelationError


class OperatorKind(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    LEFT = "left"
    RIGHT = "right"
    AND = "and"
    OR = "or"
    EQ = "eq"
    NEQ = "neq"
    SUM = "sum"
    MAX = "max"

    @classmethod
    def parse(cls, name: "str | OperatorKind") -> "OperatorKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown operator {name!r}; expected one of {[o.value for o in cls]}") from None

    @property
    def boolean(self) -> bool:
        return self not in (OperatorKind.SUM, OperatorKind.MAX)

    def combine(self, a: int, b: int) -> int:
        """The binary operator itself; folding it left to right defines the distance."""
        return _COMBINE[self](a, b)

    def fold(self, scores: np.ndarray | Sequence[int]) -> int:
        """Closed form of the left fold of ``combine`` over ``scores``."""
        s = np.asarray(scores, dtype=np.int64)
        if self is OperatorKind.SUM:
            return int(s.sum())
        if self is OperatorKind.MAX:
            return int(s.max())
        if self is OperatorKind.AND:
            return int(s.all())
        if self is OperatorKind.OR:
            return int(s.any())
        if self is OperatorKind.EQ:
            # chained XNOR: 1 iff the number of zero scores is even
            return int((len(s) - int(s.sum())) % 2 == 0)
        if self is OperatorKind.NEQ:
            return int(int(s.sum()) % 2 == 1)
        if self is OperatorKind.LEFT:
            return int(s[0])
        if self is OperatorKind.RIGHT or len(s) == 1:
            # a single score is its own fold, whatever the operator
            return int(s[-1])
        return 1 if self is OperatorKind.TRUE else 0


_COMBINE = {
    OperatorKind.TRUE: lambda a, b: 1,
    OperatorKind.FALSE: lambda a, b: 0,
    OperatorKind.LEFT: lambda a, b: a,
    OperatorKind.RIGHT: lambda a, b: b,
    OperatorKind.AND: lambda a, b: a & b,
    OperatorKind.OR: lambda a, b: a | b,
    OperatorKind.EQ: lambda a, b: int(a == b),
    OperatorKind.NEQ: lambda a, b: int(a != b),
    OperatorKind.SUM: lambda a, b: a + b,
    OperatorKind.MAX: max,
}


def fold_left(op: OperatorKind, scores: Sequence[int]) -> int:
    return reduce(op.combine, scores)


class SpaceClass(enum.Enum):
    CONSTANT = "CONSTANT"
    LOGARITHMIC = "LOGARITHMIC"
    LINEAR = "LINEAR"


TRIVIAL_OPERATORS = (OperatorKind.TRUE, OperatorKind.FALSE, OperatorKind.RIGHT)


class InvalidRelationError(ValueError):
    """Every pattern makes the problem text- or pattern-independent."""


class WildcardPresentError(ValueError):
    """The relation contains the wildcard sub-relation, so it cannot be reduced to exact matching."""


@dataclass(frozen=True)
class Witness:
    rows: tuple  # (r1, r2): r1 is the all-ones row of the sub-relation
    columns: tuple  # (c1, c2): c2 is the column holding the single zero

    def to_dict(self) -> dict:
        return {"rows": [str(s) for s in self.rows], "columns": [str(s) for s in self.columns]}


@dataclass(frozen=True)
class ClassificationReport:
    operator: OperatorKind
    valid: bool
    contains_wildcard: Optional[bool]
    contains_negated_wildcard: Optional[bool]
    reduced_matrix: Optional[DeltaMatrix]
    witness: Optional[Witness]
    space_class: Optional[SpaceClass]
    trivial: bool = False

    def to_dict(self) -> dict:
        return {
            "operator": self.operator.value,
            "valid": self.valid,
            "contains_wildcard": self.contains_wildcard,
            "contains_negated_wildcard": self.contains_negated_wildcard,
            "reduced_matrix": None if self.reduced_matrix is None else self.reduced_matrix.to_document(),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "space_class": None if self.space_class is None else self.space_class.value,
            "trivial": self.trivial,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _require_boolean(matrix: DeltaMatrix) -> None:
    if not matrix.is_boolean:
        raise RelationError("operation needs a Boolean (0/1) relation")


def contains_wildcard_submatrix(matrix: DeltaMatrix) -> tuple[bool, Optional[Witness]]:
    """Search for rows r1 != r2 and columns c1 != c2 holding exactly three ones.

    The witness is ordered so that it reads ``[[1, 1], [1, 0]]``.
    """
    _require_boolean(matrix)
    m = matrix.entries.astype(bool)
    n_rows = m.shape[0]
    for i in range(n_rows):
        for j in range(i + 1, n_rows):
            both = m[i] & m[j]
            one = m[i] ^ m[j]
            if both.any() and one.any():
                c1 = int(np.argmax(both))
                c2 = int(np.argmax(one))
                r1, r2 = (i, j) if m[i, c2] else (j, i)
                pa, ta = matrix.pattern_alphabet, matrix.text_alphabet
                return True, Witness((pa[r1], pa[r2]), (ta[c1], ta[c2]))
    return False, None


def contains_negated_wildcard_submatrix(matrix: DeltaMatrix) -> tuple[bool, Optional[Witness]]:
    return contains_wildcard_submatrix(matrix.negate())


def _first_distinct(vectors: np.ndarray) -> list[int]:
    seen, keep = set(), []
    for i, v in enumerate(vectors):
        key = v.tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return keep


def is_permuted_identity(matrix: DeltaMatrix) -> bool:
    e = matrix.entries
    if e.shape[0] != e.shape[1]:
        return False
    return bool(np.isin(e, (0, 1)).all() and (e.sum(axis=0) == 1).all() and (e.sum(axis=1) == 1).all())


def reduce_matrix(matrix: DeltaMatrix) -> DeltaMatrix:
    """Drop duplicate rows/columns (keeping the earliest symbol), then all-zero rows/columns."""
    found, _ = contains_wildcard_submatrix(matrix)
    if found:
        raise WildcardPresentError("relation contains the wildcard sub-relation")
    e = matrix.entries
    rows = _first_distinct(e)
    cols = _first_distinct(e.T)
    sub = e[np.ix_(rows, cols)]
    rows = [r for r, keep in zip(rows, sub.any(axis=1)) if keep]
    cols = [c for c, keep in zip(cols, sub.any(axis=0)) if keep]
    reduced = matrix.submatrix([matrix.pattern_alphabet[r] for r in rows], [matrix.text_alphabet[c] for c in cols])
    assert is_permuted_identity(reduced), "reduced relation is not a permuted identity"
    return reduced


def validity(matrix: DeltaMatrix, op: OperatorKind | str) -> bool:
    """True iff some pattern is neither text-independent nor pattern-independent.

    Pattern independence means every symbol occurring in the pattern has the
    same row; text independence means the output is the same for every window.
    Each operator admits a closed-form test on the rows of the relation:

    * AND: two distinct rows, neither all-zero.  The output can then be 1
      (every row has a one) and 0 (a distinct non-zero row must hold a zero).
    * OR: the dual, two distinct rows neither all-one.
    * SUM, EQ, NEQ, LEFT, RIGHT: two distinct rows and some non-constant row.
      The output of these folds is constant iff every row used is constant.
    * MAX: distinct rows x, y with max(min x, min y) < max(max x, max y).
    * TRUE, FALSE: never valid.
    """
    op = OperatorKind.parse(op)
    if op.boolean:
        _require_boolean(matrix)
    e = matrix.entries
    distinct = e[_first_distinct(e)]
    if op in (OperatorKind.TRUE, OperatorKind.FALSE) or len(distinct) < 2:
        return False
    if op is OperatorKind.AND:
        return int(distinct.any(axis=1).sum()) >= 2
    if op is OperatorKind.OR:
        return int((distinct == 0).any(axis=1).sum()) >= 2
    if op is OperatorKind.MAX:
        lo, hi = distinct.min(axis=1), distinct.max(axis=1)
        k = len(distinct)
        return any(max(lo[i], lo[j]) < max(hi[i], hi[j]) for i in range(k) for j in range(i + 1, k))
    return bool((distinct.min(axis=1) != distinct.max(axis=1)).any())


def classify(matrix: DeltaMatrix, op: OperatorKind | str, strict: bool = True) -> ClassificationReport:
    """Assign the space class of the online problem for ``(op, matrix)``.

    TRUE, FALSE and RIGHT are always CONSTANT and flagged ``trivial``.  For an
    invalid pair any other operator raises :class:`InvalidRelationError` unless
    ``strict`` is false, in which case the report carries ``space_class=None``.
    """
    op = OperatorKind.parse(op)
    valid = validity(matrix, op)
    wild = neg = None
    witness = reduced = None
    if matrix.is_boolean:
        wild, wild_witness = contains_wildcard_submatrix(matrix)
        neg, neg_witness = contains_negated_wildcard_submatrix(matrix)
        if op is OperatorKind.AND:
            witness = wild_witness
            if not wild:
                reduced = reduce_matrix(matrix)
        elif op is OperatorKind.OR:
            witness = neg_witness
            if not neg:
                reduced = reduce_matrix(matrix.negate())

    def report(space_class, trivial=False):
        return ClassificationReport(op, valid, wild, neg, reduced, witness, space_class, trivial)

    if op in TRIVIAL_OPERATORS:
        return report(SpaceClass.CONSTANT, trivial=True)
    if not valid:
        if strict:
            raise InvalidRelationError(f"{op.value} over this relation is invalid")
        return report(None)
    if op is OperatorKind.AND:
        return report(SpaceClass.LINEAR if wild else SpaceClass.LOGARITHMIC)
    if op is OperatorKind.OR:
        return report(SpaceClass.LINEAR if neg else SpaceClass.LOGARITHMIC)
    return report(SpaceClass.LINEAR)
