"""Small named relations used throughout the tests, demos and protocols."""
from onlinepm.relation import DeltaMatrix, metric_matrix

WILDCARD_SYMBOL = "*"

# AND over this relation is text- or pattern-independent for every pattern.
DEGENERATE_AND = DeltaMatrix(
    ("x", "y", "z"),
    ("a", "b", "c"),
    [[0, 0, 0],
     [0, 1, 1],
     [0, 1, 1]],
)

# '*' matches both text symbols, 'x' only matches 'a'.
WILDCARD = DeltaMatrix(
    (WILDCARD_SYMBOL, "x"),
    ("a", "b"),
    [[1, 1],
     [1, 0]],
)

# Exact matching after renaming x<->a, y<->b.
EXACT_PAIR = DeltaMatrix(
    ("x", "y"),
    ("a", "b"),
    [[1, 0],
     [0, 1]],
)

# Character classes without a wildcard sub-relation: {v,y} accept {b,d,e},
# {x,z} accept {a,c}, w accepts nothing, f is accepted by nothing.
CHARACTER_CLASSES = DeltaMatrix(
    ("v", "w", "x", "y", "z"),
    ("a", "b", "c", "d", "e", "f"),
    [[0, 1, 0, 1, 1, 0],
     [0, 0, 0, 0, 0, 0],
     [1, 0, 1, 0, 0, 0],
     [0, 1, 0, 1, 1, 0],
     [1, 0, 1, 0, 0, 0]],
)

# |x - a| for pattern values {0,1} and text values {2,3}.
LINF_SMALL = metric_matrix("l1", [0, 1], [2, 3])

# 1 iff the LINF_SMALL score is below 3.
LINF_THRESHOLD = DeltaMatrix(
    LINF_SMALL.pattern_alphabet,
    LINF_SMALL.text_alphabet,
    (LINF_SMALL.entries < 3).astype(int),
)

BINARY_HAMMING = metric_matrix("hamming", [0, 1])

NAMED = {
    "degenerate-and": DEGENERATE_AND,
    "wildcard": WILDCARD,
    "exact-pair": EXACT_PAIR,
    "character-classes": CHARACTER_CLASSES,
    "linf-small": LINF_SMALL,
    "linf-threshold": LINF_THRESHOLD,
    "binary-hamming": BINARY_HAMMING,
}

# Hamming over {a, b}; the indexing reductions use the pattern a^m.
AB_HAMMING = DeltaMatrix(("a", "b"), ("a", "b"), [[0, 1], [1, 0]])

# One pattern symbol that scores 0 against 'a' and 1 against 'b'.
PARITY_PROBE = DeltaMatrix(("x",), ("a", "b"), [[0, 1]])

NAMED["ab-hamming"] = AB_HAMMING
NAMED["parity-probe"] = PARITY_PROBE
