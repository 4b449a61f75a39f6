"""Online pattern matching over arbitrary score relations in small space."""
from onlinepm.classifier import (
    ClassificationReport,
    InvalidRelationError,
    OperatorKind,
    SpaceClass,
    classify,
    contains_wildcard_submatrix,
    reduce_matrix,
    validity,
)
from onlinepm.engines import (
    ConjunctionEngine,
    RingEngine,
    SublinearUnavailableError,
    TrivialEngine,
    make_engine,
    metric_engine,
)
from onlinepm.fingerprint import FingerprintMatcher, preprocess_pattern
from onlinepm.meter import SpaceSample, fit_growth, measure
from onlinepm.nonlocal_engines import EditEngine, SwapEngine
from onlinepm.relation import Alphabet, DeltaMatrix, HammingRelation, load_delta_matrix

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ClassificationReport",
    "ConjunctionEngine",
    "DeltaMatrix",
    "EditEngine",
    "FingerprintMatcher",
    "HammingRelation",
    "InvalidRelationError",
    "OperatorKind",
    "RingEngine",
    "SpaceClass",
    "SpaceSample",
    "SublinearUnavailableError",
    "SwapEngine",
    "TrivialEngine",
    "classify",
    "contains_wildcard_submatrix",
    "fit_growth",
    "load_delta_matrix",
    "make_engine",
    "measure",
    "metric_engine",
    "preprocess_pattern",
    "reduce_matrix",
    "validity",
]
