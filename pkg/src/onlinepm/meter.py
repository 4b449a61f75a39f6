"""Persistent-state measurement and growth fits.

Space is the length of an engine's exported state between characters,
after at least 2m random text symbols.  Only that persistent state counts;
the relation, the operator and per-character scratch work do not, while
anything retained from the pattern (a copy of it, fingerprint tables) does.
"""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from onlinepm.catalog import BINARY_HAMMING, EXACT_PAIR, LINF_SMALL
from onlinepm.classifier import OperatorKind
from onlinepm.engines import ConjunctionEngine, RingEngine, StreamEngine
from onlinepm.nonlocal_engines import EditEngine, SwapEngine


@dataclass(frozen=True)
class SpaceSample:
    engine_id: str
    m: int
    state_bits: int


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    r_squared: float
    n: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared, "n": self.n}


@dataclass(frozen=True)
class EngineSpec:
    """How to build an engine on a random pattern and which symbols to stream at it."""

    build: Callable[[list, int], StreamEngine]  # (pattern, seed) -> engine
    pattern_symbols: tuple
    text_symbols: tuple


ENGINES: dict[str, EngineSpec] = {
    "naive-hamming": EngineSpec(lambda p, s: RingEngine(BINARY_HAMMING, OperatorKind.SUM, p), (0, 1), (0, 1)),
    "naive-conjunction": EngineSpec(lambda p, s: RingEngine(EXACT_PAIR, OperatorKind.AND, p), ("x", "y"), ("a", "b")),
    "sublinear-conjunction": EngineSpec(lambda p, s: ConjunctionEngine(EXACT_PAIR, p, seed=s), ("x", "y"), ("a", "b")),
    "linf": EngineSpec(lambda p, s: RingEngine(LINF_SMALL, OperatorKind.MAX, p), (0, 1), (2, 3)),
    "edit": EngineSpec(lambda p, s: EditEngine((0, 1), p), (0, 1), (0, 1)),
    "swap": EngineSpec(lambda p, s: SwapEngine(("a", "b"), p), ("a", "b"), ("a", "b")),
}


def _resolve(engine) -> tuple[str, EngineSpec]:
    if isinstance(engine, EngineSpec):
        return "custom", engine
    try:
        return engine, ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; expected one of {sorted(ENGINES)}") from None


def measure_one(engine: StreamEngine, text: Iterable) -> int:
    """Stream ``text`` without computing outputs, then return the exported state length."""
    if not hasattr(engine, "export_state"):
        raise TypeError(f"{type(engine).__name__} has no state serialization")
    for s in text:
        engine.advance(s)
    return len(engine.export_state())


def measure(engine, m_values: Sequence[int], seed: int) -> list[SpaceSample]:
    """One steady-state sample per m: random pattern, then 2m random text symbols."""
    engine_id, spec = _resolve(engine)
    rng = random.Random(seed)
    samples = []
    for m in m_values:
        if m < 1:
            raise ValueError("m must be positive")
        pattern = [rng.choice(spec.pattern_symbols) for _ in range(m)]
        text = [rng.choice(spec.text_symbols) for _ in range(2 * m)]
        bits = measure_one(spec.build(pattern, rng.getrandbits(64)), text)
        samples.append(SpaceSample(engine_id, m, bits))
    return samples


def fit_growth(samples: Sequence[SpaceSample]) -> GrowthFit:
    """Least-squares line through (log m, log state_bits)."""
    ms = [s.m for s in samples]
    if len(samples) < 4:
        raise ValueError("need at least 4 samples")
    if len(set(ms)) != len(ms):
        raise ValueError("sample lengths m must be distinct")
    if any(s.state_bits < 1 or s.m < 1 for s in samples):
        raise ValueError("m and state_bits must be positive")
    x = np.log(np.array(ms, dtype=float))
    y = np.log(np.array([s.state_bits for s in samples], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if total == 0 else 1.0 - residual / total
    return GrowthFit(float(slope), float(intercept), r2, len(samples))


def samples_csv(samples: Iterable[SpaceSample]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["engine_id", "m", "state_bits"])
    for s in samples:
        w.writerow([s.engine_id, s.m, s.state_bits])
    return out.getvalue()
