"""Command line: classify, match, reduce, meter.

Exit codes: 0 success (or a valid relation), 1 input or format error,
2 a relation that is invalid for the operator.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Iterator, Optional, Sequence, TextIO

from onlinepm.bits import StateFormatError
from onlinepm.classifier import InvalidRelationError, OperatorKind, classify
from onlinepm.engines import ConjunctionEngine, SublinearUnavailableError, make_engine, metric_engine
from onlinepm.meter import ENGINES, fit_growth, measure, samples_csv
from onlinepm.nonlocal_engines import EditEngine, SwapEngine
from onlinepm.protocols import REDUCTIONS, proportion_ci, run_trials, summarize
from onlinepm.relation import RelationError, UnknownSymbolError, load_delta_matrix_file

DISTANCES = ("hamming", "l1", "l2", "linf", "correlation", "edit", "swap")
NUMERIC = ("hamming", "l1", "l2", "linf", "correlation")


class CliError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("lengths must be positive")
    return values


def _symbols(text: str, tokens: bool) -> list[str]:
    return text.split() if tokens else [ch for ch in text if not ch.isspace()]


def _stream(source: TextIO, tokens: bool) -> Iterator[str]:
    for line in source:
        yield from _symbols(line, tokens)


def _load_matrix(path: str):
    try:
        return load_delta_matrix_file(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


# -- classify ----------------------------------------------------------


def cmd_classify(args, out: TextIO) -> int:
    matrix = _load_matrix(args.matrix)
    op = OperatorKind.parse(args.op)
    report = classify(matrix, op, strict=False)
    out.write(report.to_json() + "\n")
    return 0 if report.space_class is not None else 2


# -- match -------------------------------------------------------------


def _build_match_engine(args, pattern: list[str]):
    if (args.matrix is None) == (args.distance is None):
        raise CliError("give exactly one of --matrix or --distance")
    if args.matrix is not None:
        if args.op is None:
            raise CliError("--matrix needs --op")
        matrix = _load_matrix(args.matrix)
        engine = make_engine(matrix, args.op, pattern, engine=args.engine, seed=args.seed)
        return engine, str
    kind = args.distance
    extra = _symbols(args.alphabet or "", args.tokens)
    if kind in NUMERIC:
        try:
            values = [int(s) for s in pattern]
            extra_values = [int(s) for s in extra]
        except ValueError:
            raise CliError(f"{kind} needs non-negative integer symbols") from None
        if args.engine == "sublinear":
            raise SublinearUnavailableError(f"{kind} needs linear space; no small-space engine exists")
        return metric_engine(kind, values, values + extra_values), int
    if args.engine == "sublinear":
        raise SublinearUnavailableError(f"{kind} needs linear space; no small-space engine exists")
    alphabet = tuple(dict.fromkeys(pattern + extra))
    cls = EditEngine if kind == "edit" else SwapEngine
    return cls(alphabet, pattern), str


def cmd_match(args, out: TextIO) -> int:
    if args.pattern is not None:
        pattern_text = args.pattern
    elif args.pattern_file is not None:
        pattern_text = Path(args.pattern_file).read_text()
    else:
        raise CliError("give --pattern or --pattern-file")
    pattern = _symbols(pattern_text, args.tokens)
    if not pattern:
        raise CliError("pattern is empty")
    engine, convert = _build_match_engine(args, pattern)
    if isinstance(engine, ConjunctionEngine) and args.seed is None:
        raise CliError("the fingerprint engine is randomized; pass --seed")
    source = sys.stdin if args.stream == "-" else open(args.stream)
    try:
        for i, symbol in enumerate(_stream(source, args.tokens)):
            try:
                value = engine.push(convert(symbol))
            except (UnknownSymbolError, ValueError):
                raise CliError(f"stream symbol {symbol!r} at index {i} is not in the text alphabet") from None
            if value is not None:
                out.write(f"{i}\t{value}\n")
                out.flush()
    finally:
        if source is not sys.stdin:
            source.close()
    return 0


# -- reduce ------------------------------------------------------------


def cmd_reduce(args, out: TextIO) -> int:
    options = {}
    if args.name == "disjointness":
        options["c"] = args.c
        if args.overlap is not None:
            options["overlap"] = args.overlap
    if args.name == "equality":
        options["engine"] = args.engine
    results = []
    for m in args.m:
        runs = run_trials(args.name, m, args.trials, seed=args.seed * 1_000_003 + m, **options)
        entry = {"m": m, **summarize(runs).to_dict()}
        if args.name == "disjointness":
            intersecting = [t for t in runs if not t.truth]
            disjoint = [t for t in runs if t.truth]
            fooled = sum(1 for t in intersecting if t.answer)
            entry["intersecting_trials"] = len(intersecting)
            entry["false_disjoint_rate"] = fooled / len(intersecting) if intersecting else None
            entry["false_disjoint_ci95"] = list(proportion_ci(fooled, len(intersecting))) if intersecting else None
            entry["disjoint_detection_rate"] = (
                sum(1 for t in disjoint if t.answer) / len(disjoint) if disjoint else None
            )
        results.append(entry)
    report = {"reduction": args.name, "seed": args.seed, "trials": args.trials, "results": results}
    if args.name == "disjointness":
        report["c"] = args.c
    out.write(json.dumps(report, sort_keys=True) + "\n")
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["m", "message_bits", "success_rate"])
            for r in results:
                w.writerow([r["m"], r["mean_message_bits"], r["success_rate"]])
    return 0


# -- meter -------------------------------------------------------------


def cmd_meter(args, out: TextIO) -> int:
    samples = measure(args.engine, args.m, args.seed)
    out.write(samples_csv(samples))
    if args.fit:
        sys.stderr.write(json.dumps(fit_growth(samples).to_dict(), sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="onlinepm", description="Streaming pattern matching toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an operator over a relation file")
    p.add_argument("matrix", help="relation JSON file")
    p.add_argument("op", help="operator name (AND, OR, SUM, ...)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("match", help="stream a text and print one output per window")
    p.add_argument("--matrix", help="relation JSON file")
    p.add_argument("--op", help="operator for --matrix")
    p.add_argument("--distance", choices=DISTANCES, help="built-in distance instead of a relation file")
    p.add_argument("--pattern", help="pattern symbols")
    p.add_argument("--pattern-file", help="file holding the pattern")
    p.add_argument("--alphabet", help="extra text symbols for --distance engines")
    p.add_argument("--stream", default="-", help="text file, or '-' for standard input")
    p.add_argument("--tokens", action="store_true", help="symbols are whitespace-separated tokens")
    p.add_argument("--engine", choices=("auto", "baseline", "sublinear"), default="auto")
    p.add_argument("--seed", type=int, help="seed for the randomized engine")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("reduce", help="run a communication reduction many times")
    p.add_argument("--name", required=True, choices=sorted(REDUCTIONS))
    p.add_argument("--m", required=True, type=_int_list, help="comma-separated input lengths")
    p.add_argument("--c", type=int, default=8, help="hash range factor for disjointness")
    p.add_argument("--overlap", type=int, choices=(0, 1), help="fix the intersection size for disjointness")
    p.add_argument("--engine", choices=("sublinear", "baseline"), default="sublinear", help="engine for equality")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", help="write (m, message_bits, success_rate) rows here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("meter", help="measure steady-state engine state size")
    p.add_argument("--engine", required=True, choices=sorted(ENGINES))
    p.add_argument("--m", required=True, type=_int_list, help="comma-separated pattern lengths")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit", action="store_true", help="print the log-log growth fit to standard error")
    p.set_defaults(func=cmd_meter)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    try:
        return args.func(args, out)
    except InvalidRelationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CliError, RelationError, SublinearUnavailableError, StateFormatError, UnknownSymbolError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
