"""Command-line entry point: ``gccl form|extend|query|bench|verify``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from pathlib import Path

from gccl.approx import learn_from_attributes, learn_from_objects, learn_from_pair
from gccl.bench import (
    DEFAULT_BATCHES,
    emit_report,
    load_dataset,
    object_batch,
    run_bench,
    run_formation,
    standard_suite,
)
from gccl.context import parse_context
from gccl.errors import GcclError
from gccl.process import LearningState, extend
from gccl.scaling import MissingPolicy
from gccl.storage import load_state, save_state

EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 1, 2, 3

log = logging.getLogger("gccl")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _counts(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("counts must be non-negative")
    return values


def _add_data_options(p):
    p.add_argument("csv", help="comma-separated data file")
    p.add_argument("--schema", help="column schema file ('name : v1,...,vk : missing')")
    p.add_argument("--no-header", dest="header", action="store_false", help="CSV has no header row")
    p.add_argument("--missing", choices=[p.value for p in MissingPolicy], default="none",
                   help="missing-cell policy: no attribute (default) or an own attribute")
    p.add_argument("--seed", type=int, help="shuffle rows with this seed before taking prefixes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gccl", description="Concept formation, incremental learning and concept queries.")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for concept enumeration")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    form = sub.add_parser("form", help="build the initial concept space")
    form.add_argument("csv", nargs="?", help="comma-separated data file")
    form.add_argument("--context", help="Burmeister context file instead of CSV+schema")
    form.add_argument("--schema")
    form.add_argument("--no-header", dest="header", action="store_false")
    form.add_argument("--missing", choices=[p.value for p in MissingPolicy], default="none")
    form.add_argument("--seed", type=int)
    form.add_argument("--instances", type=int, help="use the first N rows (default: all)")
    form.add_argument("--state", required=True, help="where to write the learning state")

    ext = sub.add_parser("extend", help="apply object batches taken from the rows after those already learned")
    _add_data_options(ext)
    ext.add_argument("--state", required=True)
    ext.add_argument("--batches", type=_counts, default=[10], help="batch sizes, applied in order")
    ext.add_argument("--out", help="write the grown state here (default: overwrite --state)")

    query = sub.add_parser("query", help="learn exact or approximate concepts from a clue")
    query.add_argument("--state", required=True)
    query.add_argument("--objects", help="comma-separated object names")
    query.add_argument("--attributes", help="comma-separated attribute names")

    bench = sub.add_parser("bench", help="lattice-size and incremental-timing tables")
    bench.add_argument("csv", nargs="?", help="single dataset; omit to run the standard suite")
    bench.add_argument("--schema")
    bench.add_argument("--no-header", dest="header", action="store_false")
    bench.add_argument("--missing", choices=[p.value for p in MissingPolicy], default="none")
    bench.add_argument("--seed", type=int)
    bench.add_argument("--label")
    bench.add_argument("--instances", type=_counts, help="initial instance counts")
    bench.add_argument("--data-dir", default="data", help="directory holding voting/mushroom .csv and .schema")
    bench.add_argument("--batches", type=_counts, default=list(DEFAULT_BATCHES))
    bench.add_argument("--repeats", type=int, default=3, help="timing repetitions (median is reported)")
    bench.add_argument("--format", choices=["tsv", "markdown"], default="tsv")
    bench.add_argument("--output", help="write the report here instead of stdout")

    verify = sub.add_parser("verify", help="cross-check the engine against brute-force oracles")
    verify.add_argument("--seeds", type=int, default=200, help="random contexts per check")
    verify.add_argument("--state", help="also re-derive every concept of this saved state")
    return parser


def _dataset(args):
    if not args.schema:
        raise _UsageError("--schema is required with a CSV file")
    return load_dataset(args.csv, args.schema, label=getattr(args, "label", None), header=args.header,
                        policy=MissingPolicy(args.missing), seed=args.seed)


class _UsageError(Exception):
    pass


class _InvariantError(Exception):
    pass


def cmd_form(args) -> int:
    if args.context:
        context = parse_context(Path(args.context).read_bytes())
        if args.instances is not None:
            context = type(context)(context.objects[:args.instances], context.attributes,
                                    context.rows[:args.instances])
        state = LearningState.initial(context, threads=args.threads)
        seconds = None
    else:
        if not args.csv:
            raise _UsageError("give a CSV file or --context")
        dataset = _dataset(args)
        n = len(dataset.rows) if args.instances is None else args.instances
        if n > len(dataset.rows):
            raise _UsageError(f"--instances {n} exceeds the {len(dataset.rows)} rows available")
        state, row = run_formation(dataset, n, repeats=1, threads=args.threads)
        seconds = row.initial_seconds
    save_state(state, args.state)
    ctx = state.context
    timing = "" if seconds is None else f" in {seconds:.5f}s"
    print(f"{ctx.n_objects} objects, {ctx.n_attributes} attributes, {len(state.space)} concepts{timing}")
    return 0


def cmd_extend(args) -> int:
    state = load_state(args.state)
    dataset = _dataset(args)
    if list(dataset.attributes) != list(state.context.attributes):
        raise GcclError("scaled attributes of the CSV differ from the attributes of the saved state")
    for size in args.batches:
        start = state.context.n_objects
        if start + size > len(dataset.rows):
            print(f"batch {size}: --  (only {len(dataset.rows) - start} rows remain)")
            continue
        state = extend(state, object_batch(dataset, start, size))
        record = state.history[-1] if size else None
        seconds = record.seconds if record else 0.0
        print(f"batch {size}: {seconds:.5f}s, {state.context.n_objects} objects, {len(state.space)} concepts")
    save_state(state, args.out or args.state)
    return 0


def _names(text):
    return [v.strip() for v in text.split(",") if v.strip()] if text else []


def cmd_query(args) -> int:
    if args.objects is None and args.attributes is None:
        raise _UsageError("give --objects and/or --attributes")
    state = load_state(args.state)
    ctx = state.context
    try:
        objects = ctx.object_set(_names(args.objects)) if args.objects is not None else None
        attributes = ctx.attribute_set(_names(args.attributes)) if args.attributes is not None else None
    except KeyError as exc:
        raise _UsageError(exc.args[0]) from None
    if objects is not None and attributes is not None:
        result = learn_from_pair(state.space, objects, attributes)
    elif objects is not None:
        result = learn_from_objects(state.space, objects)
    else:
        result = learn_from_attributes(state.space, attributes)
    for tag, concept in result.concepts():
        extent = ",".join(ctx.object_names(concept.extent))
        intent = ",".join(ctx.attribute_names(concept.intent))
        print(f"{tag}\textent={{{extent}}}\tintent={{{intent}}}")
    if not result.is_exact and result.lower is None:
        print("lower\t(none)")
    return 0


def cmd_bench(args) -> int:
    if args.csv:
        dataset = _dataset(args)
        counts = args.instances or [len(dataset.rows)]
        suite = [(dataset, counts)]
    else:
        suite = standard_suite(args.data_dir)
        if args.instances:
            suite = [(d, tuple(args.instances)) for d, _ in suite]
    report = run_bench(suite, batch_sizes=args.batches, repeats=args.repeats, threads=args.threads)
    text = emit_report(report, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    from gccl import oracle
    from gccl.space import enumerate_concepts
    from gccl.process import IncrementBatch

    rng = random.Random(20240601)
    for k in range(args.seeds):
        ctx = oracle.random_context(rng, max_objects=12, max_attributes=10)
        space = enumerate_concepts(ctx)
        if oracle.as_index_pairs(space.pairs()) != oracle.all_concepts(ctx):
            raise _InvariantError(f"enumeration differs from the oracle on random context #{k}")
        state = LearningState.initial(type(ctx)([], [], []))
        for g, row in enumerate(ctx.rows):
            cells = [bool(row >> m & 1) for m in range(ctx.n_attributes)]
            if g == 0:
                cols = [(name, [bool(ctx.rows[0] >> m & 1)]) for m, name in enumerate(ctx.attributes)]
                state = extend(state, IncrementBatch(new_objects=((ctx.objects[0], cells),), new_attributes=cols))
            else:
                state = extend(state, IncrementBatch(new_objects=((ctx.objects[g], cells),)))
        if ctx.n_objects and state.space.pairs() != space.pairs():
            raise _InvariantError(f"incremental space differs from enumeration on random context #{k}")
    print(f"enumeration and incremental update agree with the oracle on {args.seeds} random contexts")
    if args.state:
        load_state(args.state, check=True)
        print(f"every stored concept of {args.state} re-derives from its context")
    return 0


COMMANDS = {"form": cmd_form, "extend": cmd_extend, "query": cmd_query, "bench": cmd_bench, "verify": cmd_verify}


def main(argv=None) -> int:
    level = os.environ.get("GCCL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"gccl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _InvariantError as exc:
        print(f"gccl: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except AssertionError as exc:
        print(f"gccl: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (GcclError, OSError, ValueError, KeyError) as exc:
        print(f"gccl: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
