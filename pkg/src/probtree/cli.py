"""Command-line interface.

Subcommands: build, generate, draw, validate, oracle, max-record, info.
stdout carries the machine-readable result of each command; diagnostics go
to stderr, gated by -v/-vv.

Exit codes (stable): 0 success or oracle-contained, 1 oracle-negative,
2 input/parse error, 3 build error, 4 invalid argument, 5 validation
assertion failure.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import core, export, ingest, stats
from .sampler import RNG_ALGORITHM, Generator, InvalidCountError

EXIT_OK = 0
EXIT_NOT_CONTAINED = 1
EXIT_INPUT = 2
EXIT_BUILD = 3
EXIT_BAD_ARGUMENT = 4
EXIT_ASSERTION = 5

SLOPE_BAND = (-0.65, -0.35)


def _log(args: argparse.Namespace, level: int, message: str) -> None:
    if args.verbose >= level:
        print(message, file=sys.stderr)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _parse_bins(specs: list[str] | None) -> dict[str, int]:
    bins: dict[str, int] = {}
    for spec in specs or []:
        name, sep, count = spec.partition("=")
        if not sep or not name:
            raise ValueError(f"--bins expects COL=K, got {spec!r}")
        bins[name] = int(count)
    return bins


def _load_tree(path: str) -> export.TreeDocument:
    return export.load_document(Path(path).read_text(encoding="utf-8"))


def cmd_build(args: argparse.Namespace) -> int:
    try:
        opts = ingest.IngestOptions(
            missing_policy=args.missing.replace("-", "_"),
            bin_spec=_parse_bins(args.bins))
    except ValueError as exc:
        return _fail(EXIT_BAD_ARGUMENT, str(exc))
    try:
        table = ingest.read_csv(args.csv, opts)
    except (ingest.IngestError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    if len(table) == 0:
        return _fail(EXIT_INPUT, f"{args.csv}: no data rows")
    try:
        tree = core.build_tree(table)
    except core.ProbTreeError as exc:
        return _fail(EXIT_BUILD, str(exc))
    metadata = {"source_rows": len(table)}
    if not args.deterministic:
        metadata["created"] = datetime.now(timezone.utc).isoformat()
    Path(args.out).write_text(export.to_json(tree, metadata), encoding="utf-8")
    _log(args, 1,
         f"columns={len(tree.columns)} rows={len(table)} "
         f"depth={core.depth(tree)} node_count={core.node_count(tree)}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        doc = _load_tree(args.tree)
    except (core.ProbTreeError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    gen = Generator(doc.tree, args.seed)
    try:
        table = gen.get_records(args.n)
    except InvalidCountError as exc:
        return _fail(EXIT_BAD_ARGUMENT, str(exc))
    export.write_csv(table, args.out)
    if args.verify:
        bad = sum(1 for row in table.rows if not core.oracle(doc.tree, row))
        if bad:
            return _fail(EXIT_ASSERTION, f"{bad} generated records fail the oracle")
        _log(args, 1, f"verified {len(table)} records against the tree")
    _log(args, 1, f"wrote {len(table)} records (seed={args.seed}, rng={RNG_ALGORITHM})")
    return EXIT_OK


def cmd_draw(args: argparse.Namespace) -> int:
    try:
        doc = _load_tree(args.tree)
    except (core.ProbTreeError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    Path(args.out).write_text(export.to_dot(doc.tree, single_root=args.single_root),
                              encoding="utf-8")
    _log(args, 1, f"wrote DOT graph for {core.node_count(doc.tree)} vertices")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        doc = _load_tree(args.tree)
    except (core.ProbTreeError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok]
        report = stats.convergence_study(doc.tree, 0, sizes, args.trials, args.seed)
    except (stats.InvalidSizesError, stats.InvalidColumnError, ValueError) as exc:
        return _fail(EXIT_BAD_ARGUMENT, str(exc))

    for n, error in zip(report.sizes, report.errors):
        _log(args, 2, f"n={n} mean_error={error!r}")
    base = Path(args.out)
    json_path = base.with_suffix(".json")
    csv_path = base.with_suffix(".csv")
    json_path.write_text(report.to_json(), encoding="utf-8")
    csv_path.write_text(report.to_csv(), encoding="utf-8")
    _log(args, 1, f"wrote {json_path} and {csv_path}")

    if not args.no_figures:
        from . import figures  # deferred: matplotlib is heavy

        exact = stats.exact_column_marginal(doc.tree, 0)
        n_max = report.sizes[-1]
        counts = Generator(doc.tree, args.seed).sample_column_counts(n_max, 0)
        observed = stats.FrequencyTable(
            column=exact.column,
            freqs={v: c / n_max for v, c in counts.items()},
            total=n_max)
        conv_png = base.parent / (base.stem + "_convergence.png")
        marg_png = base.parent / (base.stem + "_marginals.png")
        figures.save_convergence_figure(report, conv_png)
        figures.save_marginal_figure(exact, observed, marg_png, n_max)
        _log(args, 1, f"wrote {conv_png} and {marg_png}")

    slope_text = "undefined" if report.fitted_slope is None else f"{report.fitted_slope:.6f}"
    print(f"fitted_slope={slope_text}")
    if args.assert_slope:
        if report.fitted_slope is None:
            return _fail(EXIT_ASSERTION,
                         "slope is undefined (degenerate tree or too few sizes)")
        if not SLOPE_BAND[0] <= report.fitted_slope <= SLOPE_BAND[1]:
            return _fail(EXIT_ASSERTION,
                         f"slope {report.fitted_slope:.4f} outside "
                         f"[{SLOPE_BAND[0]}, {SLOPE_BAND[1]}]")
    return EXIT_OK


def _column_kinds(tree: core.ProbabilityTree) -> list[type]:
    kinds = []
    node = tree.root
    while node is not None:
        kinds.append(type(node.data[0].value))
        node = node.data[0].next_node
    return kinds


def _parse_record(text: str, tree: core.ProbabilityTree) -> list[core.Value]:
    tokens = text.split(",") if text else []
    kinds = _column_kinds(tree)
    record: list[core.Value] = []
    for i, token in enumerate(tokens):
        if i < len(kinds) and kinds[i] is int:
            try:
                record.append(int(token))
                continue
            except ValueError:
                pass
        record.append(token)
    return record


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        doc = _load_tree(args.tree)
    except (core.ProbTreeError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    record = _parse_record(args.record, doc.tree)
    try:
        contained = core.oracle(doc.tree, record)
        prob = core.record_probability(doc.tree, record)
    except core.RecordTooLongError as exc:
        return _fail(EXIT_INPUT, str(exc))
    print(f"{'true' if contained else 'false'} p={prob!r}")
    return EXIT_OK if contained else EXIT_NOT_CONTAINED


def cmd_max_record(args: argparse.Namespace) -> int:
    try:
        doc = _load_tree(args.tree)
    except (core.ProbTreeError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    record, probs = core.get_max_record(doc.tree)
    print(",".join(str(v) for v in record))
    print(",".join(f"{p:.6f}" for p in probs))
    _log(args, 1, f"record_probability={core.record_probability(doc.tree, record)!r}")
    return EXIT_OK


def cmd_info(args: argparse.Namespace) -> int:
    try:
        doc = _load_tree(args.tree)
    except (core.ProbTreeError, FileNotFoundError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    tree = doc.tree
    print(f"columns={','.join(tree.columns)}")
    print(f"depth={core.depth(tree)}")
    print(f"node_count={core.node_count(tree)}")
    for key in sorted(doc.metadata):
        print(f"{key}={doc.metadata[key]}")
    if args.print_tree:
        print(core.print_tree(tree))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probtree",
        description="Probability trees over categorical tables: build, "
                    "generate, inspect, and validate.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="diagnostics on stderr (-v summary, -vv detail)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a tree from a CSV file")
    p.add_argument("--csv", required=True, help="input CSV path")
    p.add_argument("--out", required=True, help="output tree JSON path")
    p.add_argument("--bins", action="append", metavar="COL=K",
                   help="equal-width bin a numeric column into K codes (repeatable)")
    p.add_argument("--missing", choices=["error", "drop-row"], default="error",
                   help="policy for rows with empty cells")
    p.add_argument("--deterministic", action="store_true",
                   help="omit the build timestamp from metadata")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("generate", help="generate records from a tree")
    p.add_argument("--tree", required=True, help="tree JSON path")
    p.add_argument("-n", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=int, default=0, help="generator seed")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--verify", action="store_true",
                   help="check every generated record against the oracle")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("draw", help="emit the tree as a DOT graph")
    p.add_argument("--tree", required=True)
    p.add_argument("--out", required=True, help="output DOT path")
    p.add_argument("--single-root", action="store_true",
                   help="tie components together under a synthetic root vertex")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("validate", help="run the convergence study on column 0")
    p.add_argument("--tree", required=True)
    p.add_argument("--out", required=True,
                   help="report base path; writes BASE.json, BASE.csv and figures")
    p.add_argument("--sizes", default="100,10000,1000000",
                   help="comma-separated sample sizes (default 100,10000,1000000)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assert-slope", action="store_true",
                   help=f"exit {EXIT_ASSERTION} unless the fitted slope is in "
                        f"[{SLOPE_BAND[0]}, {SLOPE_BAND[1]}]")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG figure rendering")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="test whether a (prefix) record is in the tree")
    p.add_argument("--tree", required=True)
    p.add_argument("record", help="comma-separated values, e.g. 1,2,3")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("max-record", help="greedy most-probable record")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_max_record)

    p = sub.add_parser("info", help="summarize a tree file")
    p.add_argument("--tree", required=True)
    p.add_argument("--print-tree", action="store_true",
                   help="also print the pre-order text rendering")
    p.set_defaults(func=cmd_info)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
