"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 the property grid
does not match the expected pattern.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from .exceptions import PopevalError, UnknownMethod, UnknownMetric, UnknownProperty
from .meta import rank_systems
from .methods import resolve_method
from .metrics import MetricId, evaluate
from .report import (
    Experiment,
    _write,
    config_hash,
    header_line,
    matrix_rows,
    ordering_rows,
    read_matrix_tsv,
    write_table1,
)
from .trec_io import load_collection

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MISMATCH = 0, 1, 2, 3
OUTPUT_ENV = "POPEVAL_OUTPUT_DIR"

log = logging.getLogger("popeval")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _out_dir(args) -> Path:
    return Path(args.out_dir or os.environ.get(OUTPUT_ENV) or "popeval-out")


def _emit(path, header, rows):
    if path in (None, "-"):
        sys.stdout.write(header)
        csv.writer(sys.stdout, delimiter="\t", lineterminator="\n").writerows(rows)
    else:
        _write(Path(path), header, rows)


def _require_file(path, what):
    if not Path(path).exists():
        raise FileNotFoundError(f"{what} not found: {path}")


def _matrix_from_args(args):
    if args.matrix:
        _require_file(args.matrix, "matrix file")
        return read_matrix_tsv(args.matrix)
    if not (args.runs and args.qrels and args.metric):
        raise UsageError("give --matrix, or all of --runs, --qrels and --metric")
    _require_file(args.runs, "run directory")
    _require_file(args.qrels, "qrels file")
    col = load_collection(args.runs, args.qrels)
    return evaluate(col.runs, col.qrels, args.metric)


def cmd_evaluate(args):
    _require_file(args.runs, "run directory")
    _require_file(args.qrels, "qrels file")
    metric = MetricId.parse(args.metric)
    col = load_collection(args.runs, args.qrels)
    matrix = evaluate(col.runs, col.qrels, metric)
    chash = config_hash({"runs": str(args.runs), "qrels": str(args.qrels), "metric": str(metric)})
    _emit(args.out, header_line(chash, metric=metric), matrix_rows(matrix))
    return EXIT_OK


def cmd_rank(args):
    method = resolve_method(args.method, args.tol)
    matrix = _matrix_from_args(args)
    ordering = rank_systems(matrix, method, args.tol)
    chash = config_hash({"method": args.method, "tol": args.tol,
                         "source": args.matrix or [str(args.runs), str(args.qrels), args.metric]})
    header = header_line(chash, method=method.name, tol=args.tol, tie_count=ordering.tie_count,
                         groups=len(ordering.groups))
    _emit(args.out, header, ordering_rows(ordering))
    return EXIT_OK


def cmd_table(args):
    exp = Experiment(args.manifest)
    if args.s10_source:
        exp.settings["s10_source"] = args.s10_source
    for f in exp.write_tables(_out_dir(args)):
        print(f)
    return EXIT_OK


def cmd_sweep(args):
    exp = Experiment(args.manifest)
    out = _out_dir(args)
    chosen = args.smoothing or args.threshold or args.quantize or args.rank_shift
    files = []
    if args.smoothing or not chosen:
        files += exp.write_smoothing(out)
    if args.threshold or args.quantize or not chosen:
        files += exp.write_discretization(
            out, threshold=args.threshold or not chosen, quantize=args.quantize or not chosen
        )
    if args.rank_shift or not chosen:
        files += exp.write_rank_shift(out)
    for f in files:
        print(f)
    return EXIT_OK


def cmd_check(args):
    path = Path(args.out) if args.out else _out_dir(args) / "table1.tsv"
    grid, ok = write_table1(path, args.trials, args.seed)
    for m, verdicts in grid.items():
        print(m.ljust(6), " ".join(("yes" if v.holds else "no").ljust(3) for v in verdicts))
    print(f"{'matches' if ok else 'DOES NOT MATCH'} the expected property grid; written to {path}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_run(args):
    exp = Experiment(args.manifest)
    files, ok = exp.run_all(_out_dir(args))
    for f in files:
        print(f)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_synth(args):
    from .synthetic import write_collection

    path = write_collection(args.out_dir, n_systems=args.systems, n_topics=args.topics, seed=args.seed)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="popeval", description="Population-level evaluation of retrieval runs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("evaluate", help="per-topic utilities as a (system, topic, value) TSV")
    e.add_argument("--runs", required=True, help="directory with one run file per system")
    e.add_argument("--qrels", required=True)
    e.add_argument("--metric", required=True, help="ap, ndcg, ndcg@k, p@k, rr, rp, success@k")
    e.add_argument("-o", "--out", help="output file (default stdout)")
    e.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("rank", help="order systems under one method")
    r.add_argument("--matrix", help="TSV written by `evaluate`")
    r.add_argument("--runs")
    r.add_argument("--qrels")
    r.add_argument("--metric")
    r.add_argument("--method", required=True, help="e.g. lmin, avg, gavg, slmin:k=5, gain:alpha=1")
    r.add_argument("--tol", type=float, default=0.0, help="comparator tolerance (default exact)")
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_rank)

    t = sub.add_parser("table", help="correlation tables from a manifest")
    t.add_argument("--manifest", required=True)
    t.add_argument("--out-dir")
    t.add_argument("--s10-source", choices=("metric", "p@10"))
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("sweep", help="smoothing / discretization curves and rank shifts")
    s.add_argument("--manifest", required=True)
    s.add_argument("--out-dir")
    s.add_argument("--smoothing", action="store_true")
    s.add_argument("--threshold", action="store_true")
    s.add_argument("--quantize", action="store_true")
    s.add_argument("--rank-shift", action="store_true")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("check-properties", help="randomized Pareto/AU/DP property grid")
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--trials", type=int, default=10_000)
    c.add_argument("--out-dir")
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("run", help="every table and curve for a manifest")
    a.add_argument("--manifest", required=True)
    a.add_argument("--out-dir")
    a.set_defaults(func=cmd_run)

    g = sub.add_parser("synth", help="write a seeded synthetic collection")
    g.add_argument("--out-dir", required=True)
    g.add_argument("--systems", type=int, default=20)
    g.add_argument("--topics", type=int, default=50)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"popeval: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PopevalError as e:
        if isinstance(e, (UnknownMethod, UnknownMetric, UnknownProperty)):
            print(f"popeval: usage error: {e}", file=sys.stderr)
            return EXIT_USAGE
        print(f"popeval: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError) as e:
        print(f"popeval: data error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
