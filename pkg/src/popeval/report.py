"""TSV/CSV writers and the manifest-driven experiment runner.

Every file starts with one ``#`` comment line naming the tool version, a hash
of the configuration and the parameters that produced it. Output is a pure
function of the inputs: no timestamps, no absolute paths.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from pathlib import Path

from . import __version__
from .core import EvalMatrix
from .experiments import (
    correlation_table,
    default_windows,
    discretization_sweep,
    rank_shift_report,
    smoothing_sweep,
    trend_is_monotone,
)
from .meta import PROPERTIES, reproduce_table1, table1_matches
from .methods import TABLE_METHODS
from .metrics import TABLE_METRICS, MetricId, evaluate
from .trec_io import load_collection, read_manifest

log = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = [i / 20 for i in range(21)]
DEFAULT_DIGITS = [6, 5, 4, 3, 2, 1, 0]


def config_hash(config) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def header_line(chash: str, **params) -> str:
    items = " ".join(f"{k}={v}" for k, v in params.items())
    return f"# popeval {__version__} config={chash} {items}".rstrip() + "\n"


def fmt_tau(tau) -> str:
    return "-" if tau is None else f"{tau:.6f}"


def _write(path: Path, header: str, rows, delimiter="\t"):
    buf = io.StringIO()
    buf.write(header)
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerows(rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


# -- matrices and orderings ---------------------------------------------------

def matrix_rows(matrix: EvalMatrix):
    yield ("system", "topic", "value")
    pairs = sorted(
        ((s, t, v) for s, row in zip(matrix.systems, matrix.utilities.tolist())
         for t, v in zip(matrix.topics, row)),
        key=lambda x: (str(x[0]), str(x[1])),
    )
    for s, t, v in pairs:
        yield (s, t, repr(v))


def read_matrix_tsv(path) -> EvalMatrix:
    """Inverse of the ``evaluate`` output: (system, topic, value) rows."""
    cells = {}
    systems, topics = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            s, t, v = line.rstrip("\n").split("\t")
            if (s, t, v) == ("system", "topic", "value"):
                continue
            if s not in cells:
                cells[s] = {}
                systems.append(s)
            if t not in topics:
                topics.append(t)
            cells[s][t] = float(v)
    missing = [(s, t) for s in systems for t in topics if t not in cells[s]]
    if missing:
        raise ValueError(f"matrix file {path} is not rectangular; first gap at {missing[0]}")
    return EvalMatrix(systems, topics, [[cells[s][t] for t in topics] for s in systems])


def ordering_rows(ordering):
    yield ("group", "system", "value", "tied")
    for gi, group in enumerate(ordering.groups, start=1):
        for s in group:
            value = "" if ordering.scores is None else repr(ordering.scores[s])
            yield (gi, s, value, int(len(group) > 1))


# -- tables ---------------------------------------------------------------------

def correlation_rows(rows, first_column="collection"):
    methods = [c.method for c in rows[0].cells] if rows else list(TABLE_METHODS)
    head = [first_column, "nruns"]
    for m in methods:
        head += [m, f"{m}_ties"]
    yield head
    for r in rows:
        line = [r.collection if first_column == "collection" else r.metric, r.n_systems]
        for c in r.cells:
            line += [fmt_tau(c.tau), c.tie_count]
        yield line


def table1_rows(grid):
    yield ("method",) + PROPERTIES + ("witness",)
    for m, verdicts in grid.items():
        marks = tuple("yes" if v.holds else "no" for v in verdicts)
        witnesses = "; ".join(
            f"{v.property}:{list(v.witness[0])} vs {list(v.witness[1])}"
            for v in verdicts if v.witness is not None
        )
        yield (m,) + marks + (witnesses,)


def write_table1(path, trials, seed, chash=None):
    grid = reproduce_table1(trials, seed)
    ok = table1_matches(grid)
    chash = chash or config_hash({"trials": trials, "seed": seed})
    _write(Path(path), header_line(chash, trials=trials, seed=seed, matches_expected=ok), table1_rows(grid))
    return grid, ok


# -- manifest driver -----------------------------------------------------------

def _settings(cfg):
    return {
        "metrics": list(cfg.get("metrics") or TABLE_METRICS),
        "table_metric": cfg.get("table_metric", "ap"),
        "methods": list(cfg.get("methods") or TABLE_METHODS),
        "reference": cfg.get("reference", "lmin"),
        "s10_source": cfg.get("s10_source", "metric"),
        "seed": int(cfg.get("seed", 0)),
        "trials": int(cfg.get("trials", 10_000)),
        "tol": float(cfg.get("tol", 0.0)),
        "smoothing_ks": cfg.get("smoothing_ks"),
        "thresholds": list(cfg.get("thresholds") or DEFAULT_THRESHOLDS),
        "digits": list(cfg.get("digits") if cfg.get("digits") is not None else DEFAULT_DIGITS),
    }


class Experiment:
    """Loads each manifest collection once and caches evaluated matrices."""

    def __init__(self, manifest_path):
        self.manifest_path = Path(manifest_path)
        raw = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        self.chash = config_hash(raw)
        self.cfg = read_manifest(self.manifest_path)
        self.settings = _settings(self.cfg)
        self._collections = {}
        self._matrices = {}

    @property
    def collection_names(self):
        return [c.name for c in self.cfg["collections"]]

    def collection(self, name):
        if name not in self._collections:
            spec = next(c for c in self.cfg["collections"] if c.name == name)
            self._collections[name] = load_collection(spec.runs, spec.qrels)
        return self._collections[name]

    def matrix(self, name, metric) -> EvalMatrix:
        key = (name, str(MetricId.parse(metric)))
        if key not in self._matrices:
            col = self.collection(name)
            self._matrices[key] = evaluate(col.runs, col.qrels, metric)
        return self._matrices[key]

    def row(self, name, metric):
        st = self.settings
        success = self.matrix(name, "p@10") if st["s10_source"] == "p@10" else None
        return correlation_table(
            self.matrix(name, metric), st["methods"], st["reference"],
            collection=name, metric=str(MetricId.parse(metric)), success_matrix=success, tol=st["tol"],
        )

    def _header(self, **params):
        return header_line(self.chash, **params)

    # each writer returns the list of files it produced

    def write_tables(self, out_dir):
        out_dir, st = Path(out_dir), self.settings
        common = dict(reference=st["reference"], s10_source=st["s10_source"], tol=st["tol"])
        rows = [self.row(n, st["table_metric"]) for n in self.collection_names]
        files = [_write(out_dir / "table2.tsv",
                        self._header(table="correlation-by-collection", metric=st["table_metric"], **common),
                        correlation_rows(rows))]
        for n in self.collection_names:
            mrows = [self.row(n, m) for m in st["metrics"]]
            files.append(_write(out_dir / f"table3_{n}.tsv",
                                self._header(table="correlation-by-metric", collection=n, **common),
                                correlation_rows(mrows, first_column="metric")))
        return files

    def write_rank_shift(self, out_dir):
        out_dir, st = Path(out_dir), self.settings
        files = []
        for n in self.collection_names:
            report = rank_shift_report(self.matrix(n, st["table_metric"]))
            rows = [("system", "rank_avg", "rank_lmin", "shift", "class", "direction")]
            rows += [(r.system, r.rank_a, r.rank_b, r.shift, r.shift_class, r.direction) for r in report]
            files.append(_write(out_dir / f"fig1_rankshift_{n}.tsv",
                                self._header(collection=n, metric=st["table_metric"], methods="avg,lmin"), rows))
        return files

    def write_smoothing(self, out_dir):
        out_dir, st = Path(out_dir), self.settings
        files = []
        for n in self.collection_names:
            m = self.matrix(n, st["table_metric"])
            ks = st["smoothing_ks"] or default_windows(len(m.topics))
            pts = smoothing_sweep(m, ks)
            rows = [("k", "tau_avg", "tau_lmin")] + [(p.k, fmt_tau(p.tau_avg), fmt_tau(p.tau_lmin)) for p in pts]
            files.append(_write(out_dir / f"fig2_smoothing_{n}.csv",
                                self._header(collection=n, metric=st["table_metric"], n_topics=len(m.topics)),
                                rows, delimiter=","))
        return files

    def write_discretization(self, out_dir, threshold=True, quantize=True):
        out_dir, st = Path(out_dir), self.settings
        files = []
        for n in self.collection_names:
            m = self.matrix(n, st["table_metric"])
            sweeps = []
            if threshold:
                sweeps.append(("fig4a_threshold", "threshold", st["thresholds"], {}))
            if quantize:
                sweeps.append(("fig4b_quantize", "quantize", st["digits"],
                               {"rounding": "decimals-half-even"}))
            for stem, mode, grid, extra in sweeps:
                pts = discretization_sweep(m, grid, mode)
                rows = [(mode if mode == "threshold" else "digits", "tau_lmin_avg", "distinct_values")]
                rows += [(p.parameter, fmt_tau(p.tau), p.distinct_values) for p in pts]
                increasing = mode == "threshold"
                files.append(_write(
                    out_dir / f"{stem}_{n}.csv",
                    self._header(collection=n, metric=st["table_metric"],
                                 monotone=trend_is_monotone(pts, increasing), **extra),
                    rows, delimiter=","))
        return files

    def write_properties(self, out_dir):
        st = self.settings
        path = Path(out_dir) / "table1.tsv"
        _, ok = write_table1(path, st["trials"], st["seed"], self.chash)
        return [path], ok

    def run_all(self, out_dir):
        files = self.write_tables(out_dir)
        files += self.write_rank_shift(out_dir)
        files += self.write_smoothing(out_dir)
        files += self.write_discretization(out_dir)
        prop_files, ok = self.write_properties(out_dir)
        return files + prop_files, ok
