"""Readers and writers for TREC run and qrels files.

Runs are reordered the way trec_eval does it: score descending, ties broken
by document id descending. The rank column is kept but never used.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

from .exceptions import (
    DuplicateDoc,
    DuplicateJudgment,
    EmptyCollection,
    MalformedLine,
    MixedRunTags,
    NonIntegerGrade,
    ParseError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankedDoc:
    doc_id: str
    score: float
    given_rank: int


@dataclass(frozen=True, eq=False)
class Qrels:
    judgments: MappingProxyType

    def __post_init__(self):
        object.__setattr__(self, "judgments", MappingProxyType(dict(self.judgments)))
        by_topic = {}
        for (topic, doc), grade in self.judgments.items():
            by_topic.setdefault(topic, {})[doc] = grade
        object.__setattr__(self, "_by_topic", by_topic)

    def __eq__(self, other):
        return isinstance(other, Qrels) and dict(self.judgments) == dict(other.judgments)

    __hash__ = None

    @property
    def topics(self) -> list:
        return sorted(self._by_topic)

    def for_topic(self, topic_id) -> dict:
        """doc id -> grade for one topic (empty if the topic is unjudged)."""
        return self._by_topic.get(topic_id, {})

    def relevant_topics(self) -> list:
        """Topics with at least one document graded above zero."""
        return sorted(t for t, docs in self._by_topic.items() if any(g > 0 for g in docs.values()))


@dataclass(frozen=True, eq=False)
class RunSet:
    run_tag: str
    rankings: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        frozen = {t: tuple(docs) for t, docs in dict(self.rankings).items()}
        object.__setattr__(self, "rankings", MappingProxyType(frozen))

    def __eq__(self, other):
        return (
            isinstance(other, RunSet)
            and self.run_tag == other.run_tag
            and dict(self.rankings) == dict(other.rankings)
        )

    __hash__ = None

    @property
    def topics(self) -> list:
        return sorted(self.rankings)

    def doc_ids(self, topic_id) -> list:
        return [d.doc_id for d in self.rankings.get(topic_id, ())]


def canonical_order(docs) -> list:
    return sorted(docs, key=lambda d: (d.score, d.doc_id), reverse=True)


def _lines(text):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield line_no, line


def parse_qrels(text: str) -> Qrels:
    """Parse 4-column qrels text: ``topic iteration doc grade``."""
    judgments = {}
    for line_no, line in _lines(text):
        fields = line.split()
        if len(fields) != 4:
            raise MalformedLine(line_no, line)
        topic, _, doc, grade = fields
        try:
            g = int(grade)
        except ValueError:
            raise NonIntegerGrade(line_no, grade) from None
        if (topic, doc) in judgments:
            raise DuplicateJudgment(topic, doc)
        judgments[(topic, doc)] = g
    return Qrels(judgments)


def parse_run(text: str) -> RunSet:
    """Parse 6-column run text: ``topic Q0 doc rank score tag``."""
    rankings = {}
    seen = {}
    tags = set()
    for line_no, line in _lines(text):
        fields = line.split()
        if len(fields) != 6:
            raise MalformedLine(line_no, line)
        topic, _, doc, rank, score, tag = fields
        try:
            entry = RankedDoc(doc, float(score), int(rank))
        except ValueError:
            raise MalformedLine(line_no, line) from None
        tags.add(tag)
        docs = seen.setdefault(topic, set())
        if doc in docs:
            raise DuplicateDoc(topic, doc)
        docs.add(doc)
        rankings.setdefault(topic, []).append(entry)
    if len(tags) > 1:
        raise MixedRunTags(tags)
    tag = tags.pop() if tags else ""
    return RunSet(tag, {t: canonical_order(d) for t, d in rankings.items()})


def format_run(run: RunSet) -> str:
    """Serialise a run in canonical order; ``parse_run`` round-trips it."""
    out = []
    for topic in run.topics:
        for d in run.rankings[topic]:
            out.append(f"{topic} Q0 {d.doc_id} {d.given_rank} {d.score!r} {run.run_tag}\n")
    return "".join(out)


def format_qrels(qrels: Qrels) -> str:
    return "".join(
        f"{t} 0 {d} {g}\n" for (t, d), g in sorted(qrels.judgments.items())
    )


def read_qrels(path) -> Qrels:
    path = Path(path)
    try:
        return parse_qrels(path.read_text(encoding="utf-8"))
    except ParseError as e:
        raise e.annotate(path)


def read_run(path) -> RunSet:
    path = Path(path)
    try:
        return parse_run(path.read_text(encoding="utf-8"))
    except ParseError as e:
        raise e.annotate(path)


@dataclass(frozen=True)
class Collection:
    runs: tuple
    qrels: Qrels
    unjudged_topics: tuple = ()

    def __iter__(self):
        return iter((list(self.runs), self.qrels))


def load_collection(run_dir, qrels_path) -> Collection:
    """Read every run file in ``run_dir`` plus the qrels.

    Files starting with ``.`` are skipped. A system is named by its run tag,
    or by its file name when the tag is empty. Topics that appear in runs but
    have no relevant judgments are reported in ``unjudged_topics``; they are
    dropped later by :func:`popeval.metrics.evaluate`.
    """
    run_dir = Path(run_dir)
    qrels = read_qrels(qrels_path)
    files = sorted(p for p in run_dir.iterdir() if p.is_file() and not p.name.startswith("."))
    if not files:
        raise EmptyCollection(f"no run files in {run_dir}")
    runs = []
    tags = {}
    for p in files:
        run = read_run(p)
        if not run.rankings:
            raise EmptyCollection(f"{p}: run retrieves nothing")
        if not run.run_tag:
            run = RunSet(p.name, run.rankings)
        if run.run_tag in tags:
            # distinct files reusing a tag are kept apart by file name
            run = RunSet(f"{run.run_tag}@{p.name}", run.rankings)
        tags[run.run_tag] = p
        runs.append(run)
    judged = set(qrels.relevant_topics())
    run_topics = set().union(*(r.rankings for r in runs))
    unjudged = tuple(sorted(run_topics - judged))
    if unjudged:
        log.warning(
            "%d topic(s) retrieved but without relevant judgments: %s",
            len(unjudged), ", ".join(unjudged[:10]) + (" ..." if len(unjudged) > 10 else ""),
        )
    return Collection(tuple(runs), qrels, unjudged)


@dataclass(frozen=True)
class CollectionSpec:
    name: str
    runs: Path
    qrels: Path


def read_manifest(path) -> dict:
    """Load a JSON experiment manifest, resolving paths against its directory.

    Expected keys: ``collections`` (list of ``{name, runs, qrels}``), and
    optionally ``metrics``, ``methods``, ``reference``, ``smoothing_ks``,
    ``thresholds``, ``digits``, ``seed``, ``trials``, ``s10_source``.
    """
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent
    cols = []
    for c in data.get("collections", []):
        cols.append(CollectionSpec(c["name"], base / c["runs"], base / c["qrels"]))
    data["collections"] = cols
    return data
