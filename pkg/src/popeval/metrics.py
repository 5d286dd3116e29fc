"""Per-topic utility metrics, computed the way trec_eval computes them.

Binary relevance means grade > 0; unjudged documents are non-relevant. NDCG
uses the grade as gain (negative grades contribute nothing) and a
``1/log2(rank + 1)`` discount, with the ideal ranking built from every judged
document of the topic.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EvalMatrix
from .exceptions import NoJudgedTopics, UnknownMetric

log = logging.getLogger(__name__)

FAMILIES = ("AP", "NDCG", "P", "RR", "RPREC", "SUCCESS")
_CLI_NAMES = {"ap": "AP", "ndcg": "NDCG", "p": "P", "rr": "RR", "rp": "RPREC", "success": "SUCCESS"}

#: The metric set of the per-metric correlation table.
TABLE_METRICS = ("rp", "ap", "ndcg", "ndcg@100", "p@100", "ndcg@10", "p@10", "rr")


@dataclass(frozen=True)
class MetricId:
    family: str
    cutoff: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownMetric(f"unknown metric family {self.family!r}")
        if self.cutoff is not None and self.cutoff < 1:
            raise UnknownMetric(f"cutoff must be positive, got {self.cutoff}")
        if self.family in ("P", "SUCCESS") and self.cutoff is None:
            raise UnknownMetric(f"{self.family} needs a cutoff")
        if self.family in ("AP", "RR", "RPREC") and self.cutoff is not None:
            raise UnknownMetric(f"{self.family} takes no cutoff")

    @classmethod
    def parse(cls, text: str) -> "MetricId":
        m = re.fullmatch(r"([a-z]+)(?:@(\d+))?", text.strip().lower())
        if not m or m.group(1) not in _CLI_NAMES:
            raise UnknownMetric(f"unknown metric {text!r}")
        cutoff = int(m.group(2)) if m.group(2) else None
        return cls(_CLI_NAMES[m.group(1)], cutoff)

    def __str__(self):
        name = {v: k for k, v in _CLI_NAMES.items()}[self.family]
        return name if self.cutoff is None else f"{name}@{self.cutoff}"


def _as_metric(metric) -> MetricId:
    return metric if isinstance(metric, MetricId) else MetricId.parse(metric)


def average_precision(ranking, grades) -> float:
    num_rel = sum(1 for g in grades.values() if g > 0)
    if num_rel == 0:
        return 0.0
    hits = 0
    total = 0.0
    for i, doc in enumerate(ranking, start=1):
        if grades.get(doc, 0) > 0:
            hits += 1
            total += hits / i
    return total / num_rel


def precision_at(ranking, grades, k) -> float:
    return sum(1 for doc in ranking[:k] if grades.get(doc, 0) > 0) / k


def reciprocal_rank(ranking, grades) -> float:
    for i, doc in enumerate(ranking, start=1):
        if grades.get(doc, 0) > 0:
            return 1.0 / i
    return 0.0


def r_precision(ranking, grades) -> float:
    r = sum(1 for g in grades.values() if g > 0)
    if r == 0:
        return 0.0
    return sum(1 for doc in ranking[:r] if grades.get(doc, 0) > 0) / r


def success_at(ranking, grades, k) -> float:
    return 1.0 if any(grades.get(doc, 0) > 0 for doc in ranking[:k]) else 0.0


def _dcg(gains):
    # sequential accumulation, as trec_eval does
    total = 0.0
    for i, g in enumerate(gains, start=1):
        if g > 0:
            total += g / math.log2(i + 1)
    return total


def ndcg(ranking, grades, k=None) -> float:
    depth = len(ranking) if k is None else k
    ideal = sorted((g for g in grades.values() if g > 0), reverse=True)
    if k is not None:
        ideal = ideal[:k]
    idcg = _dcg(ideal)
    if idcg == 0.0:
        return 0.0
    return _dcg([max(grades.get(doc, 0), 0) for doc in ranking[:depth]]) / idcg


def topic_utility(ranking, grades, metric) -> float:
    """Utility of one ranked list of doc ids under ``metric``."""
    metric = _as_metric(metric)
    f, k = metric.family, metric.cutoff
    if f == "AP":
        return average_precision(ranking, grades)
    if f == "NDCG":
        return ndcg(ranking, grades, k)
    if f == "P":
        return precision_at(ranking, grades, k)
    if f == "RR":
        return reciprocal_rank(ranking, grades)
    if f == "RPREC":
        return r_precision(ranking, grades)
    return success_at(ranking, grades, k)


def evaluate(runs, qrels, metric) -> EvalMatrix:
    """Score every run on every judged topic.

    Topics are those with at least one relevant judgment that some run
    retrieves for. A run that skips such a topic gets utility 0 there, so the
    matrix stays rectangular and worst-case methods see the failure.
    """
    metric = _as_metric(metric)
    runs = list(runs)
    judged = set(qrels.relevant_topics())
    retrieved = set().union(*(r.rankings for r in runs)) if runs else set()
    topics = sorted(judged & retrieved)
    if not topics:
        raise NoJudgedTopics("no topic is both retrieved and judged relevant")
    util = np.zeros((len(runs), len(topics)))
    for i, run in enumerate(runs):
        missing = []
        for j, t in enumerate(topics):
            if t not in run.rankings:
                missing.append(t)
                continue
            util[i, j] = topic_utility(run.doc_ids(t), qrels.for_topic(t), metric)
        if missing:
            log.info("run %s lacks %d judged topic(s); scored 0", run.run_tag, len(missing))
    return EvalMatrix([r.run_tag for r in runs], topics, util)


def success_indicator(utilities, threshold: float = 0.0) -> np.ndarray:
    """1 where utility is strictly above ``threshold``, else 0."""
    u = np.asarray(getattr(utilities, "values", utilities), dtype=float)
    return (u > threshold).astype(int)
