"""Seeded synthetic TREC-style collections for demos and regression tests.

Only :class:`random.Random` is used, whose output for a given seed is stable
across Python versions, so generated files are reproducible byte for byte.
"""
from __future__ import annotations

import json
import random
from pathlib import Path

from .trec_io import Qrels, RankedDoc, RunSet, format_qrels, format_run


def make_collection(n_systems=20, n_topics=50, depth=30, pool=60, seed=0, duplicate=True):
    """Build ``(runs, qrels)`` in memory.

    Each topic has a pool of documents with grades 0-2 and a difficulty; each
    system has a quality level. Scores are rounded to two decimals so that
    score ties (and the doc-id tie-break) occur. With ``duplicate=True`` the
    last system is a byte-identical copy of the first under another tag.
    """
    rng = random.Random(seed)
    topics = [f"{401 + i}" for i in range(n_topics)]
    judgments = {}
    pools = {}
    for t in topics:
        rel_rate = rng.choice((0.02, 0.05, 0.1, 0.2, 0.35))
        docs = [f"D{t}-{j:03d}" for j in range(pool)]
        pools[t] = docs
        for d in docs:
            u = rng.random()
            grade = 2 if u < rel_rate / 3 else 1 if u < rel_rate else 0
            if rng.random() < 0.8:  # leave some pool documents unjudged
                judgments[(t, d)] = grade
        if not any(judgments.get((t, d), 0) > 0 for d in docs):
            judgments[(t, docs[0])] = 1
    qrels = Qrels(judgments)

    n_real = n_systems - 1 if duplicate else n_systems
    runs = []
    for s in range(n_real):
        quality = rng.uniform(0.0, 2.5)
        rankings = {}
        for t in topics:
            if rng.random() < 0.03:  # system skips the topic entirely
                continue
            focus = rng.gauss(quality, 0.8)
            scored = []
            for d in pools[t]:
                g = max(judgments.get((t, d), 0), 0)
                scored.append((round(focus * g + rng.gauss(0.0, 1.0), 2), d))
            scored.sort(key=lambda x: (x[0], x[1]), reverse=True)
            rankings[t] = [RankedDoc(d, sc, r) for r, (sc, d) in enumerate(scored[:depth], start=1)]
        runs.append(RunSet(f"sys{s:02d}", rankings))
    if duplicate:
        runs.append(RunSet(f"sys{n_systems - 1:02d}", runs[0].rankings))
    return runs, qrels


def write_collection(out_dir, name="synthetic", **kwargs) -> Path:
    """Write runs/, qrels.txt and manifest.json under ``out_dir``; return the manifest path."""
    out = Path(out_dir)
    run_dir = out / "runs"
    run_dir.mkdir(parents=True, exist_ok=True)
    runs, qrels = make_collection(**kwargs)
    for r in runs:
        (run_dir / f"{r.run_tag}.run").write_text(format_run(r), encoding="utf-8")
    (out / "qrels.txt").write_text(format_qrels(qrels), encoding="utf-8")
    manifest = {
        "collections": [{"name": name, "runs": "runs", "qrels": "qrels.txt"}],
        "metrics": ["ap", "ndcg@10"],
        "seed": 0,
        "trials": 10000,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path
