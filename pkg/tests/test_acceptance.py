"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line that is repeated in the terminal summary.
Criteria that need external TREC data are skipped unless the data location
is given through environment variables (see the README).
"""
import filecmp
import json
import os
import time
from pathlib import Path

import pytest

from acceptance_log import record, skip
from popeval.aggregate import auc_lower_quartile, gini, gmean, minimum
from popeval.cli import main
from popeval.core import Preference
from popeval.experiments import correlation_table
from popeval.meta import (
    EXPECTED_TABLE1,
    PROPERTIES,
    PropertyVerdict,
    is_violation,
    rank_systems,
    reproduce_table1,
)
from popeval.metrics import evaluate
from popeval.order import leximin_cmp, maximin_cmp, smoothed_leximin_cmp
from popeval.synthetic import write_collection
from popeval.trec_io import load_collection
from snapshot import SNAPSHOT, compute_snapshot
from test_experiments import quantize_zero_mismatches, smoothing_endpoint_failures
from test_meta import tau_oracle_mismatches
from test_metrics import HAND_QRELS, HAND_RUN, check_oracle_equivalence, trec_eval_mismatches
from test_order import check_pareto, srisk_identity_deviation

L, R, T = Preference.LEFT, Preference.RIGHT, Preference.TIE


def test_criterion_01_property_grid(tmp_path):
    title = "property grid matches for 8 methods x {PP, AU, DP}, 10,000 trials, < 10 s"
    out = tmp_path / "table1.tsv"
    start = time.perf_counter()
    code = main(["check-properties", "--seed", "0", "--trials", "10000", "-o", str(out)])
    elapsed = time.perf_counter() - start
    grid = reproduce_table1(trials=10_000, rng_seed=0)
    problems = []
    for m, expected in EXPECTED_TABLE1.items():
        for p, want, v in zip(PROPERTIES, expected, grid[m]):
            assert isinstance(v, PropertyVerdict)
            if v.holds != want:
                problems.append(f"{m}/{p}")
            elif not want and not (v.source == "named" and is_violation(m, p, *v.witness)):
                problems.append(f"{m}/{p} witness")
            elif want and v.trials < 10_000:
                problems.append(f"{m}/{p} trials")
    ok = code == 0 and not problems and elapsed < 10 and set(grid) == set(EXPECTED_TABLE1) and len(grid) == 8
    assert record(1, title, ok, f"exit {code}, {elapsed:.2f} s, mismatches {problems or 'none'}")


def test_criterion_02_golden_fixtures():
    checks = {
        "gavg [1,.9,.1] < [.5,.5,.5]": gmean([1, 0.9, 0.1]) < gmean([0.5, 0.5, 0.5]),
        "gavg prefers [1,.9,.1] to [.25]*3": gmean([1, 0.9, 0.1]) > gmean([0.25] * 3),
        "min prefers [.25]*3 to [1,.9,.1]": minimum([0.25] * 3) > minimum([1, 0.9, 0.1]),
        "auc prefers sigma'": auc_lower_quartile([1, 0.9, 0.7, 0.6, 0.4, 0.3, 0.3, 0.0])
        > auc_lower_quartile([1, 0.9, 0.7, 0.6, 0.4, 0.3, 0.1, 0.05]),
        "gini prefers [.5,.3,.3,.2]": gini([0.5, 0.3, 0.3, 0.2]) < gini([0.8, 0.6, 0.5, 0.3]),
        "lmin prefers [.3]*3 to [1,0,0]": leximin_cmp([0.3, 0.3, 0.3], [1, 0, 0]) is L,
        "maximin ties [1,.9,.1] vs [1,.8,.1]": maximin_cmp([1, 0.9, 0.1], [1, 0.8, 0.1]) is T,
        "lmin prefers [1,.9,.1] to [1,.8,.1]": leximin_cmp([1, 0.9, 0.1], [1, 0.8, 0.1]) is L,
    }
    failed = [k for k, v in checks.items() if not v]
    assert record(2, "named counterexamples give the stated directions", not failed,
                  f"{len(checks) - len(failed)}/{len(checks)} exact")


def test_criterion_03_srisk_identity():
    worst = srisk_identity_deviation(pairs=1000, alphas=(0, 0.5, 1, 5), seed=0)
    assert record(3, "sRisk = (2+alpha) * delta-mean on 1,000 pairs within 1e-12", worst <= 1e-12,
                  f"max deviation {worst:.3g}")


def test_criterion_04_tau_oracle():
    bad = tau_oracle_mismatches(n_orderings=1000, seed=0)
    assert record(4, "tau_b equals pair counting on 1,000 tied orderings; tau(o,o)=1; reversal antisymmetric",
                  not bad, f"{len(bad)} mismatches")


def test_criterion_05_metric_oracles():
    bad = check_oracle_equivalence(n_fixtures=500, seed=2024, tol=1e-12)
    try:
        te = trec_eval_mismatches(HAND_QRELS, HAND_RUN)
        te_note = f"trec_eval hand fixtures: {len(te)} mismatches"
    except pytest.skip.Exception:
        te, te_note = [], "trec_eval unavailable, comparison skipped"
    assert record(5, "AP/NDCG/NDCG@k/P@k/RR/R-prec match oracles on 500 fixtures within 1e-12",
                  not bad and not te, f"{len(bad)} oracle mismatches; {te_note}")


# -- data-dependent criteria -------------------------------------------------------

ROBUST_AP = {"min": (0.882, 54), "gavg": (0.665, 2), "s@10": (0.566, 95),
             "auc": (0.682, 2), "avg": (0.474, 2), "lmax": (0.193, 2)}
ROBUST_NDCG10 = {"min": (None, 110), "gavg": (0.890, 2), "s@10": (0.987, 95),
                 "auc": (0.908, 4), "avg": (0.530, 2), "lmax": (0.141, 2)}


def _row_problems(row, expected):
    problems = []
    for m, (tau, ties) in expected.items():
        c = row.cell(m)
        if c.tie_count != ties:
            problems.append(f"{m} ties {c.tie_count} != {ties}")
        if (tau is None) != (c.tau is None) or (tau is not None and abs(c.tau - tau) > 0.005):
            problems.append(f"{m} tau {c.tau} vs {tau}")
    return problems


def test_criterion_06_synthetic_snapshot():
    title = "synthetic 20 x 50 table rows match the frozen snapshot bit for bit"
    want = json.loads(SNAPSHOT.read_text())
    got = json.loads(json.dumps(compute_snapshot()))
    shape_ok = got["n_systems"] == 20 and got["n_topics"] == 50
    assert record(6, title, got == want and shape_ok,
                  "replacement for the robust 2004 row, which needs NIST data")


def test_criterion_06_robust2004():
    runs, qrels = os.environ.get("POPEVAL_ROBUST04_RUNS"), os.environ.get("POPEVAL_ROBUST04_QRELS")
    title = "robust 2004 AP and ndcg@10 rows within 0.005, tie counts exact"
    if not (runs and qrels):
        skip(6, title, "POPEVAL_ROBUST04_RUNS / POPEVAL_ROBUST04_QRELS not set")
        pytest.skip("robust 2004 data not available")
    col = load_collection(runs, qrels)
    problems = []
    for metric, expected in (("ap", ROBUST_AP), ("ndcg@10", ROBUST_NDCG10)):
        row = correlation_table(evaluate(col.runs, col.qrels, metric), collection="robust04", metric=metric)
        problems += [f"{metric}: {p}" for p in _row_problems(row, expected)]
    assert record(6, title, not problems, "; ".join(problems) or "all cells match")


def test_criterion_07_dl2021_ties():
    runs, qrels = os.environ.get("POPEVAL_DL2021_RUNS"), os.environ.get("POPEVAL_DL2021_QRELS")
    title = "TREC DL 2021 passage, worst-case NDCG@10: 83% of runs tied (within one run)"
    if not (runs and qrels):
        skip(7, title, "POPEVAL_DL2021_RUNS / POPEVAL_DL2021_QRELS not set")
        pytest.skip("DL 2021 passage data not available")
    col = load_collection(runs, qrels)
    o = rank_systems(evaluate(col.runs, col.qrels, "ndcg@10"), "min")
    n = len(o.systems)
    ok = abs(o.tie_count - 0.83 * n) <= 1
    assert record(7, title, ok, f"{o.tie_count}/{n} tied = {o.tie_count / n:.1%}")


# -- remaining synthetic criteria -------------------------------------------------

def test_criterion_08_smoothing_endpoints():
    endpoint_bad = smoothing_endpoint_failures(n_matrices=50, seed=0)
    pareto_bad = check_pareto(smoothed_leximin_cmp, trials=10_000, seed=0)
    assert record(8, "smoothing tau vs lmin = 1 at k=1, vs avg = 1 at k=n; smoothed leximin Pareto over 10,000 trials",
                  not endpoint_bad and not pareto_bad,
                  f"{len(endpoint_bad)} endpoint failures, {len(pareto_bad)} Pareto failures")


def test_criterion_09_quantize_endpoint():
    bad = quantize_zero_mismatches(n_matrices=100, seed=0)
    assert record(9, "after quantize(., 0) lmin and avg orderings are identical on 100 matrices", bad == 0,
                  f"{bad} differing orderings")


def _tree(root):
    return sorted(p.relative_to(root) for p in Path(root).rglob("*") if p.is_file())


def test_criterion_10_determinism(tmp_path):
    manifest = write_collection(tmp_path / "data", n_systems=12, n_topics=30, seed=3)
    codes = [main(["run", "--manifest", str(manifest), "--out-dir", str(tmp_path / d)]) for d in ("a", "b")]
    a, b = tmp_path / "a", tmp_path / "b"
    files_a, files_b = _tree(a), _tree(b)
    _, mismatch, errors = filecmp.cmpfiles(a, b, [str(f) for f in files_a], shallow=False)
    ok = codes == [0, 0] and files_a == files_b and files_a and not mismatch and not errors
    assert record(10, "two runs of the experiment driver give byte-identical output trees", bool(ok),
                  f"{len(files_a)} files, {len(mismatch)} differ")
