"""Correlation tables, rank-shift reports and smoothing/discretization sweeps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import EvalMatrix
from .estimators import ThresholdDiscretizer, UtilityQuantizer
from .exceptions import BadWindow, DegenerateOrdering
from .meta import SystemOrdering, kendall_tau_b, rank_systems
from .methods import TABLE_METHODS
from .metrics import TABLE_METRICS, MetricId, evaluate


@dataclass(frozen=True)
class CorrelationCell:
    method: str
    tau: Optional[float]  # None when the method ties every system
    tie_count: int


@dataclass(frozen=True)
class CorrelationRow:
    collection: str
    metric: str
    reference: str
    n_systems: int
    cells: tuple

    def cell(self, method) -> CorrelationCell:
        return next(c for c in self.cells if c.method == method)


def _tau_or_none(o1, o2):
    try:
        return kendall_tau_b(o1, o2)
    except DegenerateOrdering:
        return None


def correlation_table(
    matrix: EvalMatrix,
    methods=TABLE_METHODS,
    reference="lmin",
    *,
    collection: str = "",
    metric: str = "",
    success_matrix: Optional[EvalMatrix] = None,
    tol: float = 0.0,
) -> CorrelationRow:
    """Kendall's tau_b of each method's ordering against ``reference``.

    ``s@10`` is the non-zero fraction of the matrix utilities unless
    ``success_matrix`` (e.g. per-topic P@10) is supplied.
    """
    if len(matrix.systems) < 2:
        raise ValueError("need at least two systems to correlate orderings")
    ref = rank_systems(matrix, reference, tol)
    if ref.is_degenerate:
        raise DegenerateOrdering(f"reference method {reference!r} ties every system")
    cells = []
    for m in methods:
        source = success_matrix if (m == "s@10" and success_matrix is not None) else matrix
        o = ref if m == reference else rank_systems(source, m, tol)
        cells.append(CorrelationCell(m, _tau_or_none(ref, o), o.tie_count))
    return CorrelationRow(collection, metric, reference, len(matrix.systems), tuple(cells))


def metric_sweep_table(
    runs,
    qrels,
    metrics=TABLE_METRICS,
    methods=TABLE_METHODS,
    reference="lmin",
    *,
    collection: str = "",
    s10_source: str = "metric",
    tol: float = 0.0,
) -> list:
    """One :class:`CorrelationRow` per utility metric.

    ``s10_source="metric"`` computes s@10 from each row's own utilities;
    ``"p@10"`` uses per-topic P@10 throughout.
    """
    runs = list(runs)
    success = evaluate(runs, qrels, "p@10") if s10_source == "p@10" else None
    rows = []
    for metric in metrics:
        matrix = evaluate(runs, qrels, metric)
        rows.append(correlation_table(
            matrix, methods, reference, collection=collection, metric=str(MetricId.parse(metric)),
            success_matrix=success, tol=tol,
        ))
    return rows


@dataclass(frozen=True)
class RankShift:
    system: str
    rank_a: int
    rank_b: int
    shift: int  # rank_b - rank_a; positive means the system moved down
    shift_class: str
    direction: str


SHIFT_CLASSES = ("less than one quintile", "between one and two quintiles", "greater than two quintiles")


def rank_shift_report(matrix: EvalMatrix, method_a="avg", method_b="lmin") -> list:
    """Per-system positions under two methods and the size of the move.

    Positions use competition ranking. Moves are binned in units of one
    quintile of the number of systems.
    """
    n = len(matrix.systems)
    if n < 2:
        raise ValueError("need at least two systems")
    pa = rank_systems(matrix, method_a).positions()
    pb = rank_systems(matrix, method_b).positions()
    quintile = n / 5
    out = []
    for s in matrix.systems:
        shift = pb[s] - pa[s]
        size = abs(shift)
        if size < quintile:
            cls = SHIFT_CLASSES[0]
        elif size < 2 * quintile:
            cls = SHIFT_CLASSES[1]
        else:
            cls = SHIFT_CLASSES[2]
        direction = "degradation" if shift > 0 else "improvement" if shift < 0 else "none"
        out.append(RankShift(s, pa[s], pb[s], shift, cls, direction))
    out.sort(key=lambda r: (r.rank_a, r.rank_b, str(r.system)))
    return out


@dataclass(frozen=True)
class SmoothingPoint:
    k: int
    tau_avg: Optional[float]
    tau_lmin: Optional[float]


def default_windows(n: int) -> list:
    ks = {1, n}
    k = 2
    while k < n:
        ks.add(k)
        k = max(k + 1, int(round(k * 1.5)))
    return sorted(ks)


def smoothing_sweep(matrix: EvalMatrix, ks=None) -> list:
    """Tau of smoothed leximin against mean and leximin, per window length."""
    n = len(matrix.topics)
    ks = default_windows(n) if ks is None else list(ks)
    for k in ks:
        if not 1 <= k <= n:
            raise BadWindow(f"window length {k} outside [1, {n}]")
    o_avg = rank_systems(matrix, "avg")
    o_lmin = rank_systems(matrix, "lmin")
    points = []
    for k in ks:
        o = rank_systems(matrix, f"slmin:k={k}")
        points.append(SmoothingPoint(k, _tau_or_none(o, o_avg), _tau_or_none(o, o_lmin)))
    return points


def discretize_threshold(matrix: EvalMatrix, t: float) -> EvalMatrix:
    """Set utilities strictly below ``t`` to 0."""
    return matrix.with_utilities(ThresholdDiscretizer(t).fit_transform(matrix.utilities))


def quantize(matrix: EvalMatrix, digits: int, mode: str = "decimals") -> EvalMatrix:
    """Round utilities half-to-even to ``digits`` decimal places (or significant figures)."""
    return matrix.with_utilities(UtilityQuantizer(digits, mode).fit_transform(matrix.utilities))


@dataclass(frozen=True)
class DiscretizationPoint:
    parameter: float
    tau: Optional[float]
    distinct_values: int


def discretization_sweep(matrix: EvalMatrix, grid, mode: str = "threshold", rounding: str = "decimals") -> list:
    """Tau between leximin and mean orderings after discretizing utilities.

    ``mode="threshold"`` treats grid entries as thresholds, ``"quantize"`` as
    digit counts.
    """
    points = []
    for p in grid:
        if mode == "threshold":
            m = discretize_threshold(matrix, p)
        elif mode == "quantize":
            m = quantize(matrix, int(p), rounding)
        else:
            raise ValueError(f"unknown discretization mode {mode!r}")
        tau = _tau_or_none(rank_systems(m, "lmin"), rank_systems(m, "avg"))
        points.append(DiscretizationPoint(p, tau, len(set(m.utilities.ravel().tolist()))))
    return points


def trend_is_monotone(points, increasing: bool = True) -> bool:
    """Whether the defined tau values never move against ``increasing``."""
    taus = [p.tau for p in points if p.tau is not None]
    pairs = zip(taus, taus[1:])
    return all(b >= a for a, b in pairs) if increasing else all(b <= a for a, b in pairs)


def orderings_equal(o1: SystemOrdering, o2: SystemOrdering) -> bool:
    return [frozenset(g) for g in o1.groups] == [frozenset(g) for g in o2.groups]
