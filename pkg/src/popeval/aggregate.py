"""Aggregation functions: one allocation in, one scalar out.

All functions accept an :class:`~popeval.core.Allocation`, a
:class:`~popeval.core.SortedAllocation` or a plain sequence of utilities.
Sums go through :func:`math.fsum` so that results do not depend on the order
values are stored in.
"""
from __future__ import annotations

import math

from .core import values_of
from .exceptions import SampleTooSmall

#: Floor applied to utilities before taking logs (the TREC Robust track value).
GMAP_EPSILON = 0.00001


def mean(alloc) -> float:
    v = values_of(alloc)
    return math.fsum(v) / len(v)


def gmean(alloc, epsilon: float = GMAP_EPSILON) -> float:
    """Geometric mean with every utility floored at ``epsilon``.

    Computed as ``exp(mean(log(max(epsilon, u))))`` so long samples do not
    underflow.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    v = values_of(alloc)
    return math.exp(math.fsum(math.log(max(epsilon, x)) for x in v) / len(v))


def minimum(alloc) -> float:
    return min(values_of(alloc))


def nonzero_fraction(alloc) -> float:
    """Fraction of topics with strictly positive utility (success rate)."""
    v = values_of(alloc)
    return sum(1 for x in v if x > 0) / len(v)


def auc_lower_quartile(alloc) -> float:
    """Area under the curve of running means over the worst quarter of topics.

    With ``k = n // 4`` and ``w_1 <= w_2 <= ...`` the ascending utilities, this
    is ``(1/k) * sum_{j=1..k} mean(w_1..w_j)``. Utilities above the lowest
    ``k`` never enter the value.
    """
    v = values_of(alloc)
    k = len(v) // 4
    if k < 1:
        raise SampleTooSmall(f"need at least 4 topics for a lower quartile, got {len(v)}")
    running = 0.0
    total = 0.0
    for j, x in enumerate(sorted(v)[:k], start=1):
        running += x
        total += running / j
    return total / k


def gini(alloc) -> float:
    """Gini coefficient, 0 for perfect equality.

    Uses the sorted-rank identity ``sum_{i,j} |x_i - x_j| = 2 sum_i (2i - n - 1) x_(i)``
    instead of the quadratic pair sum. An all-zero allocation has Gini 0.
    """
    v = sorted(values_of(alloc))
    n = len(v)
    total = math.fsum(v)
    if total == 0.0:
        return 0.0
    pair_sum = 2.0 * math.fsum((2 * i - n - 1) * x for i, x in enumerate(v, start=1))
    return pair_sum / (2.0 * n * n * (total / n))
