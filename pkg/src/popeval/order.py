"""Order functions: compare two allocations directly.

The lexicographic comparators work on utilities sorted best-first and accept
an Allocation, a SortedAllocation or a plain sequence. Comparison is exact by
default; ``tol`` treats values within an absolute distance as equal.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import Allocation, Preference, sort_desc
from .exceptions import BadWindow, LengthMismatch, TopicMismatch


class ScoredPreference(NamedTuple):
    preference: Preference
    magnitude: float

    def flip(self) -> "ScoredPreference":
        return ScoredPreference(self.preference.flip(), -self.magnitude)


def _sorted_pair(a, b):
    sa, sb = sort_desc(a).values, sort_desc(b).values
    if len(sa) != len(sb):
        raise LengthMismatch(f"cannot compare allocations of length {len(sa)} and {len(sb)}")
    return sa, sb


def _first_difference(pairs, tol):
    for x, y in pairs:
        if x - y > tol:
            return Preference.LEFT
        if y - x > tol:
            return Preference.RIGHT
    return Preference.TIE


def leximin_cmp(a, b, tol: float = 0.0) -> Preference:
    """Lexicographic minimum: compare worst values first, then the next worst."""
    sa, sb = _sorted_pair(a, b)
    return _first_difference(zip(reversed(sa), reversed(sb)), tol)


def leximax_cmp(a, b, tol: float = 0.0) -> Preference:
    sa, sb = _sorted_pair(a, b)
    return _first_difference(zip(sa, sb), tol)


def maximin_cmp(a, b, tol: float = 0.0) -> Preference:
    sa, sb = _sorted_pair(a, b)
    return _first_difference([(sa[-1], sb[-1])], tol)


def window_means(a, k: int) -> tuple:
    """Means of ``k`` consecutive sorted utilities, worst window first.

    Window ``m`` covers the ``m``-th to ``(m+k-1)``-th smallest values. Means
    rather than sums are kept so that ``k == n`` reproduces
    :func:`popeval.aggregate.mean` bit for bit, and ``k == 1`` the raw values.
    """
    asc = sort_desc(a).values[::-1]
    n = len(asc)
    if not 1 <= k <= n:
        raise BadWindow(f"window length {k} outside [1, {n}]")
    if k == 1:
        return tuple(asc)
    if k == n:
        return (math.fsum(asc) / n,)
    sums = sliding_window_view(np.asarray(asc), k).sum(axis=1)
    return tuple((sums / k).tolist())


def leximin_key(a) -> tuple:
    return sort_desc(a).values[::-1]


def leximax_key(a) -> tuple:
    return sort_desc(a).values


def maximin_key(a) -> tuple:
    return (sort_desc(a).values[-1],)


def smoothed_leximin_cmp(a, b, k: int, tol: float = 0.0) -> Preference:
    """Leximin over moving windows of the sorted utilities.

    ``k=1`` is leximin; ``k=n`` compares arithmetic means.
    """
    _sorted_pair(a, b)
    return _first_difference(zip(window_means(a, k), window_means(b, k)), tol)


def _paired_values(a, b):
    if isinstance(a, Allocation) and isinstance(b, Allocation):
        if set(a.topic_ids) != set(b.topic_ids) or len(a) != len(b):
            raise TopicMismatch(
                f"systems {a.system_id!r} and {b.system_id!r} are not evaluated on the same topics"
            )
        if a.topic_ids == b.topic_ids:
            return a.values, b.values
        bt = b.by_topic()
        return a.values, tuple(bt[t] for t in a.topic_ids)
    if isinstance(a, Allocation) or isinstance(b, Allocation):
        raise TopicMismatch("risk gain needs two Allocations or two plain sequences")
    av, bv = tuple(map(float, a)), tuple(map(float, b))
    if len(av) != len(bv):
        raise TopicMismatch(f"cannot pair {len(av)} utilities with {len(bv)}")
    return av, bv


def _gains_losses(av, bv):
    gains = math.fsum(max(0.0, x - y) for x, y in zip(av, bv))
    losses = math.fsum(max(0.0, y - x) for x, y in zip(av, bv))
    return gains, losses


def _risk(gains, losses, n, alpha):
    return gains / n - (1.0 + alpha) * losses / n


def risk_gain(a, b, alpha: float = 0.0) -> float:
    """Risk-penalised gain of ``a`` over baseline ``b``; losses weigh ``1 + alpha``.

    Allocations are paired by topic id; plain sequences are paired by position.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    av, bv = _paired_values(a, b)
    gains, losses = _gains_losses(av, bv)
    return _risk(gains, losses, len(av), alpha)


def symmetric_risk_gain(a, b, alpha: float = 0.0, tol: float = 0.0) -> ScoredPreference:
    """``risk_gain(a, b) - risk_gain(b, a)`` together with its direction.

    Algebraically this is ``(2 + alpha) * (mean(a) - mean(b))``.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    av, bv = _paired_values(a, b)
    n = len(av)
    gains, losses = _gains_losses(av, bv)
    magnitude = _risk(gains, losses, n, alpha) - _risk(losses, gains, n, alpha)
    return ScoredPreference(Preference.from_sign(magnitude, tol), magnitude)
