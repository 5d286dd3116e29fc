"""Utility allocations, evaluation matrices and the two method kinds.

An *allocation* is the vector of per-topic utilities one system receives over
a fixed topic sample. Population-level methods come in two flavours:

* an :class:`Aggregator` reduces one allocation to a scalar;
* a :class:`Comparator` maps a pair of allocations to a :class:`Preference`.

Every aggregator induces a comparator (compare the scalars), so code that
orders systems only ever needs :meth:`Method.compare`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import DuplicateTopic, LengthMismatch, ValueOutOfRange


class Preference(enum.IntEnum):
    """Outcome of comparing a left allocation against a right one."""

    RIGHT = -1
    TIE = 0
    LEFT = 1

    @classmethod
    def from_sign(cls, x: float, tol: float = 0.0) -> "Preference":
        if x > tol:
            return cls.LEFT
        if x < -tol:
            return cls.RIGHT
        return cls.TIE

    @classmethod
    def compare_scalars(cls, x, y) -> "Preference":
        if x > y:
            return cls.LEFT
        if x < y:
            return cls.RIGHT
        return cls.TIE

    def flip(self) -> "Preference":
        return Preference(-int(self))


@dataclass(frozen=True)
class SortedAllocation:
    """Utilities sorted in non-increasing order (best first, worst last)."""

    values: tuple
    system_id: str = ""

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Allocation:
    system_id: str
    values: tuple
    topic_ids: tuple

    def __len__(self):
        return len(self.values)

    @cached_property
    def sorted(self) -> SortedAllocation:
        return sort_desc(self)

    def by_topic(self) -> dict:
        return dict(zip(self.topic_ids, self.values))


def make_allocation(system_id, topic_ids: Sequence, values: Sequence[float]) -> Allocation:
    """Validate and build an :class:`Allocation`.

    Out-of-range utilities are rejected rather than clamped.
    """
    topic_ids = tuple(topic_ids)
    values = tuple(float(v) for v in values)
    if len(topic_ids) != len(values):
        raise LengthMismatch(
            f"{len(topic_ids)} topic ids but {len(values)} values for system {system_id!r}"
        )
    if not values:
        raise LengthMismatch("an allocation needs at least one topic")
    for i, v in enumerate(values):
        if not math.isfinite(v) or v < 0.0 or v > 1.0:
            raise ValueOutOfRange(i, v)
    seen = set()
    for t in topic_ids:
        if t in seen:
            raise DuplicateTopic(t)
        seen.add(t)
    return Allocation(system_id, values, topic_ids)


def sort_desc(alloc) -> SortedAllocation:
    if isinstance(alloc, SortedAllocation):
        return alloc
    if isinstance(alloc, Allocation):
        return SortedAllocation(tuple(sorted(alloc.values, reverse=True)), alloc.system_id)
    return SortedAllocation(tuple(sorted((float(v) for v in alloc), reverse=True)))


def values_of(alloc) -> tuple:
    """Plain utility tuple from an Allocation, SortedAllocation or sequence."""
    if isinstance(alloc, (Allocation, SortedAllocation)):
        return alloc.values
    return tuple(float(v) for v in alloc)


@dataclass(frozen=True, eq=False)
class EvalMatrix:
    """Systems x topics grid of utilities in [0, 1], with no missing cells."""

    systems: tuple
    topics: tuple
    utilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.array(self.utilities, dtype=float, copy=True)
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "topics", tuple(self.topics))
        if u.ndim != 2 or u.shape != (len(self.systems), len(self.topics)):
            raise LengthMismatch(
                f"utility grid has shape {u.shape}, expected "
                f"({len(self.systems)}, {len(self.topics)})"
            )
        if len(set(self.systems)) != len(self.systems):
            raise ValueError("duplicate system ids in matrix")
        if len(set(self.topics)) != len(self.topics):
            raise DuplicateTopic(next(t for t in self.topics if self.topics.count(t) > 1))
        bad = ~np.isfinite(u) | (u < 0.0) | (u > 1.0)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValueOutOfRange(int(j), float(u[i, j]))
        u.flags.writeable = False
        object.__setattr__(self, "utilities", u)

    @property
    def shape(self):
        return self.utilities.shape

    def row(self, system_id) -> Allocation:
        i = self.systems.index(system_id)
        return Allocation(system_id, tuple(self.utilities[i].tolist()), self.topics)

    def allocations(self) -> list:
        return [
            Allocation(s, tuple(row), self.topics)
            for s, row in zip(self.systems, self.utilities.tolist())
        ]

    def with_utilities(self, utilities) -> "EvalMatrix":
        return EvalMatrix(self.systems, self.topics, utilities)

    def __eq__(self, other):
        if not isinstance(other, EvalMatrix):
            return NotImplemented
        return (
            self.systems == other.systems
            and self.topics == other.topics
            and np.array_equal(self.utilities, other.utilities)
        )

    __hash__ = None


class Method:
    """Common interface of the two method kinds."""

    name: str

    def compare(self, a, b) -> Preference:
        raise NotImplementedError


@dataclass(frozen=True)
class Aggregator(Method):
    """Scalar aggregation. ``greater_is_better=False`` for inequality measures."""

    name: str
    func: Callable = field(repr=False)
    greater_is_better: bool = True

    def __call__(self, alloc) -> float:
        return self.func(alloc)

    def key(self, alloc) -> float:
        v = self.func(alloc)
        return v if self.greater_is_better else -v

    def compare(self, a, b) -> Preference:
        return Preference.compare_scalars(self.key(a), self.key(b))

    def as_comparator(self) -> "Comparator":
        return Comparator(self.name, self.compare)


@dataclass(frozen=True)
class Comparator(Method):
    """Order function. ``paired`` comparators need topic-aligned Allocations.

    ``key``, when given, maps an allocation to a tuple whose lexicographic
    order reproduces ``func`` exactly; it lets callers sort with keys instead
    of pairwise calls.
    """

    name: str
    func: Callable = field(repr=False)
    paired: bool = False
    key: Optional[Callable] = field(default=None, repr=False)

    def __call__(self, a, b) -> Preference:
        return self.func(a, b)

    def compare(self, a, b) -> Preference:
        return self.func(a, b)

