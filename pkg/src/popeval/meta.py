"""Ordering systems under a method, tie counting, Kendall's tau_b, and the
randomized property harness (Pareto / average utilitarianism / difference
principle).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional

import numpy as np

from .core import Aggregator, EvalMatrix, Preference
from .exceptions import DegenerateOrdering, SystemSetMismatch, UnknownProperty
from .methods import PROPERTY_METHODS, resolve_method


@dataclass(frozen=True)
class SystemOrdering:
    """Systems partitioned into tie groups, best group first.

    ``scores`` holds the aggregate value per system for aggregator methods.
    """

    method: str
    groups: tuple
    scores: Optional[dict] = field(default=None, compare=False)

    @property
    def systems(self) -> list:
        return [s for g in self.groups for s in g]

    @property
    def tie_count(self) -> int:
        """Number of systems sharing their group with at least one other."""
        return sum(len(g) for g in self.groups if len(g) > 1)

    @property
    def is_degenerate(self) -> bool:
        return len(self.groups) < 2

    def group_index(self) -> dict:
        return {s: i for i, g in enumerate(self.groups) for s in g}

    def positions(self) -> dict:
        """1-based competition rank: ties share the group's best position."""
        pos, out = 1, {}
        for g in self.groups:
            for s in g:
                out[s] = pos
            pos += len(g)
        return out


def rank_systems(matrix: EvalMatrix, method, tol: float = 0.0) -> SystemOrdering:
    """Order the matrix rows under ``method``; ties are grouped, never broken."""
    method = resolve_method(method, tol)
    allocs = sorted(matrix.allocations(), key=lambda a: str(a.system_id))
    if isinstance(method, Aggregator):
        keyed = [(method.key(a), a.system_id) for a in allocs]
        scores = {s: method(a) for a, (_, s) in zip(allocs, keyed)}
        keyed.sort(key=lambda t: t[0], reverse=True)
        groups, prev = [], None
        for k, s in keyed:
            if groups and k == prev:
                groups[-1].append(s)
            else:
                groups.append([s])
            prev = k
        return SystemOrdering(method.name, tuple(tuple(g) for g in groups), scores)

    if getattr(method, "key", None) is not None:
        keyed = sorted(((method.key(a.sorted), a.system_id) for a in allocs),
                       key=lambda t: t[0], reverse=True)
        groups, prev = [], None
        for k, s in keyed:
            if groups and k == prev:
                groups[-1].append(s)
            else:
                groups.append([s])
            prev = k
        return SystemOrdering(method.name, tuple(tuple(g) for g in groups))

    items = allocs if getattr(method, "paired", False) else [a.sorted for a in allocs]
    ids = {id(x): a.system_id for x, a in zip(items, allocs)}
    # best first: a system that beats another sorts earlier
    ordered = sorted(items, key=cmp_to_key(lambda x, y: -int(method.compare(x, y))))
    groups = []
    for x in ordered:
        if groups and method.compare(groups[-1][0], x) == Preference.TIE:
            groups[-1].append(x)
        else:
            groups.append([x])
    return SystemOrdering(method.name, tuple(tuple(ids[id(x)] for x in g) for g in groups))


def _pair_counts(o1: SystemOrdering, o2: SystemOrdering):
    s1, s2 = set(o1.systems), set(o2.systems)
    if s1 != s2 or len(s1) != len(o1.systems) or len(s2) != len(o2.systems):
        raise SystemSetMismatch("orderings rank different system sets")
    systems = sorted(s1, key=str)
    g1, g2 = o1.group_index(), o2.group_index()
    r1 = np.array([g1[s] for s in systems])
    r2 = np.array([g2[s] for s in systems])
    iu = np.triu_indices(len(systems), k=1)
    d1 = np.sign(r1[:, None] - r1[None, :])[iu]
    d2 = np.sign(r2[:, None] - r2[None, :])[iu]
    prod = d1 * d2
    concordant = int((prod > 0).sum())
    discordant = int((prod < 0).sum())
    return concordant, discordant, len(d1), int((d1 == 0).sum()), int((d2 == 0).sum())


def kendall_tau_b(o1: SystemOrdering, o2: SystemOrdering) -> float:
    """Kendall's tau_b between two orderings of the same systems."""
    c, d, total, t1, t2 = _pair_counts(o1, o2)
    if total == t1 or total == t2:
        raise DegenerateOrdering("an ordering puts every system in one tie group")
    return (c - d) / math.sqrt((total - t1) * (total - t2))


# ----------------------------------------------------------------------------
# property harness

PROPERTIES = ("PARETO", "AU", "DP")

#: Table of expected verdicts: method -> (Pareto, average utilitarianism, difference principle)
EXPECTED_TABLE1 = {
    "min": (False, False, True),
    "lmin": (True, False, True),
    "avg": (True, True, False),
    "gavg": (True, False, False),
    "s@10": (False, False, False),
    "auc": (False, False, False),
    "gain": (True, True, False),
    "gini": (False, False, False),
}

_SIGMA = (1, 0.9, 0.7, 0.6, 0.4, 0.3, 0.1, 0.05)
_SIGMA_PRIME = (1, 0.9, 0.7, 0.6, 0.4, 0.3, 0.3, 0.0)

#: Named counterexamples, oriented so that ``(a, b)`` violates the property:
#: for PARETO ``a`` dominates ``b``; for AU/DP the reference prefers ``a``.
WITNESSES = {
    ("min", "PARETO"): ((1, 0.9, 0.1), (1, 0.8, 0.1)),
    ("min", "AU"): ((1, 0.0, 0.0), (0.3, 0.3, 0.3)),
    ("lmin", "AU"): ((1, 0.0, 0.0), (0.3, 0.3, 0.3)),
    ("avg", "DP"): ((0.3, 0.3, 0.3), (1, 0.0, 0.0)),
    ("gavg", "AU"): ((1, 0.9, 0.1), (0.5, 0.5, 0.5)),
    ("gavg", "DP"): ((0.25, 0.25, 0.25), (1, 0.9, 0.1)),
    # success rate only sees whether a utility is non-zero
    ("s@10", "PARETO"): ((0.6, 0.5, 0.1), (0.5, 0.5, 0.1)),
    ("s@10", "AU"): ((1, 1, 0.0), (0.1, 0.1, 0.1)),
    ("s@10", "DP"): ((0.2, 0.2, 0.2), (0.1, 0.1, 0.1)),
    # a change above the lower quartile is invisible to auc
    ("auc", "PARETO"): ((1, 0.95) + _SIGMA[2:], _SIGMA),
    ("auc", "AU"): ((1, 0.95) + _SIGMA[2:], _SIGMA),
    ("auc", "DP"): (_SIGMA, _SIGMA_PRIME),
    ("gain", "DP"): ((0.3, 0.3, 0.3), (1, 0.0, 0.0)),
    ("gini", "PARETO"): ((0.6, 0.5, 0.5), (0.5, 0.5, 0.5)),
    ("gini", "AU"): ((0.6, 0.5, 0.5), (0.5, 0.5, 0.5)),
    ("gini", "DP"): ((0.8, 0.6, 0.5, 0.3), (0.5, 0.3, 0.3, 0.2)),
}


@dataclass(frozen=True)
class PropertyVerdict:
    method: str
    property: str
    holds: bool
    witness: Optional[tuple] = None
    trials: int = 0
    source: str = ""


def _exact(values):
    return [Fraction(repr(float(v))) for v in values]


def is_violation(method, prop: str, a, b) -> bool:
    """Does the pair ``(a, b)`` show ``method`` breaking ``prop``?

    Reference means and minima are compared in exact decimal arithmetic, so
    a property only constrains the method when the reference strictly prefers
    one side.
    """
    method = resolve_method(method)
    a = tuple(float(x) for x in a)
    b = tuple(float(x) for x in b)
    if len(a) != len(b):
        raise ValueError("witness allocations must have equal length")
    return _violates(method, prop, a, b, _exact(a), _exact(b))


def _violates(method, prop, a, b, ea, eb) -> bool:
    # ea/eb: exact stand-ins for a/b (Fractions or integer grid steps)
    if prop == "PARETO":
        if not (all(x >= y for x, y in zip(ea, eb)) and ea != eb):
            return False
        return method.compare(a, b) != Preference.LEFT
    if prop == "AU":
        ref = Preference.compare_scalars(sum(ea), sum(eb))
    elif prop == "DP":
        ref = Preference.compare_scalars(min(ea), min(eb))
    else:
        raise UnknownProperty(f"unknown property {prop!r}")
    return ref != Preference.TIE and method.compare(a, b) != ref


GRID_STEPS = 20
MIN_LENGTH, MAX_LENGTH = 3, 12


def _random_pair(rng: random.Random, prop: str):
    n = rng.randint(MIN_LENGTH, MAX_LENGTH)
    a = [rng.randint(0, GRID_STEPS) for _ in range(n)]
    if prop == "PARETO":
        raisable = [i for i, x in enumerate(a) if x < GRID_STEPS]
        if not raisable:
            a[0] = GRID_STEPS - 1
            raisable = [0]
        i = rng.choice(raisable)
        b = list(a)
        a[i] = rng.randint(b[i] + 1, GRID_STEPS)
    else:
        b = [rng.randint(0, GRID_STEPS) for _ in range(n)]
    return a, b


def check_property(method, prop: str, trials: int = 10_000, rng_seed: int = 0) -> PropertyVerdict:
    """Search for a violation of ``prop`` by ``method``.

    The named counterexample is tried first; otherwise ``trials`` random pairs
    of grid-valued allocations (length 3-12, values in steps of 0.05) are
    checked. ``holds=True`` means no violation was found.
    """
    if prop not in PROPERTIES:
        raise UnknownProperty(f"unknown property {prop!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    label = method if isinstance(method, str) else method.name
    m = resolve_method(method)
    named = WITNESSES.get((label, prop))
    if named is not None and is_violation(m, prop, *named):
        return PropertyVerdict(label, prop, False, named, 0, "named")
    rng = random.Random(f"{rng_seed}:{label}:{prop}")
    for t in range(1, trials + 1):
        ia, ib = _random_pair(rng, prop)
        a = tuple(x / GRID_STEPS for x in ia)
        b = tuple(x / GRID_STEPS for x in ib)
        if _violates(m, prop, a, b, ia, ib):
            return PropertyVerdict(label, prop, False, (a, b), t, "random")
    return PropertyVerdict(label, prop, True, None, trials, "")


def reproduce_table1(trials: int = 10_000, rng_seed: int = 0, methods=PROPERTY_METHODS) -> dict:
    """Verdict grid ``{method: (Pareto, AU, DP)}`` of PropertyVerdicts."""
    return {
        m: tuple(check_property(m, p, trials, rng_seed) for p in PROPERTIES)
        for m in methods
    }


def table1_matches(grid: dict) -> bool:
    return all(
        tuple(v.holds for v in grid[m]) == EXPECTED_TABLE1[m] for m in EXPECTED_TABLE1
    )
