"""Population-level evaluation of ranked retrieval systems.

Per-topic utilities from TREC runs and qrels are ordered under utilitarian
and worst-case (pessimistic) methods, leximin first among them, and the
resulting system orderings are compared with Kendall's tau_b.
"""

__version__ = "0.1.0"

from .aggregate import auc_lower_quartile, gini, gmean, mean, minimum, nonzero_fraction
from .core import (
    Aggregator,
    Allocation,
    Comparator,
    EvalMatrix,
    Preference,
    SortedAllocation,
    make_allocation,
    sort_desc,
)
from .estimators import PopulationRanker, ThresholdDiscretizer, UtilityQuantizer, check_utility_matrix
from .meta import (
    PropertyVerdict,
    SystemOrdering,
    check_property,
    kendall_tau_b,
    rank_systems,
    reproduce_table1,
)
from .methods import resolve_method
from .metrics import MetricId, evaluate, success_indicator
from .order import (
    leximax_cmp,
    leximin_cmp,
    maximin_cmp,
    risk_gain,
    smoothed_leximin_cmp,
    symmetric_risk_gain,
)
from .trec_io import Qrels, RunSet, load_collection, parse_qrels, parse_run

__all__ = [
    "__version__",
    "auc_lower_quartile",
    "gini",
    "gmean",
    "mean",
    "minimum",
    "nonzero_fraction",
    "Aggregator",
    "Allocation",
    "Comparator",
    "EvalMatrix",
    "Preference",
    "SortedAllocation",
    "make_allocation",
    "sort_desc",
    "PopulationRanker",
    "ThresholdDiscretizer",
    "UtilityQuantizer",
    "check_utility_matrix",
    "PropertyVerdict",
    "SystemOrdering",
    "check_property",
    "kendall_tau_b",
    "rank_systems",
    "reproduce_table1",
    "resolve_method",
    "MetricId",
    "evaluate",
    "success_indicator",
    "leximax_cmp",
    "leximin_cmp",
    "maximin_cmp",
    "risk_gain",
    "smoothed_leximin_cmp",
    "symmetric_risk_gain",
    "Qrels",
    "RunSet",
    "load_collection",
    "parse_qrels",
    "parse_run",
]
