"""Registry of population-level methods, addressable by short string ids.

Aggregators: ``avg``, ``gavg`` (``gavg:eps=<real>``), ``min``, ``s@10``,
``auc``, ``gini``. Comparators: ``lmin``, ``lmax``, ``min-cmp``,
``slmin:k=<int>``, ``gain:alpha=<real>``.
"""
from __future__ import annotations

from functools import partial

from . import aggregate, order
from .core import Aggregator, Comparator, Method
from .exceptions import UnknownMethod

#: Risk-aversion used for a bare ``gain`` id.
DEFAULT_ALPHA = 1.0

AGGREGATORS = ("avg", "gavg", "min", "s@10", "auc", "gini")
COMPARATORS = ("lmin", "lmax", "min-cmp", "slmin", "gain")

#: Methods reported in the correlation tables, reference first.
TABLE_METHODS = ("lmin", "min", "gavg", "s@10", "auc", "avg", "lmax")
#: Methods covered by the property grid.
PROPERTY_METHODS = ("min", "lmin", "avg", "gavg", "s@10", "auc", "gain", "gini")


def parse_method_id(spec: str) -> tuple:
    """Split ``"name:key=val,key=val"`` into ``(name, {key: val})``."""
    name, _, rest = spec.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq or not key.strip() or not val.strip():
                raise UnknownMethod(f"bad parameter {item!r} in method {spec!r}")
            params[key.strip()] = val.strip()
    return name, params


def _take(params, key, conv, default, spec):
    if key not in params:
        if default is None:
            raise UnknownMethod(f"method {spec!r} requires parameter {key!r}")
        return default
    try:
        return conv(params.pop(key))
    except ValueError:
        raise UnknownMethod(f"bad value for {key!r} in method {spec!r}") from None


def resolve_method(spec, tol: float = 0.0) -> Method:
    """Turn a method id (or an existing Method) into a Method object.

    ``tol`` is the absolute tolerance used by comparators; aggregators always
    compare their scalars exactly.
    """
    if isinstance(spec, Method):
        return spec
    name, params = parse_method_id(spec)
    if name == "avg":
        m = Aggregator("avg", aggregate.mean)
    elif name == "gavg":
        eps = _take(params, "eps", float, aggregate.GMAP_EPSILON, spec)
        if eps <= 0:
            raise UnknownMethod("gavg epsilon must be positive")
        label = "gavg" if eps == aggregate.GMAP_EPSILON else f"gavg:eps={eps!r}"
        m = Aggregator(label, partial(aggregate.gmean, epsilon=eps))
    elif name == "min":
        m = Aggregator("min", aggregate.minimum)
    elif name == "s@10":
        m = Aggregator("s@10", aggregate.nonzero_fraction)
    elif name == "auc":
        m = Aggregator("auc", aggregate.auc_lower_quartile)
    elif name == "gini":
        m = Aggregator("gini", aggregate.gini, greater_is_better=False)
    elif name == "lmin":
        m = Comparator("lmin", partial(order.leximin_cmp, tol=tol), key=_exact_key(order.leximin_key, tol))
    elif name == "lmax":
        m = Comparator("lmax", partial(order.leximax_cmp, tol=tol), key=_exact_key(order.leximax_key, tol))
    elif name == "min-cmp":
        m = Comparator("min-cmp", partial(order.maximin_cmp, tol=tol), key=_exact_key(order.maximin_key, tol))
    elif name == "slmin":
        k = _take(params, "k", int, None, spec)
        if k < 1:
            raise UnknownMethod(f"window length must be >= 1 in {spec!r}")
        m = Comparator(
            f"slmin:k={k}",
            partial(order.smoothed_leximin_cmp, k=k, tol=tol),
            key=_exact_key(partial(order.window_means, k=k), tol),
        )
    elif name == "gain":
        alpha = _take(params, "alpha", float, DEFAULT_ALPHA, spec)
        if alpha < 0:
            raise UnknownMethod(f"alpha must be >= 0 in {spec!r}")
        m = Comparator(f"gain:alpha={alpha!r}", partial(_gain_cmp, alpha=alpha, tol=tol), paired=True)
    else:
        raise UnknownMethod(f"unknown method {spec!r}")
    if params:
        raise UnknownMethod(f"unexpected parameters {sorted(params)} for method {spec!r}")
    return m


def _exact_key(key, tol):
    # a tolerance makes "equal" non-transitive, so no sort key exists
    return key if tol == 0 else None


def _gain_cmp(a, b, alpha, tol):
    return order.symmetric_risk_gain(a, b, alpha, tol).preference
