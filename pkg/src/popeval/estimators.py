"""scikit-learn style front end.

Rows of ``X`` are systems, columns are topics, entries are utilities in
[0, 1]. :class:`PopulationRanker` orders systems under a population-level
method; the two transformers discretize utilities before ranking.
"""
from __future__ import annotations

import math
import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import Allocation, EvalMatrix, Preference
from .exceptions import LengthMismatch, ValueOutOfRange
from .meta import rank_systems
from .methods import resolve_method


def check_utility_matrix(X, *, copy: bool = False) -> np.ndarray:
    """Validate a systems x topics utility array.

    Accepts an :class:`EvalMatrix`, an array-like or a pandas frame. Returns
    a 2-D float array; raises if any entry is missing, non-finite or outside
    [0, 1].
    """
    if isinstance(X, EvalMatrix):
        X = X.utilities
    X = np.array(X, dtype=float, copy=copy) if copy else np.asarray(X, dtype=float)
    if X.ndim == 1:
        raise LengthMismatch("expected a 2-D systems x topics array; reshape a single system with X.reshape(1, -1)")
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise LengthMismatch(f"expected a non-empty 2-D array, got shape {X.shape}")
    bad = ~np.isfinite(X) | (X < 0.0) | (X > 1.0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueOutOfRange(int(j), float(X[i, j]))
    return X


def as_eval_matrix(X, system_ids=None, topic_ids=None) -> EvalMatrix:
    if isinstance(X, EvalMatrix):
        return X
    if hasattr(X, "index") and hasattr(X, "columns"):
        system_ids = list(X.index) if system_ids is None else system_ids
        topic_ids = [str(c) for c in X.columns] if topic_ids is None else topic_ids
    X = check_utility_matrix(X)
    if system_ids is None:
        system_ids = [str(i) for i in range(X.shape[0])]
    if topic_ids is None:
        topic_ids = [str(j) for j in range(X.shape[1])]
    return EvalMatrix(system_ids, topic_ids, X)


class PopulationRanker(BaseEstimator):
    """Order systems by a population-level method.

    Parameters
    ----------
    method : str, default="lmin"
        Method id, e.g. ``"lmin"``, ``"avg"``, ``"slmin:k=5"``, ``"gain:alpha=1"``.
    tol : float, default=0.0
        Absolute tolerance for comparator methods.

    Attributes
    ----------
    ordering_ : SystemOrdering
    ranks_ : ndarray of shape (n_systems,)
        Competition rank of each row (1 = best; tied rows share a rank).
    system_ids_ : list
    n_features_in_ : int
    """

    def __init__(self, method="lmin", tol=0.0):
        self.method = method
        self.tol = tol

    def fit(self, X, y=None, system_ids=None):
        if not isinstance(self.tol, numbers.Real) or self.tol < 0 or not math.isfinite(self.tol):
            raise ValueError(f"tol must be a non-negative finite number, got {self.tol!r}")
        self.method_ = resolve_method(self.method, self.tol)
        matrix = as_eval_matrix(X, system_ids)
        self.matrix_ = matrix
        self.system_ids_ = list(matrix.systems)
        self.topics_ = matrix.topics
        self.n_features_in_ = len(matrix.topics)
        self.ordering_ = rank_systems(matrix, self.method_, self.tol)
        pos = self.ordering_.positions()
        self.ranks_ = np.array([pos[s] for s in self.system_ids_])
        return self

    @property
    def groups_(self):
        check_is_fitted(self, "ordering_")
        return self.ordering_.groups

    def fit_predict(self, X, y=None, system_ids=None):
        return self.fit(X, system_ids=system_ids).ranks_

    def predict(self, X):
        """Rank each row of ``X`` against the fitted systems.

        The result is ``1 +`` the number of fitted systems strictly preferred
        to the row, i.e. the position the row would take if inserted.
        """
        check_is_fitted(self, "ordering_")
        X = check_utility_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise LengthMismatch(
                f"X has {X.shape[1]} topics, the ranker was fitted on {self.n_features_in_}"
            )
        fitted = self.matrix_.allocations()
        out = np.empty(X.shape[0], dtype=int)
        for i, row in enumerate(X.tolist()):
            new = Allocation("_new", tuple(row), self.topics_)
            better = sum(1 for f in fitted if self._compare(f, new) == Preference.LEFT)
            out[i] = 1 + better
        return out

    def _compare(self, a, b):
        if getattr(self.method_, "paired", False):
            return self.method_.compare(a, b)
        return self.method_.compare(a.sorted, b.sorted)


class ThresholdDiscretizer(TransformerMixin, BaseEstimator):
    """Zero every utility strictly below ``threshold``."""

    def __init__(self, threshold=0.0):
        self.threshold = threshold

    def fit(self, X, y=None):
        if not 0.0 <= float(self.threshold) <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold!r}")
        self.n_features_in_ = check_utility_matrix(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_utility_matrix(X)
        return np.where(X < self.threshold, 0.0, X)


def _round_sig(x, digits):
    if x == 0.0:
        return 0.0
    return round(x, digits - 1 - math.floor(math.log10(abs(x))))


class UtilityQuantizer(TransformerMixin, BaseEstimator):
    """Round utilities half-to-even.

    ``mode="decimals"`` keeps ``digits`` decimal places (``digits=0`` maps
    [0, 1] onto {0, 1}); ``mode="significant"`` keeps ``digits >= 1``
    significant figures.
    """

    def __init__(self, digits=2, mode="decimals"):
        self.digits = digits
        self.mode = mode

    def fit(self, X, y=None):
        if self.mode not in ("decimals", "significant"):
            raise ValueError(f"mode must be 'decimals' or 'significant', got {self.mode!r}")
        if int(self.digits) != self.digits or self.digits < (1 if self.mode == "significant" else 0):
            raise ValueError(f"invalid digit count {self.digits!r} for mode {self.mode!r}")
        self.n_features_in_ = check_utility_matrix(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_utility_matrix(X)
        d = int(self.digits)
        if self.mode == "decimals":
            # builtin round is correctly rounded half-to-even on the exact binary value
            out = [[round(x, d) for x in row] for row in X.tolist()]
        else:
            out = [[_round_sig(x, d) for x in row] for row in X.tolist()]
        return np.array(out, dtype=float).reshape(X.shape)
