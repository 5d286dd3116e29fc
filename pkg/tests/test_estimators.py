import numpy as np
import pytest
from sklearn.base import clone

from popeval.core import EvalMatrix
from popeval.estimators import (
    PopulationRanker,
    ThresholdDiscretizer,
    UtilityQuantizer,
    as_eval_matrix,
    check_utility_matrix,
)
from popeval.exceptions import LengthMismatch, UnknownMethod, ValueOutOfRange

X = np.array([[1.0, 0.0, 0.0], [0.3, 0.3, 0.3], [0.3, 0.3, 0.3], [0.1, 0.1, 0.0]])


def test_params_and_clone():
    r = PopulationRanker(method="slmin:k=2", tol=0.0)
    assert r.get_params() == {"method": "slmin:k=2", "tol": 0.0}
    c = clone(r)
    assert c.get_params() == r.get_params() and c is not r


def test_fit_ranks():
    r = PopulationRanker("lmin").fit(X, system_ids=["a", "b", "c", "d"])
    assert r.ranks_.tolist() == [4, 1, 1, 3]
    assert r.groups_ == (("b", "c"), ("d",), ("a",))


def test_avg_ranks():
    assert PopulationRanker("avg").fit_predict(X).tolist() == [1, 2, 2, 4]


def test_predict_inserts_rows():
    r = PopulationRanker("lmin").fit(X)
    assert r.predict([[0.5, 0.5, 0.5], [0.0, 0.0, 0.0], [0.3, 0.3, 0.3]]).tolist() == [1, 5, 1]
    with pytest.raises(LengthMismatch):
        r.predict([[0.1, 0.2]])


def test_predict_paired_method():
    r = PopulationRanker("gain:alpha=1").fit(X)
    assert r.predict([[1.0, 1.0, 1.0]]).tolist() == [1]


def test_bad_params():
    with pytest.raises(UnknownMethod):
        PopulationRanker("median").fit(X)
    with pytest.raises(ValueError):
        PopulationRanker(tol=-1).fit(X)


def test_eval_matrix_input():
    m = EvalMatrix(["x", "y"], ["t1", "t2"], [[0.1, 0.2], [0.3, 0.4]])
    r = PopulationRanker("avg").fit(m)
    assert r.system_ids_ == ["x", "y"] and r.n_features_in_ == 2
    assert as_eval_matrix(m) is m


def test_check_utility_matrix():
    with pytest.raises(ValueOutOfRange):
        check_utility_matrix([[0.5, 1.5]])
    with pytest.raises(ValueOutOfRange):
        check_utility_matrix([[np.nan]])
    with pytest.raises(LengthMismatch):
        check_utility_matrix([0.1, 0.2])
    assert check_utility_matrix([[0.1, 0.2]]).shape == (1, 2)


def test_threshold_discretizer():
    t = ThresholdDiscretizer(0.5)
    assert t.fit_transform([[0.4, 0.5, 0.6]]).tolist() == [[0, 0.5, 0.6]]
    assert clone(t).threshold == 0.5


def test_quantizer_modes():
    q = UtilityQuantizer(1).fit_transform([[0.25, 0.75]])
    assert q.tolist() == [[0.2, 0.8]]
    s = UtilityQuantizer(2, mode="significant").fit_transform([[0.01234, 0.5678]])
    assert s.tolist() == [[0.012, 0.57]]
    with pytest.raises(ValueError):
        UtilityQuantizer(0, mode="significant").fit_transform([[0.1]])
    with pytest.raises(ValueError):
        UtilityQuantizer(-1).fit_transform([[0.1]])
