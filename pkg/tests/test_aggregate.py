import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from popeval.aggregate import auc_lower_quartile, gini, gmean, mean, minimum, nonzero_fraction
from popeval.exceptions import SampleTooSmall
from popeval.metrics import success_indicator

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
allocs = st.lists(unit, min_size=1, max_size=20)


def test_mean_examples():
    assert mean([1, 0, 0]) == pytest.approx(1 / 3, abs=1e-15)
    assert mean([0.5]) == 0.5
    assert mean([0.2, 0.2, 0.2]) == pytest.approx(0.2, abs=1e-15)


def test_gmean_examples():
    assert gmean([1, 0.9, 0.1]) < gmean([0.5, 0.5, 0.5])
    assert gmean([0.5, 0.5, 0.5]) == pytest.approx(0.5, abs=1e-15)
    assert gmean([0, 1]) == pytest.approx(math.sqrt(0.00001), rel=1e-12)


def test_gmean_long_sample_does_not_underflow():
    assert gmean([0.00001] * 5000) == pytest.approx(0.00001, rel=1e-9)


def test_minimum_examples():
    assert minimum([1, 0.9, 0.1]) == 0.1
    assert minimum([0.25, 0.25, 0.25]) == 0.25
    assert minimum([0.5]) == 0.5


def test_nonzero_fraction_examples():
    assert nonzero_fraction([0.3, 0, 0.0001]) == pytest.approx(2 / 3)
    assert nonzero_fraction([0, 0, 0]) == 0
    assert nonzero_fraction([0.1, 1]) == 1


def test_auc_examples():
    sigma = [1, 0.9, 0.7, 0.6, 0.4, 0.3, 0.1, 0.05]
    sigma_p = [1, 0.9, 0.7, 0.6, 0.4, 0.3, 0.3, 0.0]
    assert auc_lower_quartile(sigma) == pytest.approx(0.0625, abs=1e-15)
    assert auc_lower_quartile(sigma_p) == pytest.approx(0.075, abs=1e-15)
    assert auc_lower_quartile(sigma_p) > auc_lower_quartile(sigma)
    assert auc_lower_quartile([0.3] * 8) == pytest.approx(0.3, abs=1e-15)
    with pytest.raises(SampleTooSmall):
        auc_lower_quartile([0.1, 0.2, 0.3])


def test_gini_examples():
    assert gini([0.5, 0.5, 0.5]) == 0
    assert gini([0.6, 0.5, 0.5]) == pytest.approx(1 / 24, abs=1e-15)
    assert gini([0.5, 0.3, 0.3, 0.2]) < gini([0.8, 0.6, 0.5, 0.3])
    assert gini([0, 0, 0]) == 0


def gini_pairs(v):
    n = len(v)
    mu = sum(v) / n
    return 0.0 if mu == 0 else sum(abs(a - b) for a in v for b in v) / (2 * n * n * mu)


@given(allocs)
def test_gini_matches_pair_sum(v):
    assert gini(v) == pytest.approx(gini_pairs(v), abs=1e-12)


@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=1, max_size=20),
       st.floats(min_value=0.01, max_value=1.0))
def test_gini_scale_invariant(v, c):
    assert abs(gini([c * x for x in v]) - gini(v)) <= 1e-12


@given(allocs, st.data())
def test_monotone_under_single_raise(v, data):
    i = data.draw(st.integers(0, len(v) - 1))
    raised = list(v)
    raised[i] = data.draw(st.floats(min_value=v[i], max_value=1.0))
    assert mean(raised) >= mean(v)
    assert gmean(raised) >= gmean(v)
    assert minimum(raised) >= minimum(v)


def test_strict_increase_for_mean_and_gmean():
    rng = random.Random(11)
    for _ in range(2000):
        v = [rng.randint(0, 20) / 20 for _ in range(rng.randint(1, 12))]
        i = rng.randrange(len(v))
        if v[i] == 1.0:
            continue
        raised = list(v)
        raised[i] = rng.randint(int(v[i] * 20) + 1, 20) / 20
        assert mean(raised) > mean(v)
        assert gmean(raised) > gmean(v)


def test_auc_ignores_values_above_quartile():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randint(4, 30)
        v = sorted(rng.random() for _ in range(n))
        k = n // 4
        boundary = v[k - 1]
        w = v[:k] + [rng.uniform(boundary, 1.0) for _ in v[k:]]
        rng.shuffle(w)
        assert auc_lower_quartile(w) == auc_lower_quartile(v)


@given(allocs)
def test_nonzero_fraction_is_mean_of_indicator(v):
    assert nonzero_fraction(v) == pytest.approx(success_indicator(v).mean(), abs=1e-15)


@given(st.lists(unit, min_size=4, max_size=20), st.randoms(use_true_random=False))
def test_permutation_invariance(v, rnd):
    w = list(v)
    rnd.shuffle(w)
    for f in (mean, gmean, minimum, nonzero_fraction, auc_lower_quartile, gini):
        assert f(w) == pytest.approx(f(v), abs=1e-15)
