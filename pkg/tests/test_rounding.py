import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernclust.rounding import (Assignment, RoundStats, assignment_value, batch_values,
                                gaussian_round, round_best_of, stream)


def _naive_value(A, B, labels):
    n = len(labels)
    return sum(A[i][j] * B[labels[i]][labels[j]] for i in range(n) for j in range(n))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7), k=st.integers(1, 4))
def test_assignment_value_matches_double_loop(seed, n, k):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A = A + A.T
    B = rng.standard_normal((k, k))
    B = B + B.T
    lab = rng.integers(0, k, n)
    assert assignment_value(A, B, lab) == pytest.approx(_naive_value(A, B, lab), abs=1e-10)
    L = rng.integers(0, k, (5, n))
    np.testing.assert_allclose(batch_values(A, B, L), [_naive_value(A, B, r) for r in L],
                               atol=1e-10)


def test_assignment_value_rejects_bad_labels():
    with pytest.raises(ValueError):
        assignment_value(np.eye(2), np.eye(2), [0, 2])
    with pytest.raises(ValueError):
        assignment_value(np.eye(2), np.eye(2), [0])


def test_one_based():
    assert Assignment(np.array([0, 2, 1]), 1.0).one_based() == [1, 3, 2]


@pytest.mark.parametrize("rho", [-0.9, -0.3, 0.0, 0.5, 0.95])
def test_two_label_agreement_probability(rho):
    # P(same sign) for correlated Gaussian projections = 1 - arccos(rho)/pi
    X = np.array([[1.0, 0.0], [rho, math.sqrt(1 - rho * rho)]])
    L = gaussian_round(X, (0, 1), np.random.default_rng(7), trials=200_000)
    p = np.mean(L[:, 0] == L[:, 1])
    expected = 1 - math.acos(rho) / math.pi
    assert abs(p - expected) <= 4 * math.sqrt(expected * (1 - expected) / 200_000) + 1e-12


@pytest.mark.parametrize("s", [2, 3, 5])
def test_orthogonal_vectors_agree_with_probability_one_over_s(s):
    X = np.eye(3)[:2]
    L = gaussian_round(X, tuple(range(s)), np.random.default_rng(s), trials=100_000)
    p = np.mean(L[:, 0] == L[:, 1])
    assert abs(p - 1 / s) <= 4 * math.sqrt((1 / s) * (1 - 1 / s) / 100_000)


def test_labels_come_from_label_set():
    X = np.random.default_rng(0).standard_normal((6, 4))
    L = gaussian_round(X, (4, 1, 7), np.random.default_rng(1), trials=500)
    assert set(np.unique(L)) <= {1, 4, 7}
    with pytest.raises(ValueError):
        gaussian_round(X, (3,), np.random.default_rng(1))


def test_zero_vector_tie_goes_to_first_label():
    L = gaussian_round(np.zeros((2, 3)), (5, 2), np.random.default_rng(0), trials=10)
    assert np.all(L == 5)


def test_stream_is_keyed_by_seed_and_s():
    a = stream(3, 2).standard_normal(4)
    np.testing.assert_array_equal(a, stream(3, 2).standard_normal(4))
    assert not np.allclose(a, stream(3, 3).standard_normal(4))


def test_batching_does_not_change_draws():
    # 300 trials span two batches; trial t must still consume chunk t
    X = np.random.default_rng(4).standard_normal((5, 3))
    A = np.eye(5) - 1 / 5
    B = np.eye(2)
    res = round_best_of(A, B, X, {2: (0, 1)}, trials=300, seed=9)
    rng = stream(9, 2)
    L = gaussian_round(X, (0, 1), rng, trials=256)
    L2 = gaussian_round(X, (0, 1), rng, trials=44)
    vals = np.concatenate([batch_values(A, B, L), batch_values(A, B, L2)])
    assert res.per_s[2].mean == pytest.approx(vals.mean(), abs=1e-12)
    assert res.best.value == pytest.approx(vals.max(), abs=1e-12)


def test_round_best_of_reproducible_and_combined():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((6, 4))
    M = rng.standard_normal((6, 3))
    M -= M.mean(axis=0)
    A = M @ M.T
    B = np.eye(3)
    sets = {2: (0, 1), 3: (0, 1, 2)}
    r1 = round_best_of(A, B, X, sets, trials=400, seed=5)
    r2 = round_best_of(A, B, X, sets, trials=400, seed=5)
    np.testing.assert_array_equal(r1.best.labels, r2.best.labels)
    assert r1.combined.mean >= max(r1.per_s[2].mean, r1.per_s[3].mean) - 1e-12
    assert r1.best.value == pytest.approx(max(r1.per_s[2].best_value, r1.per_s[3].best_value))
    assert r1.best.value == pytest.approx(assignment_value(A, B, r1.best.labels))
    with pytest.raises(ValueError):
        round_best_of(A, B, X, sets, trials=0)


def test_expected_value_closed_form():
    # two-label rounding on I_2: E[value] = sum_ij a_ij P(same) with P = 1 - theta/pi
    rng = np.random.default_rng(8)
    X = rng.standard_normal((4, 3))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    M = rng.standard_normal((4, 2))
    M -= M.mean(axis=0)
    A = M @ M.T
    G = np.clip(X @ X.T, -1, 1)
    exact = float(np.sum(A * (1 - np.arccos(G) / math.pi)))
    res = round_best_of(A, np.eye(2), X, {2: (0, 1)}, trials=40_000, seed=1)
    assert abs(res.per_s[2].mean - exact) <= 4 * res.per_s[2].std_error


def test_round_stats():
    st_ = RoundStats.from_values(np.array([1.0, 3.0]))
    assert st_.mean == 2.0 and st_.best_value == 3.0
    assert st_.std_error == pytest.approx(1.0)
    assert RoundStats.from_values(np.array([2.0])).std_error == math.inf
