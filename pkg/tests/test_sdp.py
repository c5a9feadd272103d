import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernclust.ball import min_enclosing_ball
from kernclust.errors import SolverError
from kernclust.matrix import gram_factor
from kernclust.pipeline import brute_force_clust
from kernclust.reductions import Graph, laplacian, random_centered_psd, random_psd
from kernclust.sdp import (SolverParams, dual_upper_bound, grothendieck_max, relaxation_objective,
                           solve_relaxation, tensor_objective)


@pytest.mark.parametrize("n,expected", [(2, 4.0), (3, 9.0), (4, 16.0), (5, 25.0)])
def test_complete_graph_grothendieck(n, expected):
    # L(K_n) = nI - J, so sum l_ij <x_i,x_j> = n^2 - |sum x_i|^2 <= n^2
    L = laplacian(Graph.complete(n))
    val, X = grothendieck_max(L)
    assert val == pytest.approx(expected, rel=1e-9)
    np.testing.assert_allclose(np.linalg.norm(X, axis=1), 1.0, atol=1e-12)
    assert dual_upper_bound(L, X) == pytest.approx(expected, rel=1e-8)


def test_cycle_five():
    L = laplacian(Graph.cycle(5))
    val, X = grothendieck_max(L)
    # neighbours at angle 4 pi / 5; each edge contributes 2 (1 - cos)
    expected = 5 * 2 * (1 - math.cos(4 * math.pi / 5))
    assert val == pytest.approx(expected, rel=1e-8)
    assert dual_upper_bound(L, X) - val <= 1e-6


@pytest.mark.parametrize("seed", range(5))
def test_rank_identity(seed):
    rng = np.random.default_rng(seed)
    A, U = random_centered_psd(7, 3, rng, return_factor=True)
    X = rng.standard_normal((7, 8))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    u = rng.standard_normal(8)
    u /= np.linalg.norm(u)
    f = gram_factor(A)
    assert relaxation_objective(A, u, X, 0.7, 1.3) == pytest.approx(
        tensor_objective(f, u, X, 0.7, 1.3), rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_sweeps_are_monotone(seed):
    rng = np.random.default_rng(seed)
    A = random_psd(8, 4, rng)  # noncentered so the u block is active
    sol = solve_relaxation(A, np.array([0.4, 0.3]), 0.9, SolverParams(record_history=True))
    h = np.array(sol.history)
    assert h.size >= 2
    assert np.all(np.diff(h) >= -1e-9 * np.abs(h[1:]))


@pytest.mark.parametrize("seed", range(8))
def test_relaxation_dominates_every_assignment(seed):
    rng = np.random.default_rng(seed)
    n, k = int(rng.integers(3, 7)), int(rng.integers(2, 4))
    A = random_centered_psd(n, int(rng.integers(1, n)), rng)
    B = random_psd(k, k, rng)
    V = gram_factor(B).vectors
    ball = min_enclosing_ball(V)
    sol = solve_relaxation(A, ball.center, ball.radius)
    opt = brute_force_clust(A, B)
    assert opt.value <= sol.primal_value + 1e-7 * max(1, abs(sol.primal_value))
    assert sol.primal_value <= sol.dual_value + 1e-6 * max(1, sol.dual_value)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 9))
def test_dual_bound_is_valid(seed, n):
    rng = np.random.default_rng(seed)
    A = random_psd(n, int(rng.integers(1, n + 1)), rng).entries
    val, X = grothendieck_max(A)
    # any feasible point lower-bounds the max, the dual upper-bounds it
    Y = rng.standard_normal((n, 3))
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    feas = float(np.sum(A * (Y @ Y.T)))
    assert feas <= val + 1e-9 * max(1, val)
    assert val <= dual_upper_bound(A, X) + 1e-9 * max(1, val)
    assert val <= dual_upper_bound(A) + 1e-9 * max(1, val)


def test_zero_radius_is_constant():
    A = random_psd(4, 2, np.random.default_rng(1))
    sol = solve_relaxation(A, np.array([2.0]), 0.0)
    assert sol.primal_value == pytest.approx(4.0 * float(A.entries.sum()))


def test_deterministic_given_seed():
    rng = np.random.default_rng(3)
    A = random_centered_psd(6, 3, rng)
    p = SolverParams(seed=11)
    a = solve_relaxation(A, np.zeros(2), 1.0, p)
    b = solve_relaxation(A, np.zeros(2), 1.0, p)
    assert a.primal_value == b.primal_value
    np.testing.assert_array_equal(a.x_stars, b.x_stars)
    assert a.restart == b.restart


def test_nonconvergence_raises():
    A = random_centered_psd(8, 8, np.random.default_rng(0))
    with pytest.raises(SolverError):
        solve_relaxation(A, np.zeros(1), 1.0, SolverParams(max_sweeps=1, rel_tol=0.0))
    sol = solve_relaxation(A, np.zeros(1), 1.0, SolverParams(max_sweeps=1, rel_tol=0.0),
                           raise_on_failure=False)
    assert not sol.converged


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        solve_relaxation(np.eye(2), np.zeros(1), -1.0)
