import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernclust.errors import ParseError, TooLarge
from kernclust.matrix import is_centered, is_psd
from kernclust.reductions import (Graph, laplacian, maxcut_exact, parse_edge_list,
                                  random_centered_psd, random_psd, spherical_centered)


def _naive_maxcut(G):
    best = 0
    for side in itertools.product([0, 1], repeat=G.n):
        best = max(best, sum(side[i - 1] != side[j - 1] for i, j in G.edges))
    return best


@pytest.mark.parametrize("G,expected", [
    (Graph.cycle(5), 4),
    (Graph.cycle(6), 6),
    (Graph.complete(4), 4),
    (Graph.complete(5), 6),
    (Graph.path(7), 6),
    (Graph(3, ()), 0),
    (Graph.from_edges(5, [(a, b) for a in (1, 2) for b in (3, 4, 5)]), 6),
])
def test_maxcut_examples(G, expected):
    assert maxcut_exact(G) == expected


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), p=st.floats(0, 1))
def test_maxcut_matches_naive(seed, n, p):
    G = Graph.random(n, p, np.random.default_rng(seed))
    assert maxcut_exact(G) == _naive_maxcut(G)


def test_maxcut_limit():
    with pytest.raises(TooLarge):
        maxcut_exact(Graph.path(25))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), p=st.floats(0, 1))
def test_laplacian_is_centered_psd(seed, n, p):
    G = Graph.random(n, p, np.random.default_rng(seed))
    L = laplacian(G).entries
    assert is_psd(L) and is_centered(L)
    np.testing.assert_allclose(L.sum(axis=1), 0)
    assert np.trace(L) == 2 * len(G.edges)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(3, ((2, 1),))
    with pytest.raises(ValueError):
        Graph(3, ((1, 4),))
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(2, 2)])
    G = Graph.from_edges(3, [(2, 1), (1, 2), (3, 2)])
    assert G.edges == ((1, 2), (2, 3))
    assert G.is_connected()
    assert not Graph(3, ((1, 2),)).is_connected()


def test_cycle_and_complete():
    assert len(Graph.cycle(4).edges) == 4
    assert len(Graph.complete(6).edges) == 15
    assert Graph.cycle(2).edges == ((1, 2),)


def test_parse_edge_list():
    G = parse_edge_list("4 3\n1 2\n2 3\n\n4 3\n")
    assert G.n == 4 and G.edges == ((1, 2), (2, 3), (3, 4))
    for bad in ["", "3 2\n1 2\n", "3 1\n1 x\n", "3 1\n1 1\n", "2 1\n1 3\n"]:
        with pytest.raises(ParseError):
            parse_edge_list(bad)


@pytest.mark.parametrize("n,rank", [(5, 1), (6, 3), (8, 8)])
def test_random_generators(n, rank, rng):
    M, U = random_centered_psd(n, rank, rng, return_factor=True)
    assert is_psd(M) and is_centered(M)
    np.testing.assert_allclose(U @ U.T, M.entries, atol=1e-12)
    assert np.linalg.matrix_rank(M.entries) <= rank
    assert is_psd(random_psd(n, rank, rng))
    with pytest.raises(ValueError):
        random_centered_psd(n, n + 1, rng)


@pytest.mark.parametrize("k", [2, 3, 6])
def test_spherical_centered(k):
    C = spherical_centered(k).entries
    assert is_psd(C) and is_centered(C)
    np.testing.assert_allclose(np.diag(C), 1.0)
