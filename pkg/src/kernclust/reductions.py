"""Instance families: graph Laplacians, MaxCut, random centered kernels."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, TooLarge
from .matrix import SymMatrix

log = logging.getLogger(__name__)

MAXCUT_LIMIT = 24
GROTHENDIECK_B = np.array([[1.0, -1.0], [-1.0, 1.0]])


@dataclass(frozen=True)
class Graph:
    """Simple loop-free graph; edges are 1-indexed pairs (i, j) with i < j."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        for i, j in self.edges:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"invalid edge ({i}, {j}) for n={self.n}")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Normalize to i < j, sort and deduplicate; self-loops are rejected."""
        norm = set()
        count = 0
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            norm.add((min(i, j), max(i, j)))
            count += 1
        if len(norm) < count:
            log.warning("dropped %d duplicate edges", count - len(norm))
        return cls(n, tuple(sorted(norm)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def random(cls, n: int, p: float, rng: np.random.Generator) -> "Graph":
        iu = np.triu_indices(n, 1)
        keep = rng.random(iu[0].size) < p
        return cls(n, tuple((int(i) + 1, int(j) + 1) for i, j in zip(iu[0][keep], iu[1][keep])))

    def is_connected(self) -> bool:
        seen = {1}
        adj = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        todo = [1]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.n


def parse_edge_list(text: str, source: str = "<edges>") -> Graph:
    """First line ``n m``, then ``m`` lines ``i j`` (1-indexed)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        edges = [(int(a), int(b)) for a, b, *_ in lines[1:m + 1]]
    except (IndexError, ValueError) as exc:
        raise ParseError(f"{source}: malformed edge list") from exc
    if len(edges) != m:
        raise ParseError(f"{source}: expected {m} edges, found {len(edges)}")
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from exc


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text(), str(path))


def laplacian(G: Graph) -> SymMatrix:
    L = np.zeros((G.n, G.n))
    for i, j in G.edges:
        L[i - 1, j - 1] = L[j - 1, i - 1] = -1.0
        L[i - 1, i - 1] += 1.0
        L[j - 1, j - 1] += 1.0
    return SymMatrix(L)


def maxcut_exact(G: Graph) -> int:
    """Exact MaxCut by enumerating the 2^(n-1) cuts with vertex n on side 0."""
    if G.n > MAXCUT_LIMIT:
        raise TooLarge(f"n={G.n} exceeds the enumeration limit {MAXCUT_LIMIT}")
    if not G.edges:
        return 0
    E = np.array(G.edges, dtype=np.int64) - 1
    best = 0
    total = 1 << (G.n - 1)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        side_i = (masks[:, None] >> E[None, :, 0]) & 1
        side_j = (masks[:, None] >> E[None, :, 1]) & 1
        best = max(best, int(np.max(np.sum(side_i != side_j, axis=1))))
    return best


def random_centered_psd(n: int, rank: int, rng: np.random.Generator,
                        return_factor: bool = False):
    """Gram matrix of ``n`` Gaussian vectors in R^rank shifted to sum zero."""
    if not 1 <= rank <= n:
        raise ValueError(f"rank must lie in [1, {n}]")
    U = rng.standard_normal((n, rank))
    U -= U.mean(axis=0)
    M = SymMatrix(U @ U.T)
    return (M, U) if return_factor else M


def random_psd(k: int, rank: int, rng: np.random.Generator) -> SymMatrix:
    V = rng.standard_normal((k, rank))
    return SymMatrix(V @ V.T)


def spherical_centered(k: int) -> SymMatrix:
    """Gram matrix of the regular simplex: 1 on the diagonal, -1/(k-1) off it."""
    if k < 2:
        raise ValueError("k must be at least 2")
    C = np.full((k, k), -1.0 / (k - 1))
    np.fill_diagonal(C, 1.0)
    return SymMatrix(C)
