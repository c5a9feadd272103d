"""Gaussian moments of conical partitions and the constants R(k), C(2), C(3).

For a partition A_1..A_m of R^d the quantity of interest is

    total = sum_j | integral_{A_j} x dgamma(x) |^2

with gamma the standard Gaussian measure.  Regular simplicial partitions
give R(k) = E[max of k i.i.d. N(0,1)]^2 / (k - 1); the planar 120 degree
propeller gives 9 / (8 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .matrix import gram_factor

QUAD_LIMIT = 12.0
C2 = 1.0 / math.pi
C3 = 9.0 / (8.0 * math.pi)


def _normal_cdf(x):
    # erfc form keeps full relative accuracy deep in the left tail
    return 0.5 * special.erfc(-x / math.sqrt(2.0))


def expected_max_gaussian(k: int) -> float:
    """E[max(g_1..g_k)] for i.i.d. standard normals by adaptive quadrature."""
    if k < 2:
        raise ValueError("k must be at least 2")

    def integrand(x):
        return k * x * math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi) * _normal_cdf(x) ** (k - 1)

    # split at 0 so both lobes are resolved separately
    left, _ = integrate.quad(integrand, -QUAD_LIMIT, 0.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    right, _ = integrate.quad(integrand, 0.0, QUAD_LIMIT, epsabs=1e-13, epsrel=1e-13, limit=200)
    return left + right


def r_constant(k: int) -> float:
    """R(k) = E[max of k i.i.d. standard normals]^2 / (k - 1)."""
    return expected_max_gaussian(k) ** 2 / (k - 1)


def crude_r_bound(k: int) -> float:
    return math.e * math.log(k) / (k - 1)


def r_table(kmax: int) -> dict[int, float]:
    return {k: r_constant(k) for k in range(2, kmax + 1)}


def propeller_value(angles) -> float:
    """sum_j sin^2(alpha_j / 2) / (2 pi) for three planar cones of the given angles."""
    a = np.asarray(angles, dtype=float)
    if a.shape != (3,) or np.any(a < 0):
        raise ValueError("need three nonnegative angles")
    if abs(a.sum() - 2.0 * math.pi) > 1e-12:
        raise ValueError("angles must sum to 2*pi")
    return float(np.sum(np.sin(a / 2.0) ** 2) / (2.0 * math.pi))


def regular_simplex(k: int) -> np.ndarray:
    """k unit vectors in R^(k-1) with pairwise inner products -1/(k-1)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    E = np.eye(k) - 1.0 / k
    # orthonormal basis of the sum-zero hyperplane
    Q, _ = np.linalg.qr(E[:, : k - 1])
    V = E @ Q
    return V / np.linalg.norm(V, axis=1, keepdims=True)


@dataclass(frozen=True)
class ConicalPartition:
    """Cells P_j = {x : <x, z_j> = max_i <x, z_i>}."""

    generators: np.ndarray

    def __post_init__(self):
        Z = np.asarray(self.generators, dtype=float)
        if Z.ndim != 2 or Z.shape[0] < 2:
            raise ValueError("need at least two generator vectors")
        d = np.sqrt(np.sum((Z[:, None] - Z[None]) ** 2, axis=2))
        np.fill_diagonal(d, np.inf)
        if d.min() <= 1e-12:
            raise ValueError("generators must be pairwise distinct")
        object.__setattr__(self, "generators", Z)

    @property
    def m(self) -> int:
        return self.generators.shape[0]

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def cells(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(X @ self.generators.T, axis=1)


@dataclass(frozen=True)
class MomentReport:
    moments: np.ndarray  # row j estimates integral over cell j of x dgamma
    total: float
    std_error: float
    samples: int
    # per-coordinate standard error of sum_j moments[j]
    sum_std_error: float


def moments_from_samples(partition: ConicalPartition, X: np.ndarray) -> MomentReport:
    N, d = X.shape
    cell = partition.cells(X)
    m = partition.m
    sums = np.zeros((m, d))
    for c in range(d):
        sums[:, c] = np.bincount(cell, weights=X[:, c], minlength=m)
    Z = sums / N
    total = float(np.sum(Z * Z))
    # delta method: total = |mean(Y)|^2 with Y_i = x_i placed in its cell's
    # block, so grad . Y_i = 2 <z_cell(i), x_i>
    proj = np.einsum("nd,nd->n", X, Z[cell])
    se = 2.0 * float(np.std(proj, ddof=1)) / math.sqrt(N)
    sum_se = float(np.max(np.std(X, axis=0, ddof=1))) / math.sqrt(N)
    return MomentReport(Z, total, se, N, sum_se)


def partition_moment_mc(partition: ConicalPartition, samples: int,
                        rng: np.random.Generator) -> MomentReport:
    """Monte Carlo Gaussian moments of each cell (ties go to the lowest index)."""
    if samples < 10_000:
        raise ValueError("use at least 10^4 samples")
    X = rng.standard_normal((samples, partition.dim))
    return moments_from_samples(partition, X)


@dataclass(frozen=True)
class RatioEstimate:
    value: float
    std_error: float
    expected_max: float
    trace: float


def gaussian_ratio(covariance, samples: int, rng: np.random.Generator) -> RatioEstimate:
    """Monte Carlo estimate of E[max_j g_j]^2 / sum_j E[g_j^2] for g ~ N(0, covariance)."""
    factor = gram_factor(covariance)
    trace = float(np.trace(factor.gram()))
    if trace <= 0:
        raise ValueError("covariance has zero trace")
    V = factor.vectors
    total = sq = 0.0
    drawn = 0
    while drawn < samples:
        t = min(1 << 18, samples - drawn)
        eta = rng.standard_normal((t, V.shape[1]))
        mx = np.max(eta @ V.T, axis=1)
        total += mx.sum()
        sq += mx @ mx
        drawn += t
    mean = total / samples
    se_mean = math.sqrt(max(sq / samples - mean ** 2, 0.0) / samples)
    return RatioEstimate(mean ** 2 / trace, 2.0 * abs(mean) * se_mean / trace, mean, trace)


@dataclass(frozen=True)
class SearchResult:
    partition: ConicalPartition
    total: float
    std_error: float
    # value of the winning partition on the search sample (optimistically biased)
    search_total: float
    restarts: int
    heuristic: bool = True


def _moment_step(Z, X):
    """Replace generators by the moments of their cells; empty cells keep theirs."""
    N, d = X.shape
    m = Z.shape[0]
    cell = np.argmax(X @ Z.T, axis=1)
    sums = np.empty((m, d))
    for c in range(d):
        sums[:, c] = np.bincount(cell, weights=X[:, c], minlength=m)
    counts = np.bincount(cell, minlength=m)
    M = sums / N
    new = np.where(counts[:, None] > 0, M, Z)
    return new, float(np.sum(M * M))


def _total(Z, X):
    return _moment_step(Z, X)[1]


def _separate(Z, rng, scale=1e-9):
    """Nudge coincident generators apart so the partition stays well defined."""
    Z = Z.copy()
    for i in range(Z.shape[0]):
        for j in range(i):
            if np.linalg.norm(Z[i] - Z[j]) <= 1e-12:
                Z[i] += scale * rng.standard_normal(Z.shape[1])
    return Z


def propeller_search(k: int, restarts: int, samples: int, rng: np.random.Generator,
                     search_samples: int | None = None, fixed_point_steps: int = 30,
                     perturb_steps: int = 40, step: float = 0.05) -> SearchResult:
    """Heuristic local search for a k-cell partition of R^(k-1) with large total.

    Restricted to simplicial conical partitions.  One shared Gaussian sample
    (common random numbers) scores every candidate.  Each restart starts from
    random unit generators, runs moment fixed-point steps (replace z_j by the
    moment of its own cell, which never decreases the total) and then a
    perturbation phase that accepts random coordinate moves only when they
    improve the score.  The winner is re-scored on a fresh independent sample
    of ``samples`` points, which is the reported total.
    """
    if not 2 <= k <= 8:
        raise ValueError("k must lie in [2, 8]")
    d = k - 1
    n_search = search_samples or min(samples, 100_000)
    X = rng.standard_normal((n_search, d))
    best_Z, best_val = None, -np.inf
    for _ in range(restarts):
        Z = rng.standard_normal((k, d))
        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
        val = _total(Z, X)
        for _ in range(fixed_point_steps):
            Z_new = _separate(_moment_step(Z, X)[0], rng)
            v_new = _total(Z_new, X)
            if v_new <= val + 1e-15:
                break
            Z, val = Z_new, v_new
        for _ in range(perturb_steps):
            cand = Z.copy()
            j = rng.integers(k)
            c = rng.integers(d)
            cand[j, c] += step * rng.standard_normal() * max(np.linalg.norm(Z[j]), 1e-3)
            cand = _separate(cand, rng)
            v = _total(cand, X)
            if v > val:
                Z, val = cand, v
        if val > best_val:
            best_Z, best_val = Z, val
    part = ConicalPartition(best_Z)
    fresh = partition_moment_mc(part, max(samples, 10_000), rng)
    return SearchResult(part, fresh.total, fresh.std_error, best_val, restarts)
