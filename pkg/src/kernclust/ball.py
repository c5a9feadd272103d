"""Geometry of the comparison vectors v_1..v_k.

Smallest enclosing ball, diameter pair, best s-subset and the Phi/Psi
subset statistics used by the rounding analysis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput
from .matrix import GramFactor

MAX_SUBSET_K = 30


@dataclass(frozen=True)
class EnclosingBall:
    center: np.ndarray
    radius: float
    # convex weights expressing the center as a combination of the points
    weights: np.ndarray


def _points(points) -> np.ndarray:
    if isinstance(points, GramFactor):
        points = points.vectors
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    if P.shape[0] == 0:
        raise EmptyInput("need at least one point")
    return P


def _dual_step(P, lam, c, sq):
    """One away-step Frank-Wolfe iteration on the ball dual; returns the gap."""
    dist = np.sum((P - c) ** 2, axis=1)
    grad = dist - c @ c
    fval = lam @ sq - c @ c
    far = int(np.argmax(dist))
    gap = dist[far] - fval
    support = np.flatnonzero(lam > 0)
    away = support[int(np.argmin(grad[support]))]
    fw_gain = grad[far] - lam @ grad
    away_gain = lam @ grad - grad[away]
    if fw_gain >= away_gain:
        d = -lam.copy()
        d[far] += 1.0
        tmax = 1.0
    else:
        d = lam.copy()
        d[away] -= 1.0
        la = lam[away]
        tmax = la / (1.0 - la) if la < 1.0 else np.inf
    Pd = d @ P
    curv = Pd @ Pd
    slope = grad @ d
    if curv <= 0 or slope <= 0:
        return lam, c, gap
    t = min(slope / (2.0 * curv), tmax)
    lam = lam + t * d
    lam[lam < 1e-15] = 0.0
    lam /= lam.sum()
    return lam, lam @ P, gap


def _kkt_polish(P, lam):
    """Circumcenter of the current support inside its affine hull."""
    S = np.flatnonzero(lam > 1e-12)
    G = P[S] @ P[S].T
    m = len(S)
    K = np.zeros((m + 1, m + 1))
    K[:m, :m] = 2.0 * G
    K[:m, m] = 1.0
    K[m, :m] = 1.0
    rhs = np.append(np.diag(G), 1.0)
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    if np.any(sol[:m] < -1e-12):
        return None
    new = np.zeros_like(lam)
    new[S] = np.clip(sol[:m], 0.0, None)
    new /= new.sum()
    return new


def min_enclosing_ball(points, tol: float = 1e-7, max_iter: int = 20000) -> EnclosingBall:
    """Smallest Euclidean ball containing ``points`` (rows).

    Badoiu-Clarkson center updates give a warm start; away-step Frank-Wolfe
    with exact line search on the dual quadratic program then drives the
    duality gap below ``tol**2``, and a KKT solve on the support set polishes
    the center to machine precision.  The reported radius is always the
    largest distance from the returned center, so the ball is valid even if
    the polish is rejected.
    """
    P = _points(points)
    k = P.shape[0]
    if k == 1:
        return EnclosingBall(P[0].copy(), 0.0, np.ones(1))
    sq = np.sum(P * P, axis=1)
    scale = 1.0 + math.sqrt(float(sq.max()))
    lam = np.zeros(k)
    lam[0] = 1.0
    c = P[0].copy()
    for i in range(1, min(100, max_iter)):
        far = int(np.argmax(np.sum((P - c) ** 2, axis=1)))
        lam *= i / (i + 1.0)
        lam[far] += 1.0 / (i + 1.0)
        c = lam @ P
    for _ in range(max_iter):
        lam, c, gap = _dual_step(P, lam, c, sq)
        if gap <= (tol * scale) ** 2 * 1e-4:
            break
    best_r = float(np.sqrt(np.max(np.sum((P - c) ** 2, axis=1))))
    polished = _kkt_polish(P, lam)
    if polished is not None:
        c2 = polished @ P
        r2 = float(np.sqrt(np.max(np.sum((P - c2) ** 2, axis=1))))
        if r2 <= best_r:
            lam, c, best_r = polished, c2, r2
    return EnclosingBall(c, best_r, lam)


def ball_dual_lower_bound(points, weights) -> float:
    """Radius lower bound from the dual: sqrt(sum w_i |p_i|^2 - |sum w_i p_i|^2).

    Valid for any convex weights; used to certify minimality.
    """
    P = _points(points)
    w = np.asarray(weights, dtype=float)
    c = w @ P
    return math.sqrt(max(0.0, float(w @ np.sum(P * P, axis=1) - c @ c)))


def diameter_pair(points, rel_tol: float = 1e-12) -> tuple[int, int, float]:
    """Indices ``(p, q)``, ``p < q``, of a farthest pair and the diameter.

    Among pairs within ``rel_tol`` of the maximum the lexicographically
    smallest is returned.
    """
    P = _points(points)
    k = P.shape[0]
    if k < 2:
        raise EmptyInput("diameter needs at least two points")
    diff = P[:, None, :] - P[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    D = float(dist.max())
    cutoff = D * (1.0 - rel_tol)
    for p in range(k):
        for q in range(p + 1, k):
            if dist[p, q] >= cutoff:
                return p, q, float(dist[p, q])
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class SubsetStats:
    subset: tuple[int, ...]
    phi: float
    psi: float
    centroid: np.ndarray
    spread: float

    @property
    def s(self) -> int:
        return len(self.subset)


def subset_stats(B_factor: GramFactor, subset) -> SubsetStats:
    V = B_factor.vectors
    S = tuple(int(i) for i in subset)
    s = len(S)
    if s < 2:
        raise ValueError("subset needs at least two labels")
    Vs = V[list(S)]
    Bs = Vs @ Vs.T
    phi = float(np.trace(Bs)) / s
    psi = float(Bs.sum() - np.trace(Bs)) / (s * (s - 1))
    centroid = Vs.mean(axis=0)
    spread = float(np.sum((Vs - centroid) ** 2))
    return SubsetStats(S, phi, psi, centroid, spread)


def best_subset(B_factor: GramFactor, s: int) -> SubsetStats:
    """Exhaustive search for the s-subset of labels with maximal spread
    sum_{l in S} |v_l - mean_S|^2; ties go to the lexicographically first."""
    k = B_factor.count
    if not 2 <= s <= k:
        raise ValueError(f"subset size s={s} must lie in [2, {k}]")
    if k > MAX_SUBSET_K:
        raise ValueError(f"k={k} exceeds the exhaustive-search cap {MAX_SUBSET_K}")
    V = B_factor.vectors
    scale = max(1.0, float(np.max(np.sum(V * V, axis=1))))
    best, best_spread = None, -np.inf
    for S in itertools.combinations(range(k), s):
        Vs = V[list(S)]
        spread = float(np.sum((Vs - Vs.mean(axis=0)) ** 2))
        if spread > best_spread + 1e-12 * scale:
            best, best_spread = S, spread
    return subset_stats(B_factor, best)


def jung_bound(D: float, k: int) -> float:
    return D * math.sqrt((k - 1) / (2.0 * k))


def jung_bound_holds(ball: EnclosingBall, D: float, k: int, tol: float = 1e-9) -> bool:
    return ball.radius <= jung_bound(D, k) + tol
