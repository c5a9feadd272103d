"""Gaussian rounding of relaxation vectors into label assignments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import as_array

# trials per vectorized batch; bounded so T*n*k work arrays stay small
_BATCH = 256


@dataclass(frozen=True)
class Assignment:
    """Labels are 0-based indices into the rows of B."""

    labels: np.ndarray
    value: float

    def one_based(self) -> list[int]:
        return [int(x) + 1 for x in self.labels]


def assignment_value(A, B, labels) -> float:
    """sum_ij a_ij b_{l(i) l(j)} summed in fixed row-major order."""
    A = as_array(A)
    B = as_array(B)
    lab = np.asarray(labels, dtype=np.intp)
    if lab.shape != (A.shape[0],):
        raise ValueError(f"need {A.shape[0]} labels, got shape {lab.shape}")
    if lab.size and (lab.min() < 0 or lab.max() >= B.shape[0]):
        raise ValueError(f"labels must lie in 0..{B.shape[0] - 1}")
    return float(np.sum(A * B[np.ix_(lab, lab)]))


def batch_values(A, B, labels) -> np.ndarray:
    """Objective values for a stack of label vectors of shape (T, n)."""
    A = as_array(A)
    B = as_array(B)
    L = np.asarray(labels)
    T, n = L.shape
    k = B.shape[0]
    M = np.zeros((T, n, k))
    M[np.arange(T)[:, None], np.arange(n)[None, :], L] = 1.0
    AM = (A @ M.transpose(1, 0, 2).reshape(n, T * k)).reshape(n, T, k).transpose(1, 0, 2)
    return np.sum(AM * B[L], axis=(1, 2))


def stream(seed: int, s: int) -> np.random.Generator:
    """Generator for the s-direction rounding; trial t consumes chunk t."""
    return np.random.default_rng([seed, s])


def gaussian_round(x_stars, label_set, rng: np.random.Generator, trials: int | None = None):
    """Assign each row x_r the label whose Gaussian direction maximizes <g, x_r>.

    Draws ``len(label_set)`` i.i.d. standard Gaussian vectors per trial.
    Floating-point ties go to the earliest entry of ``label_set``.  With
    ``trials`` given the result has shape (trials, n).
    """
    X = np.asarray(x_stars, dtype=float)
    S = np.asarray(label_set, dtype=np.intp)
    if S.size < 2:
        raise ValueError("need at least two labels")
    t = 1 if trials is None else trials
    G = rng.standard_normal((t, S.size, X.shape[1]))
    scores = np.einsum("tsd,nd->tns", G, X)
    labels = S[np.argmax(scores, axis=2)]
    return labels[0] if trials is None else labels


@dataclass(frozen=True)
class RoundStats:
    mean: float
    std_error: float
    trials: int
    best_value: float

    @classmethod
    def from_values(cls, values: np.ndarray) -> "RoundStats":
        T = values.size
        se = float(np.std(values, ddof=1) / math.sqrt(T)) if T > 1 else math.inf
        return cls(float(values.mean()), se, T, float(values.max()))


@dataclass
class RoundingResult:
    best: Assignment
    best_s: int
    per_s: dict[int, RoundStats] = field(default_factory=dict)
    # per-trial best over all enabled s, i.e. one run of the full algorithm
    combined: RoundStats | None = None


def round_best_of(A, B, x_stars, label_sets: dict[int, tuple[int, ...]], trials: int = 1000,
                  seed: int = 0) -> RoundingResult:
    """Run ``trials`` independent roundings for every label set.

    ``label_sets`` maps s to the chosen labels, e.g. ``{2: (p, q), 3: (a, b, c)}``.
    The returned best assignment maximizes (value, -trial, -s) so the result
    does not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    A = as_array(A)
    B = as_array(B)
    X = np.asarray(x_stars, dtype=float)
    s_values = sorted(label_sets)
    values = {}
    best = None  # (value, -trial, -s, labels)
    for s in s_values:
        rng = stream(seed, s)
        vals = np.empty(trials)
        for start in range(0, trials, _BATCH):
            t = min(_BATCH, trials - start)
            L = gaussian_round(X, label_sets[s], rng, trials=t)
            v = batch_values(A, B, L)
            vals[start:start + t] = v
            i = int(np.argmax(v))
            key = (v[i], -(start + i), -s)
            if best is None or key > best[:3]:
                best = (*key, L[i].copy())
        values[s] = vals
    labels = best[3]
    assignment = Assignment(labels, assignment_value(A, B, labels))
    per_s = {s: RoundStats.from_values(values[s]) for s in s_values}
    combined = RoundStats.from_values(np.max(np.stack([values[s] for s in s_values]), axis=0))
    return RoundingResult(assignment, -best[2], per_s, combined)
