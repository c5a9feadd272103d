"""Low-rank block-coordinate ascent for the clustering relaxation.

The relaxation maximizes

    sum_ij a_ij <|w| u + R x_i, |w| u + R x_j>

over unit vectors u, x_1..x_n in R^(n+1).  The objective is convex in each
block, so the maximum over the unit balls sits on the spheres, and each
block update has a closed form: normalize the partial gradient.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError
from .matrix import GramFactor, as_array, is_centered, min_eigenvalue

log = logging.getLogger(__name__)

_ZERO_GRAD = 1e-14


@dataclass(frozen=True)
class SolverParams:
    seed: int = 0
    restarts: int = 5
    max_sweeps: int = 20000
    rel_tol: float = 1e-11
    # absolute part of the certificate tolerance; a relative part of the
    # same size is added by `cert_tol`
    cert_abs: float = 1e-6
    cert_rel: float = 1e-6
    record_history: bool = False

    def cert_tol(self, value: float) -> float:
        return self.cert_abs + self.cert_rel * abs(value)


@dataclass
class SdpSolution:
    u_star: np.ndarray
    x_stars: np.ndarray  # rows are the unit vectors x_i
    primal_value: float
    dual_value: float | None
    iterations: int
    converged: bool
    restart: int = 0
    history: list[float] = field(default_factory=list)


def _matrix(A) -> np.ndarray:
    if isinstance(A, GramFactor):
        return A.gram()
    return as_array(A)


def _unit_rows(rng, n, d):
    X = rng.standard_normal((n, d))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def relaxation_objective(A, u, X, w_norm: float, R: float) -> float:
    Y = w_norm * np.asarray(u)[None, :] + R * np.asarray(X)
    return float(np.sum((_matrix(A) @ Y) * Y))


def tensor_objective(A_factor: GramFactor, u, X, w_norm: float, R: float) -> float:
    """Same objective written as |sum_i u_i (x) (|w| u + R x_i)|^2."""
    Y = w_norm * np.asarray(u)[None, :] + R * np.asarray(X)
    T = A_factor.vectors.T @ Y
    return float(np.sum(T * T))


def _ascent(A, c, total, a, R, X, u, params: SolverParams):
    n = A.shape[0]
    R2, aR = R * R, a * R
    diagA = np.diag(A).copy()
    AX = A @ X
    const = a * a * total

    def objective():
        return const + 2.0 * aR * float(c @ (X @ u)) + R2 * float(np.sum(X * AX))

    value = objective()
    history = [value] if params.record_history else []
    for sweep in range(1, params.max_sweeps + 1):
        for r in range(n):
            g = R2 * (AX[r] - diagA[r] * X[r])
            if aR != 0.0 and c[r] != 0.0:
                g = g + aR * c[r] * u
            norm = math.sqrt(float(g @ g))
            if norm < _ZERO_GRAD:
                continue
            new = g / norm
            delta = new - X[r]
            X[r] = new
            AX += np.outer(A[:, r], delta)
        if aR != 0.0:
            h = c @ X
            hn = math.sqrt(float(h @ h))
            if hn >= _ZERO_GRAD:
                u = h / hn
        # guard against drift in the incrementally updated product
        if sweep % 200 == 0:
            AX = A @ X
        new_value = objective()
        if params.record_history:
            history.append(new_value)
        change = abs(new_value - value)
        value = new_value
        if change <= params.rel_tol * max(abs(value), 1e-300) or change == 0.0:
            return X, u, objective(), sweep, True, history
    return X, u, value, params.max_sweeps, False, history


def solve_relaxation(A, w, R: float, params: SolverParams | None = None,
                     raise_on_failure: bool = True) -> SdpSolution:
    """Maximize the relaxation by block-coordinate ascent with restarts.

    ``w`` is the enclosing-ball center (only its norm enters) and ``R`` the
    radius.  The best restart wins; ties go to the lowest restart index.
    For centered ``A`` an eigenvalue-based upper bound is attached as
    ``dual_value``.
    """
    params = params or SolverParams()
    A = _matrix(A)
    if R < 0:
        raise ValueError("radius must be nonnegative")
    n = A.shape[0]
    d = n + 1
    a = float(np.linalg.norm(w))
    c = A.sum(axis=1)
    total = float(A.sum())
    best = None
    for restart in range(params.restarts):
        rng = np.random.default_rng([params.seed, restart])
        X0 = _unit_rows(rng, n, d)
        u0 = _unit_rows(rng, 1, d)[0]
        if R == 0.0:
            value = a * a * total
            run = (X0, u0, value, 0, True, [value])
        else:
            run = _ascent(A, c, total, a, R, X0, u0, params)
        X, u, value, sweeps, ok, hist = run
        if best is None or value > best.primal_value:
            best = SdpSolution(u, X, value, None, sweeps, ok, restart, hist)
    if not best.converged:
        msg = f"ascent did not converge within {params.max_sweeps} sweeps"
        if raise_on_failure:
            raise SolverError(msg)
        log.warning(msg)
    if is_centered(A, 1e-8):
        best.dual_value = R * R * dual_upper_bound(A, best.x_stars)
    return best


def grothendieck_max(A, params: SolverParams | None = None) -> tuple[float, np.ndarray]:
    """max sum_ij a_ij <x_i, x_j> over unit vectors; returns value and rows."""
    A = _matrix(A)
    sol = solve_relaxation(A, np.zeros(1), 1.0, params)
    return sol.primal_value, sol.x_stars


def _shift_bound(A, y):
    """Sum of y after the smallest uniform shift making Diag(y) - A PSD."""
    lam = min_eigenvalue(np.diag(y) - A)
    return float(np.sum(y)) - A.shape[0] * lam


def dual_upper_bound(A, vectors=None) -> float:
    """Upper bound on max <A, X> s.t. X PSD, X_ii = 1 (weak duality).

    Two feasible multiplier vectors y are tried and the smaller certified
    value returned: the Gershgorin row sums, and (when ``vectors`` is given)
    the stationarity multipliers y_i = <x_i, (A X)_i> of a primal point.
    Each candidate is shifted uniformly by the exact minimum eigenvalue of
    Diag(y) - A, so the result is valid whatever the quality of ``vectors``.
    """
    A = _matrix(A)
    bound = _shift_bound(A, np.sum(np.abs(A), axis=1))
    if vectors is not None:
        X = np.asarray(vectors, dtype=float)
        y = np.sum(X * (A @ X), axis=1)
        bound = min(bound, _shift_bound(A, y))
    return bound
