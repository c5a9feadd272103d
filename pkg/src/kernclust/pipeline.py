"""End-to-end approximation of Clust(A|B) and the exact oracles around it."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import ball as geom
from .errors import DegenerateB, NotCentered, NotPsd, TooLarge
from .matrix import SymMatrix, as_array, gram_factor, is_centered, is_psd
from .partition import r_constant
from .reductions import spherical_centered
from .rounding import Assignment, RoundingResult, assignment_value, batch_values, round_best_of
from .sdp import SolverParams, SdpSolution, dual_upper_bound, grothendieck_max, solve_relaxation

log = logging.getLogger(__name__)

CENTER_TOL = 1e-8
BRUTE_FORCE_LIMIT = 10**7
NONCENTERED_CAP = 1.0 + 1.5 * math.pi


@dataclass(frozen=True)
class KernelInstance:
    A: SymMatrix
    B: SymMatrix

    def __post_init__(self):
        for name in ("A", "B"):
            M = getattr(self, name)
            if not isinstance(M, SymMatrix):
                M = SymMatrix(M)
                object.__setattr__(self, name, M)
            if not is_psd(M):
                raise NotPsd(f"{name} is not positive semidefinite")

    @property
    def n(self) -> int:
        return self.A.dim

    @property
    def k(self) -> int:
        return self.B.dim

    @property
    def centered_A(self) -> bool:
        return is_centered(self.A, CENTER_TOL)

    @property
    def centered_B(self) -> bool:
        return is_centered(self.B, CENTER_TOL)

    @property
    def spherical_B(self) -> bool:
        return bool(np.all(np.abs(np.diag(self.B.entries) - 1.0) <= 1e-9))


@dataclass(frozen=True)
class ClusterParams:
    solver: SolverParams = field(default_factory=SolverParams)
    trials: int = 1000
    seed: int = 0
    # extra subset sizes s >= 4 for the generalized rounding
    enable_s: tuple[int, ...] = ()


@dataclass
class SolveReport:
    assignment: Assignment
    sdp_primal: float
    sdp_dual: float | None
    apriori_ratio: float
    empirical_ratio: float
    variant: str
    radius: float = 0.0
    center: np.ndarray | None = None
    diameter_pair: tuple[int, int] | None = None
    diameter: float = 0.0
    label_sets: dict[int, tuple[int, ...]] = field(default_factory=dict)
    rounding: RoundingResult | None = None
    sdp: SdpSolution | None = None

    @property
    def value(self) -> float:
        return self.assignment.value

    def to_dict(self) -> dict:
        out = {
            "variant": self.variant,
            "labels": self.assignment.one_based(),
            "value": self.assignment.value,
            "sdp_primal": self.sdp_primal,
            "sdp_dual": self.sdp_dual,
            "apriori_ratio": self.apriori_ratio,
            "empirical_ratio": self.empirical_ratio,
            "radius": self.radius,
            "diameter": self.diameter,
            "label_sets": {str(s): [i + 1 for i in S] for s, S in self.label_sets.items()},
        }
        if self.diameter_pair is not None:
            out["diameter_pair"] = [i + 1 for i in self.diameter_pair]
        if self.rounding is not None:
            out["rounding"] = {
                str(s): {"mean": st.mean, "std_error": st.std_error,
                         "trials": st.trials, "best": st.best_value}
                for s, st in self.rounding.per_s.items()
            }
            c = self.rounding.combined
            out["rounding"]["combined"] = {"mean": c.mean, "std_error": c.std_error,
                                           "trials": c.trials, "best": c.best_value}
        if self.sdp is not None:
            out["sdp_sweeps"] = self.sdp.iterations
            out["sdp_converged"] = self.sdp.converged
        return out


def _ratio(sdp_value: float, value: float) -> float:
    if abs(value) <= 1e-12 and abs(sdp_value) <= 1e-12:
        return 1.0
    if value <= 0:
        return math.inf
    return sdp_value / value


def _trivial_report(instance: KernelInstance, variant: str) -> SolveReport:
    labels = np.zeros(instance.n, dtype=np.intp)
    value = assignment_value(instance.A, instance.B, labels)
    return SolveReport(Assignment(labels, value), value, value, 1.0, 1.0, variant)


def apriori_terms(R: float, label_stats: dict[int, float]) -> dict[int, float]:
    """Guarantee factor (s-1) R^2 / (R(s) * spread_s) for each subset size.

    For s = 2 this is 2 pi R^2 / D^2 and for s = 3 it is
    16 pi R^2 / (9 spread_3).
    """
    out = {}
    for s, spread in label_stats.items():
        if spread <= 0:
            out[s] = math.inf
        elif s == 2:
            out[s] = math.pi * R * R / spread
        elif s == 3:
            out[s] = 16.0 * math.pi * R * R / (9.0 * spread)
        else:
            out[s] = (s - 1) * R * R / (r_constant(s) * spread)
    return out


def approximate_clust(instance: KernelInstance, params: ClusterParams | None = None) -> SolveReport:
    """SDP relaxation plus 2- and 3-direction Gaussian rounding (centered A)."""
    params = params or ClusterParams()
    if not instance.centered_A:
        raise NotCentered("A is not centered; use approximate_clust_noncentered")
    A = instance.A.entries
    B = instance.B.entries
    k = instance.k
    V = gram_factor(B).vectors
    if k == 1 or V.shape[1] == 0:
        return _trivial_report(instance, "centered")
    ball = geom.min_enclosing_ball(V)
    R = ball.radius
    if R <= 1e-12 * max(1.0, float(np.max(np.abs(B)))):
        return _trivial_report(instance, "centered")
    p, q, D = geom.diameter_pair(V)
    label_sets = {2: (p, q)}
    spreads = {2: D * D / 2.0}
    sizes = [3] if k >= 3 else []
    sizes += [s for s in params.enable_s if 4 <= s <= k]
    factor = gram_factor(B)
    for s in sizes:
        st = geom.best_subset(factor, s)
        label_sets[s] = st.subset
        spreads[s] = st.spread
    sdp = solve_relaxation(A, ball.center, R, params.solver)
    rounding = round_best_of(A, B, sdp.x_stars, label_sets, params.trials, params.seed)
    apriori = min(apriori_terms(R, spreads).values())
    return SolveReport(
        assignment=rounding.best,
        sdp_primal=sdp.primal_value,
        sdp_dual=sdp.dual_value,
        apriori_ratio=apriori,
        empirical_ratio=_ratio(sdp.primal_value, rounding.best.value),
        variant="centered",
        radius=R,
        center=ball.center,
        diameter_pair=(p, q),
        diameter=D,
        label_sets=label_sets,
        rounding=rounding,
        sdp=sdp,
    )


def noncentered_ratio(V: np.ndarray) -> tuple[float, int, int, float, np.ndarray, float]:
    """Guarantee 1 + 2 pi R'^2 / D^2 for the midpoint-centered variant.

    Returns (ratio, p, q, D, w', R').
    """
    p, q, D = geom.diameter_pair(V)
    if D <= 0:
        raise DegenerateB("all Gram vectors of B coincide")
    w = 0.5 * (V[p] + V[q])
    Rp = float(np.max(np.linalg.norm(V - w, axis=1)))
    return 1.0 + 2.0 * math.pi * Rp * Rp / (D * D), p, q, D, w, Rp


def approximate_clust_noncentered(instance: KernelInstance,
                                  params: ClusterParams | None = None) -> SolveReport:
    """Midpoint variant for arbitrary PSD A: center w' = (v_p + v_q)/2,
    radius R' = max_i |v_i - w'|, rounding with two directions on {p, q}.

    ``sdp_dual`` holds the certified bound (|w'| sqrt(sum a) + R' sqrt(d(A)))^2
    with d(A) the eigenvalue dual bound of the diagonal-constrained program.
    """
    params = params or ClusterParams()
    A = instance.A.entries
    B = instance.B.entries
    V = gram_factor(B).vectors
    if instance.k == 1 or V.shape[1] == 0:
        raise DegenerateB("all Gram vectors of B coincide")
    ratio, p, q, D, w, Rp = noncentered_ratio(V)
    sdp = solve_relaxation(A, w, Rp, params.solver)
    total = max(float(A.sum()), 0.0)
    q_bound = max(dual_upper_bound(A, sdp.x_stars), 0.0)
    bound = (float(np.linalg.norm(w)) * math.sqrt(total) + Rp * math.sqrt(q_bound)) ** 2
    rounding = round_best_of(A, B, sdp.x_stars, {2: (p, q)}, params.trials, params.seed)
    return SolveReport(
        assignment=rounding.best,
        sdp_primal=sdp.primal_value,
        sdp_dual=bound,
        apriori_ratio=ratio,
        empirical_ratio=_ratio(sdp.primal_value, rounding.best.value),
        variant="noncentered",
        radius=Rp,
        center=w,
        diameter_pair=(p, q),
        diameter=D,
        label_sets={2: (p, q)},
        rounding=rounding,
        sdp=sdp,
    )


def solve(instance: KernelInstance, params: ClusterParams | None = None) -> SolveReport:
    """Dispatch on whether A is centered; degenerate B short-circuits."""
    V = gram_factor(instance.B).vectors
    degenerate = instance.k == 1 or V.shape[1] == 0 or geom.diameter_pair(V)[2] <= 1e-12
    variant = "centered" if instance.centered_A else "noncentered"
    if degenerate:
        return _trivial_report(instance, variant)
    if variant == "centered":
        return approximate_clust(instance, params)
    return approximate_clust_noncentered(instance, params)


def brute_force_clust(A, B, limit: int = BRUTE_FORCE_LIMIT, chunk: int = 1 << 15) -> Assignment:
    """Exact optimum by enumerating all k^n labelings in odometer order.

    Labels are read with vertex 0 as the most significant digit, so the
    first optimum found is the lexicographically smallest.
    """
    A = as_array(A)
    B = as_array(B)
    n, k = A.shape[0], B.shape[0]
    total = k ** n
    if total > limit:
        raise TooLarge(f"k^n = {total} exceeds the limit {limit}")
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    scale = max(1.0, float(np.abs(A).sum() * np.abs(B).max()))
    best_val, best_idx = -np.inf, 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        L = (idx[:, None] // powers[None, :]) % k
        vals = batch_values(A, B, L)
        i = int(np.argmax(vals))
        if vals[i] > best_val + 1e-12 * scale:
            best_val, best_idx = float(vals[i]), int(idx[i])
    labels = (best_idx // powers) % k
    return Assignment(labels.astype(np.intp), assignment_value(A, B, labels))


def identity_reduction(k: int) -> SymMatrix:
    """C = (k/(k-1)) <e_i - e, e_j - e>: 1 on the diagonal, -1/(k-1) off it.

    For centered A every labeling satisfies
    value(A, I_k) = ((k - 1)/k) value(A, C).
    """
    return spherical_centered(k)


def identity_scaling(k: int) -> float:
    return (k - 1) / k


@dataclass(frozen=True)
class GrothendieckCheck:
    lhs: float
    lhs_upper: float
    clust: float
    factor: float
    holds: bool
    labels: np.ndarray


def grothendieck_inequality_check(A, vectors, params: SolverParams | None = None,
                                  limit: int = BRUTE_FORCE_LIMIT) -> GrothendieckCheck:
    """Check max_x sum a_ij <x_i,x_j> <= (8 pi/9)(1 - 1/k) max_sigma sum a_ij <v_s(i), v_s(j)>.

    ``vectors`` are the k unit vectors v_1..v_k (rows); ``A`` must be
    centered.  The right side is evaluated by brute force.
    """
    params = params or SolverParams()
    A = as_array(A)
    if not is_centered(A, CENTER_TOL):
        raise NotCentered("the inequality needs a centered A")
    V = np.asarray(vectors, dtype=float)
    k = V.shape[0]
    lhs, X = grothendieck_max(A, params)
    upper = dual_upper_bound(A, X)
    best = brute_force_clust(A, V @ V.T, limit)
    factor = 8.0 * math.pi / 9.0 * (1.0 - 1.0 / k)
    holds = lhs <= factor * best.value + params.cert_tol(lhs)
    return GrothendieckCheck(lhs, upper, best.value, factor, holds, best.labels)
