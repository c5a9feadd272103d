"""Approximation algorithms and exact oracles for kernel clustering Clust(A|B)."""

from .ball import (EnclosingBall, SubsetStats, best_subset, diameter_pair,
                   jung_bound_holds, min_enclosing_ball, subset_stats)
from .errors import (DegenerateB, EmptyInput, KernelClusteringError, NotCentered, NotPsd,
                     ParseError, SolverError, TooLarge)
from .matrix import (GramFactor, Spectrum, SymMatrix, gram_factor, is_centered, is_psd,
                     read_matrix, symmetric_eig)
from .partition import (C2, C3, ConicalPartition, MomentReport, expected_max_gaussian,
                        gaussian_ratio, partition_moment_mc, propeller_search,
                        propeller_value, r_constant, regular_simplex)
from .pipeline import (ClusterParams, KernelInstance, SolveReport, approximate_clust,
                       approximate_clust_noncentered, brute_force_clust,
                       grothendieck_inequality_check, identity_reduction, solve)
from .reductions import Graph, laplacian, maxcut_exact, random_centered_psd
from .rounding import Assignment, assignment_value, gaussian_round, round_best_of
from .sdp import SdpSolution, SolverParams, dual_upper_bound, grothendieck_max, solve_relaxation

__version__ = "0.1.0"
