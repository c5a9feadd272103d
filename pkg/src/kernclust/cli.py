"""Command line entry point: ``kernclust <subcommand>``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from .errors import KernelClusteringError
from .matrix import SymMatrix, format_matrix_text, read_matrix
from .partition import C3, propeller_search, r_table
from .pipeline import ClusterParams, KernelInstance, brute_force_clust, solve
from .reductions import (GROTHENDIECK_B, MAXCUT_LIMIT, Graph, laplacian, maxcut_exact,
                         random_centered_psd, read_edge_list)
from .sdp import SolverParams


def _int_like(text: str) -> int:
    # accepts "1e6"
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"{text} is not an integer")
    return int(value)


def _add_solver_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--max-sweeps", type=_int_like, default=20000)
    p.add_argument("--rel-tol", type=float, default=1e-11)
    p.add_argument("--trials", type=_int_like, default=1000)
    p.add_argument("--enable-s", type=int, nargs="*", default=[],
                   help="extra subset sizes s >= 4 for the generalized rounding")


def _params(args) -> ClusterParams:
    solver = SolverParams(seed=args.seed, restarts=args.restarts,
                          max_sweeps=args.max_sweeps, rel_tol=args.rel_tol)
    return ClusterParams(solver=solver, trials=args.trials, seed=args.seed,
                         enable_s=tuple(args.enable_s))


def _comparison(args) -> SymMatrix:
    if args.identity is not None:
        return SymMatrix(np.eye(args.identity))
    if args.comparison is None:
        raise SystemExit("one of --comparison or --identity is required")
    return read_matrix(args.comparison)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_solve(args):
    instance = KernelInstance(read_matrix(args.matrix), _comparison(args))
    report = solve(instance, _params(args))
    _emit(report.to_dict())


def cmd_oracle(args):
    A = read_matrix(args.matrix)
    B = _comparison(args)
    best = brute_force_clust(A, B, limit=args.limit)
    _emit({"labels": best.one_based(), "value": best.value})


def cmd_maxcut(args):
    G = read_edge_list(args.graph)
    A = laplacian(G)
    report = solve(KernelInstance(A, SymMatrix(GROTHENDIECK_B)), _params(args))
    out = {"n": G.n, "m": len(G.edges),
           "approx_cut": report.value / 4.0,
           "side": [1 if lab == report.assignment.labels[0] else 0
                    for lab in report.assignment.labels],
           "sdp_bound": report.sdp_primal / 4.0}
    if G.n <= MAXCUT_LIMIT:
        out["maxcut"] = maxcut_exact(G)
    _emit(out)


def cmd_geometry_table(args):
    start = time.perf_counter()
    table = r_table(args.kmax)
    if args.json:
        _emit({str(k): v for k, v in table.items()})
    else:
        for k, v in table.items():
            print(f"{k:3d}  {v:.10f}")
    logging.getLogger(__name__).info("table computed in %.3fs", time.perf_counter() - start)


def cmd_propeller_search(args):
    rng = np.random.default_rng(args.seed)
    res = propeller_search(args.k, args.restarts, args.samples, rng)
    _emit({
        "k": args.k,
        "total": res.total,
        "std_error": res.std_error,
        "search_total": res.search_total,
        "propeller_value": C3,
        "consistent_with_conjecture": res.total <= C3 + 4 * res.std_error,
        "generators": res.partition.generators.tolist(),
        "note": "heuristic local search; numerical evidence only",
    })


def cmd_bench(args):
    rng = np.random.default_rng(args.seed)
    if args.family == "laplacian":
        A = laplacian(Graph.random(args.n, args.p, rng))
    else:
        A = random_centered_psd(args.n, args.rank or args.n, rng)
    if args.identity is None and args.comparison is None:
        sys.stdout.write(format_matrix_text(A))
        return
    instance = KernelInstance(A, _comparison(args))
    start = time.perf_counter()
    report = solve(instance, _params(args))
    out = report.to_dict()
    out["seconds"] = time.perf_counter() - start
    if instance.k ** instance.n <= 10**6:
        out["optimum"] = brute_force_clust(instance.A, instance.B).value
    _emit(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kernclust", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="approximate Clust(A|B) and print a JSON report")
    p.add_argument("--matrix", required=True)
    p.add_argument("--comparison")
    p.add_argument("--identity", type=int, metavar="K")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact Clust(A|B) by enumeration")
    p.add_argument("--matrix", required=True)
    p.add_argument("--comparison")
    p.add_argument("--identity", type=int, metavar="K")
    p.add_argument("--limit", type=_int_like, default=10**7)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("maxcut", help="MaxCut through Clust(L | [[1,-1],[-1,1]])")
    p.add_argument("--graph", required=True)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_maxcut)

    p = sub.add_parser("geometry-table", help="print R(2)..R(kmax)")
    p.add_argument("--kmax", type=int, default=25)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_geometry_table)

    p = sub.add_parser("propeller-search", help="local search over conical partitions")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--samples", type=_int_like, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_propeller_search)

    p = sub.add_parser("bench", help="generate an instance, optionally solve it")
    p.add_argument("--family", choices=["laplacian", "random"], default="laplacian")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--p", type=float, default=0.5, help="edge probability")
    p.add_argument("--rank", type=int)
    p.add_argument("--comparison")
    p.add_argument("--identity", type=int, metavar="K")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (KernelClusteringError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
