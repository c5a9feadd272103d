"""Empirical approximation ratios on random centered instances.

For each (n, k, comparison family) draws instances, runs the SDP plus
rounding pipeline and compares with the exact optimum.
"""

import argparse

import numpy as np

from kernclust.pipeline import ClusterParams, KernelInstance, brute_force_clust, solve
from kernclust.reductions import random_centered_psd, random_psd, spherical_centered

FAMILIES = {
    "identity": lambda k, rng: np.eye(k),
    "spherical": lambda k, rng: spherical_centered(k),
    "random": lambda k, rng: random_psd(k, k, rng),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'k':>2} {'family':>10} {'apriori':>8} {'opt/mean':>9} {'opt/best':>9} {'sdp/opt':>8}")
    for k in (2, 3, 4):
        for name, make in FAMILIES.items():
            rows = []
            for i in range(args.instances):
                A = random_centered_psd(args.n, args.n - 1, rng)
                inst = KernelInstance(A, make(k, rng))
                rep = solve(inst, ClusterParams(trials=args.trials, seed=i))
                opt = brute_force_clust(inst.A, inst.B).value
                mean = max(st.mean for st in rep.rounding.per_s.values())
                rows.append((rep.apriori_ratio, opt / mean, opt / rep.value, rep.sdp_primal / opt))
            r = np.array(rows)
            print(f"{k:2d} {name:>10} {r[:, 0].max():8.4f} {r[:, 1].max():9.4f} "
                  f"{r[:, 2].max():9.4f} {r[:, 3].max():8.4f}")


if __name__ == "__main__":
    main()
