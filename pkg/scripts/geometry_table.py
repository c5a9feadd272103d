"""Print R(k) for k = 2..kmax next to the crude bound e ln k / (k - 1)."""

import argparse
import math

from kernclust.partition import C3, crude_r_bound, r_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=25)
    args = ap.parse_args()
    print(f"{'k':>3}  {'R(k)':>12}  {'crude':>10}  below R(3)")
    for k, v in r_table(args.kmax).items():
        crude = crude_r_bound(k) if k >= 4 else math.nan
        print(f"{k:3d}  {v:12.10f}  {crude:10.6f}  {v < C3 if k >= 4 else '-'}")


if __name__ == "__main__":
    main()
