"""Empirical gate-count scaling of both reference loaders.

    python scripts/loader_scaling.py --trials 5
"""

import argparse

from qdataload.report import render_scaling_csv, run_scaling, scaling_slope


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dense-max-n", type=int, default=12)
    parser.add_argument("--sparse-n", type=int, default=8)
    args = parser.parse_args()

    dense = run_scaling("dense", range(4, args.dense_max_n + 1), trials=args.trials, seed=args.seed)
    print("# dense loader: CX-equivalent count vs N = 2^n (expect slope ~1)")
    print(render_scaling_csv(dense, scaling_slope("dense", dense)), end="")

    rs = [4, 8, 16, 32, 64]
    sparse = run_scaling("sparse", rs, trials=args.trials, seed=args.seed, n=args.sparse_n)
    print(f"# sparse loader at n={args.sparse_n}: gate count vs r (expect slope ~1)")
    print(render_scaling_csv(sparse, scaling_slope("sparse", sparse)), end="")


if __name__ == "__main__":
    main()
