"""Calibrate the sample-size constant used by the sampled range counter.

For uniform planar data, a query q and a beta, every data point x_i defines one
range (halfplane minus open disk). A uniform sample of size m estimates each
range count; D = max_i |estimate_i - exact_i| / n is the worst relative error.
Across trials, sqrt(m) * D is roughly scale-free, so its (1 - delta) quantile Q
gives the sample size needed for error eps: m = (Q / eps)**2. Dividing by
(nu*ln(1/eps) + ln(1/delta)) / eps**2 gives the constant C for that (eps, delta).

Usage: python tools/calibrate_sample_constant.py [--n 4000] [--trials 400]
"""

import argparse
import math

import numpy as np

from skdepth.counting import VC_DIMENSION
from skdepth.reduction import _ranges


def worst_errors(n, m, trials, betas, seed):
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        S = rng.uniform(-10, 10, (n, 2))
        q = rng.uniform(-10, 10, 2)
        beta = betas[t % len(betas)]
        rel = S - q
        inside = _ranges(rel, beta).region_contains(rel)
        np.fill_diagonal(inside, False)
        exact = inside.sum(axis=1)
        idx = rng.choice(n, size=m, replace=False)
        est = inside[:, idx].sum(axis=1) * (n / m)
        out.append(np.max(np.abs(est - exact)) / n)
    return np.array(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4000)
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    betas = [1.0, 2.0, 3.0, math.inf]
    worst_c = 0.0
    for m in (200, 400):
        d = worst_errors(args.n, m, args.trials, betas, args.seed + m)
        # finite-population correction so the quantile reflects sampling from a large set
        scaled = d * math.sqrt(m) / math.sqrt(1 - m / args.n)
        for eps in (0.05, 0.1, 0.2):
            for delta in (0.01, 0.05, 0.1):
                Q = float(np.quantile(scaled, 1 - delta))
                need = (Q / eps) ** 2
                c = need / ((VC_DIMENSION * math.log(1 / eps) + math.log(1 / delta)) / eps**2)
                worst_c = max(worst_c, c)
                print(f"m={m} eps={eps} delta={delta} Q={Q:.3f} m_needed={need:.0f} C={c:.3f}")
    print(f"max C = {worst_c:.3f}")


if __name__ == "__main__":
    main()
