"""Freeze reference values for the statistics tests.

Welch t from scipy, the two-proportion z-test and the normal-approximation
proportion interval from statsmodels. Run from the repository root:

    python3 tests/tools/gen_stats_fixtures.py > tests/data/stats_fixtures.json
"""

import json
import sys

import numpy as np
from scipy import stats
from statsmodels.stats.proportion import proportion_confint, proportions_ztest


def welch_case(rng):
    na, nb = rng.integers(2, 60, size=2)
    a = rng.normal(rng.uniform(0.3, 0.9), rng.uniform(0.01, 0.3), size=na)
    b = rng.normal(rng.uniform(0.3, 0.9), rng.uniform(0.01, 0.3), size=nb)
    res = stats.ttest_ind(a, b, equal_var=False)
    va, vb = a.var(ddof=1) / na, b.var(ddof=1) / nb
    df = (va + vb) ** 2 / (va**2 / (na - 1) + vb**2 / (nb - 1))
    return {"a": a.tolist(), "b": b.tolist(), "t": float(res.statistic),
            "p": float(res.pvalue), "df": float(df)}


def prop_case(rng):
    n1, n2 = rng.integers(5, 30000, size=2)
    k1 = int(rng.integers(0, n1 + 1))
    k2 = int(rng.integers(0, n2 + 1))
    if k1 + k2 in (0, n1 + n2):
        k1 = max(1, min(k1, n1 - 1))
    z, p = proportions_ztest([k1, k2], [n1, n2], alternative="two-sided")
    return {"k1": k1, "n1": int(n1), "k2": k2, "n2": int(n2), "z": float(z),
            "p": float(p)}


def wald_case(rng):
    n = int(rng.integers(1, 50000))
    k = int(rng.integers(0, n + 1))
    lo, hi = proportion_confint(k, n, alpha=0.05, method="normal")
    # statsmodels clips to [0, 1]; the half-width is taken before clipping.
    p = k / n
    half = stats.norm.ppf(0.975) * np.sqrt(p * (1 - p) / n)
    if 0.0 < lo and hi < 1.0:
        half = (hi - lo) / 2
    return {"k": k, "n": n, "z": float(stats.norm.ppf(0.975)), "half_width": float(half)}


def main():
    rng = np.random.default_rng(20240611)
    out = {
        "welch": [welch_case(rng) for _ in range(100)],
        "two_prop": [prop_case(rng) for _ in range(100)],
        "wald": [wald_case(rng) for _ in range(100)],
    }
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
