"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each workload is run through both backends on identical inputs; the results
are checked for equality before timings are reported.
"""
import argparse
import random
import time
from fractions import Fraction

import numpy as np

from ogdegen.chart import random_nice_chart
from ogdegen.combin import enumerate_admissible, root
from ogdegen.dmatroid import RankOracle, polytope_H, random_isotropic
from ogdegen.kernels import _pykernels

try:
    from ogdegen.kernels import _ckernels
except ImportError:
    _ckernels = None


def rank_workload():
    A = random_nice_chart(root(6), random.Random(0))
    R = RankOracle(A)
    cols = [R.columns(S) for S in enumerate_admissible(6) if any(S)]
    mats = [[[row[c] for c in cs] for row in R.lifted] for cs in cols]

    def run(mod):
        return [mod.int_rank(m) for m in mats]
    return "int_rank: 728 column submatrices, n=6", run


def point_workload():
    P = polytope_H(random_nice_chart(root(5), random.Random(1)))
    signs, bounds = P.arrays
    rng = random.Random(2)
    den = 1000
    pts = [np.array([rng.randrange(den) for _ in range(5)], dtype=np.int64) for _ in range(2000)]

    def run(mod):
        if mod is _pykernels:
            s, b = signs.tolist(), bounds.tolist()
            return [mod.point_check(s, b, x.tolist(), den) for x in pts]
        return [tuple(mod.point_check(signs, bounds, x, den)) for x in pts]
    return "point_check: 2000 points against 242 constraints, n=5", run


def vertex_workload(n):
    A = random_isotropic(n, random.Random(3))
    signs, bounds = polytope_H(A).arrays

    def run(mod):
        if mod is _pykernels:
            out = mod.vertex_candidates(signs.tolist(), bounds.tolist())
        else:
            out = mod.vertex_candidates(signs, bounds)
        return sorted({tuple(Fraction(v, d) for v in nums) for nums, d in out})
    return f"vertex_candidates: n={n}, {len(bounds)} constraints", run


def timed(fn, mod, repeat):
    best, result = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(mod)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true", help="skip the n=4 vertex enumeration")
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return 1
    work = [rank_workload(), point_workload(), vertex_workload(3)]
    if not args.skip_slow:
        work.append(vertex_workload(4))
    print(f"{'workload':58} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, fn in work:
        reps = 1 if "n=4" in label else args.repeat
        tp, rp = timed(fn, _pykernels, reps)
        tc, rc = timed(fn, _ckernels, reps)
        if rp != rc:
            raise SystemExit(f"backends disagree on {label}")
        print(f"{label:58} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
