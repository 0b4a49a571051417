"""Compare the compiled and pure-Python search kernels on distance searches.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--max-weight W]
"""

from __future__ import annotations

import argparse
import statistics
import time

from stabrewire import kernels
from stabrewire.library import all_fixtures, fig1_pair
from stabrewire.metrics import code_distance, path_distance_profile
from stabrewire.planner import plan_rewire


def exhaustive_sweep(code, max_weight: int) -> int:
    """Count every weight-``max_weight`` operator commuting with the code's
    generators; with no solution limit the whole weight layer is scanned."""
    g = code.generators
    w, sols = kernels.weight_search(code.n, [p.x for p in g], [p.z for p in g], 0, [], max_weight, 10**9,
                                    min_weight=max_weight)
    return len(sols)


def cases(max_weight: int):
    fx = all_fixtures()
    there = plan_rewire(fx["steane15"], fx["reed_muller15"])
    left, _ = fig1_pair()
    return [
        ("steane distance", lambda: code_distance(fx["steane"], max_weight)),
        ("reed_muller15 distance", lambda: code_distance(fx["reed_muller15"], max_weight)),
        ("steane15->reed_muller15 profile", lambda: path_distance_profile(there, max_weight)),
        ("appd_mid distance", lambda: code_distance(fx["appd_mid"], max_weight)),
        ("fig1_left distance (n=25)", lambda: code_distance(left, min(max_weight, 3))),
        ("reed_muller15 exhaustive sweep (w=4)", lambda: exhaustive_sweep(fx["reed_muller15"], max_weight)),
        ("fig1_left exhaustive sweep (w=3)", lambda: exhaustive_sweep(left, min(max_weight, 3))),
    ]


def timed(fn, repeat: int) -> tuple[float, object]:
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-weight", type=int, default=4)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation` first")

    print(f"{'case':36s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    try:
        for name, fn in cases(args.max_weight):
            kernels.use_backend("python")
            t_py, r_py = timed(fn, args.repeat)
            kernels.use_backend("cython")
            t_cy, r_cy = timed(fn, args.repeat)
            if r_py != r_cy:
                raise SystemExit(f"backends disagree on {name}")
            print(f"{name:36s} {t_py:10.4f} {t_cy:10.4f} {t_py / max(t_cy, 1e-9):7.1f}x")
    finally:
        kernels.use_backend(None)


if __name__ == "__main__":
    main()
