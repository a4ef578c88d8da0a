"""Time the enumeration kernels compiled by numba against their plain
Python bodies on the same inputs.

    python3 benchmarks/bench_kernels.py [--agents 10] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import time

from roommates import _accel, kernels
from roommates.generators import random_perfect_core
from roommates.oracle import enumerate_stable_matchings, instance_arrays
from roommates.polytope import PolytopeVariant, halfintegral_points


def best_of(repeat: int, fn) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--agents", type=int, default=10)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"backend: {_accel.backend()}")
    if not _accel.HAVE_NUMBA:
        print("numba disabled or missing; nothing to compare")
        return
    rng = random.Random(args.seed)
    corpus = [random_perfect_core(rng, args.agents, min_agents=args.agents - 2) for _ in range(args.instances)]

    # warm the JIT cache outside the timed region
    for P in corpus[:1]:
        enumerate_stable_matchings(P)
        halfintegral_points(P, PolytopeVariant.FSM)

    rows = []
    for name, kern in (("stable_matchings", kernels.stable_matchings_kernel),):
        jit_t = py_t = 0.0
        for P in corpus:
            _, ptr, adj, rank = instance_arrays(P)
            n = len(P)

            def with_(fn):
                return lambda: kernels.run_with_buffer(fn, n, n, ptr, adj, rank)

            jit_t += best_of(args.repeat, with_(kern))
            py_t += best_of(args.repeat, with_(kern.py_func))
        rows.append((name, jit_t, py_t))

    jit_t = py_t = 0.0
    for P in corpus:
        jit_t += best_of(args.repeat, lambda: halfintegral_points(P, PolytopeVariant.FSM))
        saved = kernels.halfintegral_kernel
        try:
            import roommates.polytope as poly

            poly.halfintegral_kernel = saved.py_func
            py_t += best_of(args.repeat, lambda: halfintegral_points(P, PolytopeVariant.FSM))
        finally:
            poly.halfintegral_kernel = saved
    rows.append(("halfintegral_points", jit_t, py_t))

    print(f"{'kernel':<22}{'numba s':>12}{'python s':>12}{'speedup':>10}")
    for name, a, b in rows:
        print(f"{name:<22}{a:>12.4f}{b:>12.4f}{b / a:>10.1f}x")


if __name__ == "__main__":
    main()
