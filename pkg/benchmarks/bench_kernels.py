"""Compare the numba and numpy kernel paths.

Kernel timings use both implementations in one process (numba compiled once
before timing).  The end-to-end row runs a construction in two subprocesses,
one with ``WILDCAT_DISABLE_NUMBA=1``.

    python3 benchmarks/bench_kernels.py [--sizes 64,128,256,512] [--repeat 5]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from wildcat import _kernels as K


def random_dag(n: int, density: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    adj = np.triu(rng.random((n, n)) < density, k=1)
    perm = rng.permutation(n)
    return adj[np.ix_(perm, perm)]


def best(fn, arg, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        times.append(time.perf_counter() - t0)
    return min(times)


E2E = ("import time,sys; from wildcat import load_table, construct; from wildcat import _kernels as K;"
       "t=load_table(sys.argv[1]); t0=time.perf_counter(); construct(t, int(sys.argv[2]));"
       "print(K.USE_NUMBA, time.perf_counter()-t0)")


def end_to_end(table: str, depth: int, disable: bool) -> tuple[str, float]:
    env = dict(os.environ, WILDCAT_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", E2E, table, str(depth)], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,128,256,512")
    ap.add_argument("--density", type=float, default=0.02)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--table", default=os.path.join(os.path.dirname(K.__file__), "corpus", "pair.wc"))
    ap.add_argument("--depth", type=int, default=2)
    args = ap.parse_args(argv)
    if not K.USE_NUMBA:
        print("numba unavailable or disabled; only the numpy path can be timed")
        return 1

    pairs = [("closure", K.closure_numpy, K.closure_numba),
             ("reduction", K.reduction_numpy, K.reduction_numba),
             ("defects", K.order_defects_numpy, K.order_defects_numba)]
    warm = K.closure_numpy(random_dag(8, 0.3, 0))
    for _, _, fn in pairs:
        fn(warm)

    print(f"{'kernel':<10} {'n':>5} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        adj = random_dag(n, args.density, n)
        leq = K.closure_numpy(adj)
        for name, f_np, f_nb in pairs:
            x = adj if name == "closure" else leq
            a, b = f_np(x), f_nb(x)
            same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
            if not same:
                print(f"MISMATCH in {name} at n={n}")
                return 1
            t_np, t_nb = best(f_np, x, args.repeat), best(f_nb, x, args.repeat)
            print(f"{name:<10} {n:>5} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>8.2f}")

    for disable in (False, True):
        flag, secs = end_to_end(args.table, args.depth, disable)
        label = "numba" if flag == "True" else "numpy"
        print(f"construct {os.path.basename(args.table)} depth {args.depth} [{label}]: {secs:.3f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
