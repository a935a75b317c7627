"""Time the numba and numpy flavours of each hot kernel.

    python benchmarks/bench_kernels.py [--repeat 5]

The first jit call (compilation or cache load) is excluded.  An end-to-end
``smt`` timing runs in subprocesses, once per value of ``OPTNET_NO_JIT``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from optnet import _accel, kernels
from optnet.samples import random_binary_tree


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _fermat_case(rng):
    pts = rng.random((2000, 6))

    def run(f):
        return lambda: [f(*row) for row in pts]

    return run


def _relax_case(rng):
    cases = []
    for _ in range(40):
        n = int(rng.integers(5, 8))
        topo = random_binary_tree(rng, n)
        pos = np.vstack([rng.random((n, 2)), np.full((n - 2, 2), 0.5) + 1e-3 * rng.random((n - 2, 2))])
        eu = np.array([u for u, _ in topo.edges], np.int64)
        ev = np.array([v for _, v in topo.edges], np.int64)
        cases.append((pos, eu, ev, n))

    def run(f):
        return lambda: [f(p.copy(), eu, ev, n, 1e-12, 1e-10, 1e-13, 100000) for p, eu, ev, n in cases]

    return run


def _simplex_case(rng):
    tabs = []
    for _ in range(300):
        m, nv = 6, 8
        T = np.zeros((m + 1, nv + m + 1))
        T[:m, :nv] = rng.integers(1, 9, (m, nv))
        T[:m, nv:nv + m] = np.eye(m)
        T[:m, -1] = rng.integers(5, 30, m)
        T[m, :nv] = -rng.integers(1, 9, nv)
        tabs.append((T, np.arange(nv, nv + m, dtype=np.int64)))

    def run(f):
        return lambda: [f(T.copy(), b.copy(), T.shape[1] - 1, 1e-11, 1000) for T, b in tabs]

    return run


def _four_point_case(rng):
    mats = []
    for _ in range(100):
        D = np.triu(rng.integers(10, 21, (8, 8)).astype(float), 1)
        mats.append(D + D.T)

    def run(f):
        return lambda: [f(D, 1e-9) for D in mats]

    return run


CASES = {
    "fermat3 (2000 triangles)": (_fermat_case, kernels.fermat3_jit, kernels.fermat3_np),
    "relax (40 topologies, n=5..7)": (_relax_case, kernels.relax_jit, kernels.relax_np),
    "simplex (300 tableaux 6x8)": (_simplex_case, kernels.simplex_jit, kernels.simplex_np),
    "four_point (100 spaces, n=8)": (_four_point_case, kernels.four_point_jit, kernels.four_point_np),
}

SMT_SNIPPET = (
    "import time, numpy as np; from optnet.steiner import smt; "
    "rng = np.random.default_rng(0); sets = [rng.random((7, 2)) for _ in range(10)]; "
    "smt(sets[0]); t = time.perf_counter(); [smt(p) for p in sets]; print(time.perf_counter() - t)"
)


def _smt_subprocess(no_jit: bool) -> float:
    env = dict(os.environ, OPTNET_NO_JIT="1" if no_jit else "0")
    out = subprocess.run([sys.executable, "-c", SMT_SNIPPET], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy flavour exists")
        return 1
    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, (make, fj, fn) in CASES.items():
        run = make(np.random.default_rng(args.seed))
        run(fj)()  # compile or load from cache
        tj = _best(run(fj), args.repeat)
        tn = _best(run(fn), args.repeat)
        print(f"{name:34s} {tj:10.4f} {tn:10.4f} {tn / tj:8.1f}x")
    tj, tn = _smt_subprocess(False), _smt_subprocess(True)
    print(f"{'smt end to end (10 sets, n=7)':34s} {tj:10.4f} {tn:10.4f} {tn / tj:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
