"""Benchmark the greedy-cover kernels: compiled extension vs pure Python.

Builds the same covering-candidate families the content estimator uses on a
few benchmark spaces, runs both kernel implementations on identical arrays,
checks they choose identical covers, and reports wall times.

The package itself picks its kernel once at import time; set
``WIDTHLAB_PURE_PYTHON=1`` before importing ``widthlab`` to force the pure
kernel there. This script bypasses that switch and imports both directly.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from widthlab import generate
from widthlab.content import _candidate_arrays
from widthlab._kernels.greedy_cover_py import greedy_cover as py_kernel

try:
    from widthlab._kernels._greedy_cover_cy import greedy_cover as cy_kernel
except ImportError:
    cy_kernel = None

INSTANCES = [
    ("grid 30x30, zeta 3", {"kind": "grid", "nx": 30, "ny": 30,
                            "spacing": 1.0}, 3.0),
    ("grid 60x60, zeta 3", {"kind": "grid", "nx": 60, "ny": 60,
                            "spacing": 1.0}, 3.0),
    ("strip 1000x3, zeta 5", {"kind": "strip", "length": 1000, "width": 3,
                              "spacing": 1.0}, 5.0),
    ("torus 40x40, zeta 4", {"kind": "torus_net", "nx": 40, "ny": 40,
                             "spacing": 1.0}, 4.0),
    ("sphere 2000, zeta 0.2", {"kind": "sphere_net", "count": 2000,
                               "radius": 1.0}, 0.2),
]


def build(spec, zeta, n=2):
    space = generate(spec)
    target = np.arange(space.size, dtype=np.int64)
    items, start, length, center, radius = _candidate_arrays(
        space, target, zeta
    )
    cost = np.power(radius, n)
    return items, start, length, cost, center, radius, target.size


def best_time(kernel, args, repeats):
    out, best = None, float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = kernel(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    opts = parser.parse_args()

    if cy_kernel is None:
        print("compiled kernel not built; timing the pure-Python kernel only")

    header = f"{'instance':<26}{'cands':>9}{'targets':>9}" \
             f"{'python':>12}{'compiled':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, spec, zeta in INSTANCES:
        args = build(spec, zeta)
        n_cand = len(args[3])
        py_out, py_t = best_time(py_kernel, args, opts.repeats)
        if cy_kernel is None:
            print(f"{name:<26}{n_cand:>9}{args[6]:>9}{py_t * 1e3:>10.1f}ms"
                  f"{'-':>12}{'-':>9}")
            continue
        cy_out, cy_t = best_time(cy_kernel, args, opts.repeats)
        if not np.array_equal(py_out, cy_out):
            raise SystemExit(f"kernel outputs disagree on {name!r}")
        print(f"{name:<26}{n_cand:>9}{args[6]:>9}{py_t * 1e3:>10.1f}ms"
              f"{cy_t * 1e3:>10.1f}ms{py_t / cy_t:>8.1f}x")


if __name__ == "__main__":
    main()
