"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Micro: ring and ℏ-Laurent products on the cohomology of a 4-fold bundle.
End to end: the total-space I-function of P(O + O(1) + O(2)) over P^2,
run in a subprocess per backend so the import-time selection is honoured.
"""

import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from toricqd import kernels
from toricqd.toric import BundleSpec, ProjectiveBundle, projective_space

END_TO_END = (
    "import time;"
    "from toricqd import kernels;"
    "from toricqd.generators import toric_i_function;"
    "from toricqd.toric import BundleSpec, ProjectiveBundle, projective_space;"
    "tv = ProjectiveBundle(BundleSpec(projective_space(2), [[0], [1], [2]])).variety;"
    "t = time.perf_counter(); toric_i_function(tv, bound={bound});"
    "print(kernels.BACKEND, time.perf_counter() - t)"
)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def micro(repeat):
    ring = ProjectiveBundle(BundleSpec(projective_space(2), [[0], [1], [2]])).variety.cohomology
    rng = random.Random(0)
    elems = []
    for _ in range(40):
        vec = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(ring.dim)]
        elems.append({e: ring.from_coefficients(vec).vec for e in range(-3, 1)})
    rows = []
    for name, mod in sorted(kernels.backends().items()):
        table = ring.table if isinstance(ring.table, mod.Table) else mod.Table(*ring.table.__reduce__()[1])
        data = [{e: mod.normalize(list(v[0]), v[1]) for e, v in x.items()} for x in elems]

        def run():
            for a in data:
                for b in data[:10]:
                    mod.laurent_mul(a, b, table)

        rows.append((name, best_of(run, repeat)))
    return ring.dim, rows


def end_to_end(bound):
    rows = []
    for name, env in [("cython", {}), ("python", {"TORICQD_PURE_PYTHON": "1"})]:
        if name == "cython" and "cython" not in kernels.backends():
            continue
        proc = subprocess.run(
            [sys.executable, "-c", END_TO_END.format(bound=bound)],
            env={**os.environ, **env},
            capture_output=True,
            text=True,
            check=True,
        )
        backend, secs = proc.stdout.split()
        rows.append((backend, float(secs)))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--bound", type=int, default=30)
    args = ap.parse_args()
    dim, rows = micro(args.repeat)
    print(f"laurent_mul, 400 products, ring dim {dim} (best of {args.repeat})")
    for name, secs in rows:
        print(f"  {name:7s} {secs * 1e3:9.2f} ms")
    if len(rows) == 2:
        print(f"  speedup {rows[1][1] / rows[0][1]:.1f}x")
    print(f"I-function of P(O+O(1)+O(2)) over P2, ample degree <= {args.bound}")
    for name, secs in end_to_end(args.bound):
        print(f"  {name:7s} {secs:9.3f} s")


if __name__ == "__main__":
    main()
