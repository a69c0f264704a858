"""Time the compiled RK4 kernel against the pure-Python fallback.

    python3 benchmarks/bench_flow.py [--steps N] [--rows M] [--repeat R]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from furuta_ohta.csflow import _kernels_py, compiled_available


def _time(fn, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--rows", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    single = np.zeros(10)
    single[:9] = 0.01 * rng.standard_normal(9)
    batch = np.zeros((args.rows, 10))
    batch[:, :9] = 0.01 * rng.standard_normal((args.rows, 9))
    h = 1e-3

    backends = {"python": _kernels_py}
    if compiled_available():
        from furuta_ohta.csflow import _kernels

        backends["compiled"] = _kernels
    else:
        print("compiled extension not built; timing the fallback only", file=sys.stderr)

    results = {}
    for name, k in backends.items():
        t_single = _time(lambda: k.integrate(single, 1.0, h, args.steps, 1e3, False, 0), args.repeat)
        t_batch = _time(lambda: k.integrate_batch(batch, 1.0, h, args.steps // 10, 1e3, False),
                        args.repeat)
        results[name] = (t_single, t_batch)
        print(f"{name:9s} single {args.steps} steps: {t_single * 1e3:9.2f} ms   "
              f"batch {args.rows}x{args.steps // 10} steps: {t_batch * 1e3:9.2f} ms")

    if "compiled" in results:
        py, cc = results["python"], results["compiled"]
        print(f"speedup   single: {py[0] / cc[0]:6.1f}x   batch: {py[1] / cc[1]:6.1f}x")
        a = _kernels_py.integrate(single, 1.0, h, args.steps, 1e3, False, 0)[0][-1]
        from furuta_ohta.csflow import _kernels

        b = np.asarray(_kernels.integrate(single, 1.0, h, args.steps, 1e3, False, 0)[0])[-1]
        print(f"max |difference| in final state: {np.max(np.abs(a - b)):.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
