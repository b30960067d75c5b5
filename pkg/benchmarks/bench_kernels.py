"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--rows 200000] [--m 3] [--repeat 5]

Both backends run on identical inputs; the script also reports the largest
relative disagreement between them.
"""

import argparse
import timeit

import numpy as np

from finsler_polydisc import _kernels
from finsler_polydisc.core import Rng, complex_normal, uniform_disc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--k", type=int, default=3)
    args = ap.parse_args()

    gen = Rng(2024).generator()
    z = uniform_disc(gen, (args.rows, args.m), 0.95)
    v = complex_normal(gen, (args.rows, args.m))
    inputs = _kernels.prepare(z, v, args.t, args.k)
    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy backend is available")

    print(f"rows={args.rows} m={args.m} t={args.t} k={args.k}")
    print(f"{'kernel':<10}" + "".join(f"{b:>14}" for b in backends) + ("     speedup  max rel diff" if len(backends) == 2 else ""))
    for name in _kernels.KERNEL_NAMES:
        times, outs = [], []
        for b in backends:
            fn = getattr(_kernels.backend_module(b), name)
            outs.append(fn(*inputs))
            times.append(min(timeit.repeat(lambda: fn(*inputs), number=1, repeat=args.repeat)))
        row = f"{name:<10}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times)
        if len(backends) == 2:
            diff = np.max(np.abs(outs[0] - outs[1])) / np.max(np.abs(outs[0]))
            row += f"{times[0] / times[1]:>12.1f}x  {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
