"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--size 512] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from mmprop import _kernels_py

try:
    from mmprop import _kernels
except ImportError:
    _kernels = None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--queries", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    field = rng.standard_normal((args.size, args.size))
    ext = args.size * 2.0
    xs, ys = rng.uniform(0, ext, args.queries), rng.uniform(0, ext, args.queries)
    cases = {
        f"ar1_filter_2d {args.size}x{args.size}": lambda k: k.ar1_filter_2d(field, 0.85, 0.85),
        f"bilinear {args.queries} points": lambda k: k.bilinear(field, 0.0, 0.0, 2.0, xs, ys),
    }
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["compiled"] = _kernels
    else:
        print("compiled extension not built; python backend only")

    print(f"{'kernel':<32}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases.items():
        best = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for b, k in backends.items()}
        same = "compiled" not in backends or np.array_equal(fn(_kernels), fn(_kernels_py))
        speed = f"{best['python'] / best['compiled']:>9.1f}x" if "compiled" in best else ""
        print(f"{name:<32}" + "".join(f"{t * 1e3:>10.2f}ms" for t in best.values()) + speed
              + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
