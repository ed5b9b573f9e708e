"""Compare the compiled and NumPy kernels on the transform and the maximal operator.

Usage: python benchmarks/bench_backends.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from vilenkin import _backend
from vilenkin.operators import OperatorFamily
from vilenkin.radix import make_radix_sequence
from vilenkin.transform import forward_array

CASES = [
    ("transform", [2] * 12, 64),
    ("transform", [3] * 7, 64),
    ("transform", [2, 3, 4, 5, 6], 64),
    ("maximal", [2] * 8, 256),
    ("maximal", [2] * 10, 16),
    ("maximal", [2, 3] * 4, 8),
]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = _backend.available()
    rng = np.random.default_rng(0)
    print(f"{'case':<10} {'radices':<22} {'batch':>5} " +
          " ".join(f"{b + ' [s]':>12}" for b in backends) + "   speedup")
    for kind, radices, batch in CASES:
        R = make_radix_sequence(radices)
        x = rng.normal(size=(batch, R.size)) + 1j * rng.normal(size=(batch, R.size))
        if kind == "transform":
            fn = lambda: forward_array(R, x)
        else:
            fam = OperatorFamily.partial_sums(R)
            fn = lambda: fam.maximal_array(x)
        times = {}
        for b in backends:
            with _backend.use_backend(b):
                fn()
                times[b] = best_time(fn, args.repeat)
        speed = (f"{times['numpy'] / times['cython']:8.1f}x"
                 if "cython" in times else "       -")
        label = ",".join(map(str, radices)) if len(set(radices)) > 1 else f"{radices[0]}^{len(radices)}"
        print(f"{kind:<10} {label:<22} {batch:>5} " +
              " ".join(f"{times[b]:12.5f}" for b in backends) + f"   {speed}")


if __name__ == "__main__":
    main()
