"""Time the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per (kernel, backend) with the best wall time and the
speedup of each backend over the pure-Python one.
"""
import argparse
import timeit

import numpy as np

from lorentzbh.kernels import available_backends
from lorentzbh.multiindex import IndexSetSpec, enumerate_indices


def _cases(rng):
    m, n = 3, 6
    a = rng.standard_normal(n**m) + 1j * rng.standard_normal(n**m)
    X = np.exp(2j * np.pi * rng.random((m, n)))
    exps = np.array([np.bincount(j - 1, minlength=3) for j in enumerate_indices(IndexSetSpec(3, 3, "nondecreasing"))])
    c = rng.standard_normal(len(exps)) + 1j * rng.standard_normal(len(exps))
    return {
        "contract_except m=3 n=6": lambda K: K.contract_except(a, m, n, X, 1),
        "alternating_ascent m=3 n=6": lambda K: K.alternating_ascent(a, m, n, X, 200, 1e-12),
        "poly_grid m=3 n=3 G=360": lambda K: K.poly_grid(exps, c, 360),
    }


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    backends = available_backends()
    for name, fn in _cases(rng).items():
        times = {}
        for bname, K in backends.items():
            t = timeit.Timer(lambda: fn(K))
            loops, _ = t.autorange()
            times[bname] = min(t.repeat(args.repeat, loops)) / loops
        base = times["python"]
        for bname, sec in times.items():
            print(f"{name:32s} {bname:7s} {sec * 1e3:10.4f} ms  x{base / sec:6.2f}")


if __name__ == "__main__":
    main()
