"""Compiled vs pure-Python prime-field kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times ``scan_subspaces`` (the exhaustive stability scan) and ``rref_modp`` on
random inputs, checks that both backends return identical results, and prints
one line per case.
"""

import argparse
import random
import timeit

import numpy as np

from framedquiver import _kernels_py
from framedquiver.subspaces import prime_subspace_arrays

try:
    from framedquiver import _kernels as compiled
except ImportError:
    compiled = None


def scan_case(p, c, rng):
    bases, dims, pivots = prime_subspace_arrays(p, c)

    def mat(k):
        return np.array([rng.randrange(p) for _ in range(k * c * c)], dtype=np.int64).reshape(k, c, c)

    erows = np.array([[rng.randrange(p) for _ in range(c)]], dtype=np.int64)
    fvecs = np.array([[rng.randrange(p) for _ in range(c)]], dtype=np.int64)
    return (bases, dims, pivots, mat(2), mat(2), erows, fvecs, p), len(dims)


def rref_case(p, n, rng):
    rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
    return rows, n, p


def bench(fn, args, repeat, copy_rows=False):
    call = (lambda: fn([list(r) for r in args[0]], *args[1:])) if copy_rows else (lambda: fn(*args))
    return min(timeit.repeat(call, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernels are not built; only the pure-Python timings are shown")
    rng = random.Random(0)
    print(f"{'kernel':<16}{'case':<22}{'python (s)':>12}{'compiled (s)':>14}{'speedup':>10}")
    for p, c in ((5, 2), (3, 3), (7, 3), (2, 5), (5, 4)):
        case, nsub = scan_case(p, c, rng)
        tp = bench(_kernels_py.scan_subspaces, case, args.repeat)
        row = f"{'scan_subspaces':<16}{f'p={p} c={c} ({nsub} subs)':<22}{tp:>12.4f}"
        if compiled is not None:
            assert np.array_equal(np.asarray(compiled.scan_subspaces(*case)), _kernels_py.scan_subspaces(*case))
            tc = bench(compiled.scan_subspaces, case, args.repeat)
            row += f"{tc:>14.4f}{tp / tc:>9.1f}x"
        print(row)
    for p, n in ((5, 20), (2147483647, 40), (7, 80)):
        case = rref_case(p, n, rng)
        tp = bench(_kernels_py.rref_modp, case, args.repeat, copy_rows=True)
        row = f"{'rref_modp':<16}{f'p={p} n={n}':<22}{tp:>12.4f}"
        if compiled is not None:
            tc = bench(compiled.rref_modp, case, args.repeat, copy_rows=True)
            row += f"{tc:>14.4f}{tp / tc:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
