"""The compiled kernels and the pure-Python fallback must agree exactly."""

import random

import numpy as np
import pytest

from framedquiver import _kernels_py, kernels
from framedquiver.subspaces import prime_subspace_arrays

compiled = pytest.importorskip("framedquiver._kernels")


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("p", [2, 3, 5, 7, 2147483647])
def test_rref_parity(p):
    rng = random.Random(p)
    for _ in range(200):
        r, c = rng.randint(0, 6), rng.randint(1, 6)
        rows = [[rng.randrange(p) if rng.random() < 0.6 else 0 for _ in range(c)] for _ in range(r)]
        a = compiled.rref_modp([list(x) for x in rows], c, p)
        b = _kernels_py.rref_modp([list(x) for x in rows], c, p)
        assert [list(x) for x in a[0]] == [list(x) for x in b[0]]
        assert list(a[1]) == list(b[1])
        assert compiled.rank_modp(rows, c, p) == len(b[1])


@pytest.mark.parametrize("p,c", [(2, 3), (3, 2), (5, 2), (5, 3), (7, 2)])
def test_scan_parity(p, c):
    rng = random.Random(100 * p + c)
    bases, dims, pivots = prime_subspace_arrays(p, c)
    for _ in range(15):
        na, nc = rng.randint(1, 3), rng.randint(0, 3)

        def mat(k):
            return np.array([[[rng.randrange(p) if rng.random() < 0.5 else 0 for _ in range(c)] for _ in range(c)]
                             for _ in range(k)], dtype=np.int64).reshape(k, c, c)

        amaps, cmaps = mat(na), mat(nc)
        erows = np.array([[rng.randrange(p) for _ in range(c)]] if rng.random() < 0.7 else [],
                         dtype=np.int64).reshape(-1, c)
        fvecs = np.array([[rng.randrange(p) if rng.random() < 0.3 else 0 for _ in range(c)]
                          for _ in range(rng.randint(0, 2))], dtype=np.int64).reshape(-1, c)
        a = compiled.scan_subspaces(bases, dims, pivots, amaps, cmaps, erows, fvecs, p)
        b = _kernels_py.scan_subspaces(bases, dims, pivots, amaps, cmaps, erows, fvecs, p)
        assert np.array_equal(np.asarray(a), b)
