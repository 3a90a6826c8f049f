"""Exhaustive enumeration of subspaces of F^c over a finite field.

Each subspace is produced once, as the row space of its reduced row echelon
form.  Order: dimension ascending, then pivot columns lexicographic, then the
free entries in field-element order (first free position slowest).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator

import numpy as np

from .exactla import Field, Matrix


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured cap."""


@dataclass(frozen=True)
class EchelonSubspace:
    dim: int
    pivots: tuple[int, ...]
    rows: tuple[tuple, ...]   # RREF basis rows

    def basis(self, field: Field, c: int) -> Matrix:
        """Basis as the columns of a c x dim matrix."""
        return Matrix.from_columns(field, list(self.rows), c)


def gaussian_binomial(c: int, k: int, q: int) -> int:
    num, den = 1, 1
    for i in range(k):
        num *= q ** (c - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(c: int, q: int) -> int:
    return sum(gaussian_binomial(c, k, q) for k in range(c + 1))


def _free_positions(c: int, pivots: tuple[int, ...]) -> list[tuple[int, int]]:
    pset = set(pivots)
    return [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, c) if j not in pset]


def iter_subspaces(field: Field, c: int, dims: range | None = None) -> Iterator[EchelonSubspace]:
    if not field.is_finite:
        raise ValueError("subspace enumeration needs a finite field")
    elems = list(field.elements())
    zero, one = field.zero, field.one
    for k in dims if dims is not None else range(c + 1):
        for pivots in combinations(range(c), k):
            free = _free_positions(c, pivots)
            for values in product(elems, repeat=len(free)):
                rows = [[zero] * c for _ in range(k)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = one
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                yield EchelonSubspace(k, pivots, tuple(tuple(r) for r in rows))


@lru_cache(maxsize=64)
def subspace_list(field: Field, c: int) -> tuple[EchelonSubspace, ...]:
    return tuple(iter_subspaces(field, c))


@lru_cache(maxsize=64)
def prime_subspace_arrays(p: int, c: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Packed integer arrays ``(bases[N, c, c], dims[N], pivots[N, c])`` for F_p.

    Unused basis rows and pivot slots are zero.
    """
    from .exactla import PrimeField

    subs = subspace_list(PrimeField(p), c)
    N = len(subs)
    bases = np.zeros((N, max(c, 1), max(c, 1)), dtype=np.int64)
    dims = np.zeros(N, dtype=np.int64)
    pivots = np.zeros((N, max(c, 1)), dtype=np.int64)
    for s, sub in enumerate(subs):
        dims[s] = sub.dim
        for i, row in enumerate(sub.rows):
            bases[s, i, :c] = row
            pivots[s, i] = sub.pivots[i]
    for arr in (bases, dims, pivots):
        arr.setflags(write=False)
    return bases, dims, pivots


def check_budget(c: int, q: int, max_subspaces: int, what: str = "subspaces") -> int:
    n = subspace_count(c, q)
    if n > max_subspaces:
        raise BudgetExceeded(f"{n} {what} of F_{q}^{c} exceed the cap of {max_subspaces}")
    return n
