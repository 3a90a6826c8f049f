import pytest

from framedquiver.exactla import ExtensionField, PrimeField, rank, rref
from framedquiver.subspaces import (
    BudgetExceeded,
    check_budget,
    gaussian_binomial,
    iter_subspaces,
    prime_subspace_arrays,
    subspace_count,
)


@pytest.mark.parametrize("q,c", [(2, 1), (2, 3), (3, 2), (5, 2), (4, 2), (2, 4)])
def test_enumeration_counts(q, c):
    F = PrimeField(q) if q != 4 else ExtensionField(2, 2)
    subs = list(iter_subspaces(F, c))
    assert len(subs) == subspace_count(c, q)
    for k in range(c + 1):
        assert sum(1 for s in subs if s.dim == k) == gaussian_binomial(c, k, q)


def test_enumeration_is_canonical_and_distinct():
    F = PrimeField(3)
    seen = set()
    for s in iter_subspaces(F, 3):
        B = s.basis(F, 3)
        assert rank(B) == s.dim
        R, piv = rref(B.T)
        assert piv == s.pivots
        assert tuple(tuple(r) for r in R.data) == s.rows
        seen.add(s.rows)
    assert len(seen) == subspace_count(3, 3)


def test_enumeration_order():
    F = PrimeField(2)
    subs = list(iter_subspaces(F, 2))
    assert [s.dim for s in subs] == [0, 1, 1, 1, 2]
    assert [s.pivots for s in subs[1:4]] == [(0,), (0,), (1,)]


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 5) == 31
    assert subspace_count(2, 5) == 8


def test_packed_arrays_match_enumeration():
    bases, dims, pivots = prime_subspace_arrays(5, 2)
    subs = list(iter_subspaces(PrimeField(5), 2))
    assert len(dims) == len(subs)
    for s, sub in enumerate(subs):
        assert dims[s] == sub.dim
        assert [list(map(int, bases[s, i])) for i in range(sub.dim)] == [list(r) for r in sub.rows]
    assert not bases.flags.writeable


def test_budget_refusal():
    assert check_budget(2, 5, 8) == 8
    with pytest.raises(BudgetExceeded):
        check_budget(3, 5, 50)      # 64 subspaces
