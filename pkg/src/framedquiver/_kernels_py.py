"""Pure-Python prime-field kernels (fallback for the compiled ``_kernels`` module).

Both implementations expose the same three functions and must agree exactly.
"""

from __future__ import annotations

import numpy as np


def rref_modp(rows, ncols, p):
    """Reduced row echelon form mod p.  Returns ``(rows, pivots)``; zero rows sink to the bottom."""
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = pow(prow[col], p - 2, p)
        if inv != 1:
            for j in range(col, ncols):
                prow[j] = prow[j] * inv % p
        for i in range(nrows):
            if i != r:
                row = m[i]
                t = row[col]
                if t:
                    for j in range(col, ncols):
                        row[j] = (row[j] - t * prow[j]) % p
        pivots.append(col)
        r += 1
    return m, pivots


def rank_modp(rows, ncols, p):
    return len(rref_modp(rows, ncols, p)[1])


def _reduce(y, basis, pivots, p):
    y = list(y)
    for vec, pc in zip(basis, pivots):
        t = y[pc]
        if t:
            for j in range(len(y)):
                y[j] = (y[j] - t * vec[j]) % p
    return y


def scan_subspaces(bases, dims, pivots, amaps, cmaps, erows, fvecs, p):
    """Per-subspace data for the interval form of the stability tests.

    For each subspace S0 (RREF rows ``bases[s, :dims[s]]``) returns the row
    ``(s0, S0 in ker e, S0 contains every f, dim A(S0), dim C^{-1}(S0), A(S0) in C^{-1}(S0))``
    where ``A`` ranges over ``amaps`` (V0 -> V1) and ``C`` over ``cmaps`` (V1 -> V0).
    """
    bases = np.asarray(bases).tolist()
    dims = np.asarray(dims).tolist()
    pivots = np.asarray(pivots).tolist()
    amaps = np.asarray(amaps).tolist()
    cmaps = np.asarray(cmaps).tolist()
    erows = np.asarray(erows).tolist()
    fvecs = np.asarray(fvecs).tolist()
    n_sub = len(dims)
    c = len(bases[0]) if n_sub else 0
    out = np.zeros((n_sub, 6), dtype=np.int64)
    # columns of the maps V1 -> V0, used for the preimage
    ccols = [[[C[i][l] for i in range(c)] for l in range(c)] for C in cmaps]
    for s in range(n_sub):
        k = dims[s]
        basis = bases[s][:k]
        piv = pivots[s][:k]
        in_ker = all(sum(er[j] * v[j] for j in range(c)) % p == 0 for er in erows for v in basis)
        has_f = all(not any(_reduce(f, basis, piv, p)) for f in fvecs)
        images = []
        for A in amaps:
            for v in basis:
                images.append([sum(A[i][j] * v[j] for j in range(c)) % p for i in range(c)])
        amin = rank_modp(images, c, p) if images else 0
        nonpiv = [j for j in range(c) if j not in piv]
        # reduced C_q columns: RC_q[:, l] = reduce(C_q e_l)
        reduced = []
        for cols in ccols:
            rc = [_reduce(col, basis, piv, p) for col in cols]
            reduced.append(rc)
        constraint = []
        for rc in reduced:
            for j in nonpiv:
                constraint.append([rc[l][j] for l in range(c)])
        cmax = c - (rank_modp(constraint, c, p) if constraint else 0)
        valid = 1
        for rc in reduced:
            for w in images:
                for j in nonpiv:
                    if sum(rc[l][j] * w[l] for l in range(c)) % p:
                        valid = 0
                        break
                if not valid:
                    break
            if not valid:
                break
        out[s] = (k, int(in_ker), int(has_f), amin, cmax, valid)
    return out
