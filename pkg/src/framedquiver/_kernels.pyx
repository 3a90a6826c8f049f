# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prime-field kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

ctypedef long long i64

cnp.import_array()

cdef enum:
    MAXC = 16


cdef inline i64 _mod(i64 x, i64 p) nogil:
    x %= p
    if x < 0:
        x += p
    return x


cdef i64 _inv(i64 a, i64 p) nogil:
    cdef i64 result = 1, base = _mod(a, p), e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


cdef int _rref(i64* m, int nrows, int ncols, i64 p, int* pivots) nogil:
    """In-place RREF of a row-major buffer; returns the rank."""
    cdef int r = 0, col, i, j, piv
    cdef i64 t, inv, tmp
    for col in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i * ncols + col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = m[r * ncols + j]
                m[r * ncols + j] = m[piv * ncols + j]
                m[piv * ncols + j] = tmp
        inv = _inv(m[r * ncols + col], p)
        if inv != 1:
            for j in range(col, ncols):
                m[r * ncols + j] = m[r * ncols + j] * inv % p
        for i in range(nrows):
            if i != r:
                t = m[i * ncols + col]
                if t != 0:
                    for j in range(col, ncols):
                        m[i * ncols + j] = _mod(m[i * ncols + j] - t * m[r * ncols + j], p)
        pivots[r] = col
        r += 1
    return r


def rref_modp(rows, int ncols, i64 p):
    cdef int nrows = len(rows)
    cdef int i, j, rank
    if nrows == 0 or ncols == 0:
        return [list(map(int, row)) for row in rows], []
    cdef i64* m = <i64*> malloc(nrows * ncols * sizeof(i64))
    cdef int* piv = <int*> malloc(nrows * sizeof(int))
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = _mod(row[j], p)
        rank = _rref(m, nrows, ncols, p, piv)
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(nrows)]
        return out, [piv[i] for i in range(rank)]
    finally:
        free(m)
        free(piv)


def rank_modp(rows, int ncols, i64 p):
    return len(rref_modp(rows, ncols, p)[1])


cdef inline void _reduce(i64* y, i64* basis, int* piv, int k, int c, i64 p) nogil:
    cdef int i, j
    cdef i64 t
    for i in range(k):
        t = y[piv[i]]
        if t != 0:
            for j in range(c):
                y[j] = _mod(y[j] - t * basis[i * MAXC + j], p)


def scan_subspaces(bases, dims, pivots, amaps, cmaps, erows, fvecs, i64 p):
    cdef const i64[:, :, ::1] B = np.ascontiguousarray(bases, dtype=np.int64)
    cdef const i64[::1] D = np.ascontiguousarray(dims, dtype=np.int64)
    cdef const i64[:, ::1] P = np.ascontiguousarray(pivots, dtype=np.int64)
    cdef const i64[:, :, ::1] A = np.ascontiguousarray(amaps, dtype=np.int64)
    cdef const i64[:, :, ::1] C = np.ascontiguousarray(cmaps, dtype=np.int64)
    cdef const i64[:, ::1] E = np.ascontiguousarray(erows, dtype=np.int64)
    cdef const i64[:, ::1] Fv = np.ascontiguousarray(fvecs, dtype=np.int64)
    cdef int n_sub = D.shape[0]
    cdef int c = B.shape[1] if n_sub else 0
    cdef int na = A.shape[0], nc = C.shape[0], ne = E.shape[0], nf = Fv.shape[0]
    if c > MAXC:
        raise ValueError("scan_subspaces supports c <= 16")
    out_arr = np.zeros((n_sub, 6), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64 basis[MAXC * MAXC]
    cdef int piv[MAXC]
    cdef int nonpiv[MAXC]
    cdef i64 y[MAXC]
    cdef i64* images = <i64*> malloc((na * c + 1) * MAXC * sizeof(i64))
    cdef i64* reduced = <i64*> malloc((nc * c + 1) * MAXC * sizeof(i64))
    cdef i64* constraint = <i64*> malloc((nc * c + 1) * MAXC * sizeof(i64))
    cdef i64* imgcopy = <i64*> malloc((na * c + 1) * MAXC * sizeof(i64))
    cdef int* scratch = <int*> malloc((na * c + nc * c + 1) * sizeof(int))
    cdef int s, k, i, j, l, a, q, nimg, nnp, ncon, in_ker, has_f, valid, amin, cmax
    cdef i64 acc
    try:
        for s in range(n_sub):
            k = D[s]
            for i in range(k):
                piv[i] = P[s, i]
                for j in range(c):
                    basis[i * MAXC + j] = B[s, i, j]
            in_ker = 1
            for a in range(ne):
                for i in range(k):
                    acc = 0
                    for j in range(c):
                        acc = (acc + E[a, j] * basis[i * MAXC + j]) % p
                    if acc % p != 0:
                        in_ker = 0
            has_f = 1
            for a in range(nf):
                for j in range(c):
                    y[j] = _mod(Fv[a, j], p)
                _reduce(y, basis, piv, k, c, p)
                for j in range(c):
                    if y[j] != 0:
                        has_f = 0
            # images A_a v_i, packed with row stride c for the rank computation
            nimg = 0
            for a in range(na):
                for i in range(k):
                    for l in range(c):
                        acc = 0
                        for j in range(c):
                            acc = (acc + A[a, l, j] * basis[i * MAXC + j]) % p
                        images[nimg * c + l] = acc % p
                    nimg += 1
            # keep an unreduced copy of the images (stride MAXC) before the rank destroys them
            for i in range(nimg):
                for l in range(c):
                    imgcopy[i * MAXC + l] = images[i * c + l]
            amin = _rref(images, nimg, c, p, scratch) if nimg > 0 else 0
            nnp = 0
            for j in range(c):
                nonpiv[nnp] = j
                nnp += 1
                for i in range(k):
                    if piv[i] == j:
                        nnp -= 1
                        break
            # reduced[q][l] = reduce(C_q e_l), stored at (q * c + l) * MAXC
            for q in range(nc):
                for l in range(c):
                    for j in range(c):
                        y[j] = _mod(C[q, j, l], p)
                    _reduce(y, basis, piv, k, c, p)
                    for j in range(c):
                        reduced[(q * c + l) * MAXC + j] = y[j]
            valid = 1
            for q in range(nc):
                if not valid:
                    break
                for i in range(nimg):
                    if not valid:
                        break
                    for j in range(nnp):
                        acc = 0
                        for l in range(c):
                            acc = (acc + reduced[(q * c + l) * MAXC + nonpiv[j]] * imgcopy[i * MAXC + l]) % p
                        if acc % p != 0:
                            valid = 0
                            break
            ncon = 0
            for q in range(nc):
                for j in range(nnp):
                    for l in range(c):
                        constraint[ncon * c + l] = reduced[(q * c + l) * MAXC + nonpiv[j]]
                    ncon += 1
            cmax = c - (_rref(constraint, ncon, c, p, scratch) if ncon > 0 else 0)
            out[s, 0] = k
            out[s, 1] = in_ker
            out[s, 2] = has_f
            out[s, 3] = amin
            out[s, 4] = cmax
            out[s, 5] = valid
    finally:
        free(images)
        free(reduced)
        free(constraint)
        free(imgcopy)
        free(scratch)
    return out_arr
