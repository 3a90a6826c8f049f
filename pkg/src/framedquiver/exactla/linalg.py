"""Exact elimination, kernels, subspace helpers and pencil determinants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .. import kernels
from .fields import (
    ExtensionField,
    Field,
    GaussianRational,
    GaussianRationalField,
    PrimeField,
    RationalField,
)
from .matrix import Matrix, ShapeError
from .poly import Poly


class ExtensionRequired(ValueError):
    """The field has too few points; an extension of the stated degree is needed."""

    def __init__(self, message: str, degree: int):
        super().__init__(message)
        self.degree = degree


# -- fraction-free elimination over Q and Q(i) ---------------------------------

def _clear_rational_rows(M: Matrix) -> list[list[int]]:
    out = []
    for r in M.data:
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def _bareiss_echelon(m: list[list], ncols: int, ops) -> tuple[list[int], int]:
    """Fraction-free forward elimination in place.

    ``ops = (mul, sub, exact_div, is_zero, one, zero)``.  Entries below pivots are
    zeroed; every intermediate entry is a minor of the input, so the divisions
    are exact.  Returns ``(pivot columns, row-swap parity)``.
    """
    mul, sub, exact_div, is_zero, one, zero = ops
    nrows = len(m)
    prev = one
    r = 0
    swaps = 0
    pivots: list[int] = []
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not is_zero(m[i][col])), -1)
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            swaps ^= 1
        prow = m[r]
        pv = prow[col]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[col]
            for j in range(col + 1, ncols):
                row[j] = exact_div(sub(mul(pv, row[j]), mul(a, prow[j])), prev)
            row[col] = zero
        prev = pv
        pivots.append(col)
        r += 1
    return pivots, swaps


_INT_OPS = (
    lambda a, b: a * b,
    lambda a, b: a - b,
    lambda a, b: a // b,
    lambda a: a == 0,
    1,
    0,
)


# Gaussian integers as (re, im) int pairs; much cheaper than Fraction pairs
def _zi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _zi_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _zi_div(a, b):
    """Exact quotient in Z[i]."""
    n = b[0] * b[0] + b[1] * b[1]
    re, im = a[0] * b[0] + a[1] * b[1], a[1] * b[0] - a[0] * b[1]
    return (re // n, im // n)


_ZI_OPS = (_zi_mul, _zi_sub, _zi_div, lambda a: a == (0, 0), (1, 0), (0, 0))


def _clear_gaussian_ints(M: Matrix) -> list[list[tuple[int, int]]]:
    out = []
    for r in M.data:
        den = 1
        for x in r:
            for part in (x.re, x.im):
                den = den * part.denominator // math.gcd(den, part.denominator)
        out.append([(int(x.re * den), int(x.im * den)) for x in r])
    return out


def _bareiss_gauss_jordan(m: list[list], ncols: int, ops) -> list[int]:
    """Fraction-free Gauss-Jordan in place; returns pivot columns.

    Rows above the pivot are updated with the same exact division as rows below,
    so at the end row i equals (pivot value) times row i of the RREF.
    """
    mul, sub, exact_div, is_zero, one, zero = ops
    nrows = len(m)
    prev = one
    r = 0
    pivots: list[int] = []
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not is_zero(m[i][col])), -1)
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        pv = prow[col]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[col]
            if is_zero(a):
                for j in range(ncols):
                    row[j] = exact_div(mul(pv, row[j]), prev)
                continue
            for j in range(ncols):
                if j != col:
                    row[j] = exact_div(sub(mul(pv, row[j]), mul(a, prow[j])), prev)
            row[col] = zero
        prev = pv
        pivots.append(col)
        r += 1
    return pivots


def _gauss_jordan(F: Field, rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not F.is_zero(m[i][col])), -1)
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][col])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(nrows):
            if i != r:
                t = m[i][col]
                if not F.is_zero(t):
                    m[i] = [F.sub(x, F.mul(t, y)) for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m[: len(pivots)], pivots


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    F = M.field
    if M.rows == 0 or M.cols == 0:
        return Matrix(F, 0, M.cols, ()), ()
    if isinstance(F, PrimeField):
        rows, pivots = kernels.rref_modp(M.tolist(), M.cols, F.p)
        return Matrix(F, len(pivots), M.cols, tuple(tuple(r) for r in rows[: len(pivots)])), tuple(pivots)
    if isinstance(F, RationalField):
        m = _clear_rational_rows(M)
        pivots = _bareiss_gauss_jordan(m, M.cols, _INT_OPS)
        rows = []
        for i, pc in enumerate(pivots):
            d = m[i][pc]
            rows.append([Fraction(x, d) for x in m[i]])
    elif isinstance(F, GaussianRationalField):
        m = _clear_gaussian_ints(M)
        pivots = _bareiss_gauss_jordan(m, M.cols, _ZI_OPS)
        rows = []
        for i, pc in enumerate(pivots):
            dr, di = m[i][pc]
            n = dr * dr + di * di
            # x / d = x * conj(d) / |d|^2
            rows.append([
                GaussianRational(Fraction(x * dr + y * di, n), Fraction(y * dr - x * di, n)) for x, y in m[i]
            ])
    else:
        rows, pivots = _gauss_jordan(F, M.tolist(), M.cols)
    return Matrix(F, len(pivots), M.cols, tuple(tuple(r) for r in rows)), tuple(pivots)


def rank(M: Matrix) -> int:
    F = M.field
    if M.rows == 0 or M.cols == 0:
        return 0
    if isinstance(F, PrimeField):
        return kernels.rank_modp(M.tolist(), M.cols, F.p)
    if isinstance(F, RationalField):
        return len(_bareiss_echelon(_clear_rational_rows(M), M.cols, _INT_OPS)[0])
    if isinstance(F, GaussianRationalField):
        return len(_bareiss_echelon(_clear_gaussian_ints(M), M.cols, _ZI_OPS)[0])
    return len(_gauss_jordan(F, M.tolist(), M.cols)[1])


def nullspace(M: Matrix) -> Matrix:
    """Columns form a basis of ker M (one column per free variable, that variable set to 1)."""
    F = M.field
    R, pivots = rref(M)
    free = [j for j in range(M.cols) if j not in pivots]
    cols = []
    for fj in free:
        v = [F.zero] * M.cols
        v[fj] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R.data[i][fj])
        cols.append(v)
    return Matrix.from_columns(F, cols, M.cols)


def det(M: Matrix):
    if not M.is_square():
        raise ShapeError("determinant of a non-square matrix")
    F = M.field
    n = M.rows
    if n == 0:
        return F.one
    if isinstance(F, RationalField):
        scale = Fraction(1)
        m = []
        for r in M.data:
            den = 1
            for x in r:
                den = den * x.denominator // math.gcd(den, x.denominator)
            scale *= den
            m.append([int(x * den) for x in r])
        pivots, swaps = _bareiss_echelon(m, n, _INT_OPS)
        if len(pivots) < n:
            return F.zero
        d = Fraction(m[n - 1][n - 1]) / scale
        return -d if swaps else d
    if isinstance(F, GaussianRationalField):
        scale = 1
        for r in M.data:
            den = 1
            for x in r:
                for part in (x.re, x.im):
                    den = den * part.denominator // math.gcd(den, part.denominator)
            scale *= den
        m = _clear_gaussian_ints(M)
        pivots, swaps = _bareiss_echelon(m, n, _ZI_OPS)
        if len(pivots) < n:
            return F.zero
        re, im = m[n - 1][n - 1]
        d = GaussianRational(Fraction(re, scale), Fraction(im, scale))
        return F.neg(d) if swaps else d
    m = [list(r) for r in M.data]
    d = F.one
    for col in range(n):
        piv = next((i for i in range(col, n) if not F.is_zero(m[i][col])), -1)
        if piv < 0:
            return F.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = F.neg(d)
        pv = m[col][col]
        d = F.mul(d, pv)
        inv = F.inv(pv)
        for i in range(col + 1, n):
            t = F.mul(m[i][col], inv)
            if not F.is_zero(t):
                m[i] = [F.sub(x, F.mul(t, y)) for x, y in zip(m[i], m[col])]
    return d


def inverse(M: Matrix) -> Matrix:
    n = M.rows
    if not M.is_square():
        raise ShapeError("inverse of a non-square matrix")
    R, pivots = rref(M.hstack(Matrix.identity(M.field, n)))
    if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return R.select_columns(range(n, 2 * n))


def is_invertible(M: Matrix) -> bool:
    return M.is_square() and rank(M) == M.rows


# -- subspaces (represented by basis columns) ---------------------------------

def column_basis(M: Matrix) -> Matrix:
    """Canonical basis of the column space: transposed nonzero RREF rows of M^T."""
    if M.cols == 0:
        return M
    R, _ = rref(M.T)
    return R.T if R.rows else Matrix.zeros(M.field, M.rows, 0)


def span(field: Field, dim: int, *mats: Matrix) -> Matrix:
    mats = tuple(m for m in mats if m.cols)
    if not mats:
        return Matrix.zeros(field, dim, 0)
    return column_basis(mats[0].hstack(*mats[1:]))


def contains(U: Matrix, W: Matrix) -> bool:
    """col(W) is a subspace of col(U)."""
    if W.cols == 0:
        return True
    if U.cols == 0:
        return W.is_zero()
    return rank(U.hstack(W)) == rank(U)


def intersection(U: Matrix, W: Matrix) -> Matrix:
    if U.cols == 0 or W.cols == 0:
        return Matrix.zeros(U.field, U.rows, 0)
    K = nullspace(U.hstack(-W))
    return column_basis(U @ K.submatrix(range(U.cols), range(K.cols)))


def preimage(M: Matrix, W: Matrix) -> Matrix:
    """Basis of {x : M x in col(W)}."""
    n = M.cols
    if W.cols == 0:
        return nullspace(M)
    K = nullspace(M.hstack(-W))
    return column_basis(K.submatrix(range(n), range(K.cols)))


def dim(U: Matrix) -> int:
    return rank(U) if U.cols else 0


# -- characteristic polynomials and pencil determinants ------------------------

def charpoly(M: Matrix) -> Poly:
    """det(x I - M) by Berkowitz's division-free algorithm."""
    F = M.field
    n = M.rows
    if n == 0:
        return Poly.const(F, F.one)
    a = M.data
    # vect holds the coefficients (highest degree first) of the running charpoly
    vect = [F.one, F.neg(a[0][0])]
    for r in range(1, n):
        R = [a[i][r] for i in range(r)]          # column above the diagonal
        C = [a[r][j] for j in range(r)]          # row left of the diagonal
        A = [[a[i][j] for j in range(r)] for i in range(r)]
        # Toeplitz column: 1, -a_rr, -C R, -C A R, ...
        col = [F.one, F.neg(a[r][r])]
        vecR = R
        for _ in range(r):
            s = F.zero
            for x, y in zip(C, vecR):
                s = F.add(s, F.mul(x, y))
            col.append(F.neg(s))
            vecR = [
                _dot(F, A[i], vecR) for i in range(r)
            ]
        new = []
        for i in range(r + 2):
            s = F.zero
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    s = F.add(s, F.mul(col[i - j], vect[j]))
            new.append(s)
        vect = new
    return Poly(F, list(reversed(vect)))


def _dot(F: Field, u, v):
    s = F.zero
    for x, y in zip(u, v):
        s = F.add(s, F.mul(x, y))
    return s


@dataclass(frozen=True)
class HomogPoly2:
    """Homogeneous binary form: ``coeffs[j]`` multiplies nu1^(d-j) nu2^j."""

    field: Field
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient list must have length degree + 1")

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs)

    def __call__(self, nu1, nu2):
        F = self.field
        acc = F.zero
        d = self.degree
        for j, cf in enumerate(self.coeffs):
            if not F.is_zero(cf):
                acc = F.add(acc, F.mul(cf, F.mul(F.pow(nu1, d - j), F.pow(nu2, j))))
        return acc

    def dehomogenize(self) -> Poly:
        """g(t) = P(1, t)."""
        return Poly(self.field, self.coeffs)

    def format(self) -> list[str]:
        return [self.field.format(c) for c in self.coeffs]


def pencil_points(F: Field, count: int) -> list[tuple]:
    """The first ``count`` evaluation points [1,0], [0,1], [1,t], t = 1, 2, ..."""
    pts = [(F.one, F.zero), (F.zero, F.one)]
    if F.is_finite:
        ts = (t for t in F.elements() if not F.is_zero(t))
    else:
        ts = (F.from_int(k) for k in range(1, 10**9))
    for t in ts:
        if len(pts) >= count:
            break
        pts.append((F.one, t))
    return pts[:count]


def _check_pencil(A1: Matrix, A2: Matrix) -> None:
    if not (A1.is_square() and A2.is_square() and A1.shape == A2.shape):
        raise ShapeError("pencil matrices must be square of equal size")
    if A1.field != A2.field:
        raise ShapeError("pencil matrices must share a field")


def det_pencil(A1: Matrix, A2: Matrix) -> HomogPoly2:
    """det(nu1 A1 + nu2 A2) by evaluation at c+1 projective points and interpolation."""
    _check_pencil(A1, A2)
    F = A1.field
    c = A1.rows
    if c == 0:
        return HomogPoly2(F, 0, (F.one,))
    if F.is_finite and F.order + 1 < c + 1:
        need = 1
        while F.order**need + 1 < c + 1:
            need += 1
        raise ExtensionRequired(
            f"{F.name} has {F.order + 1} projective points; degree-{c} interpolation needs an "
            f"extension of degree {need * F.degree} over F{F.characteristic}",
            need * F.degree,
        )
    pts = pencil_points(F, c + 1)
    vals = [det(A1.scale(a) + A2.scale(b)) for a, b in pts]
    coeffs = [F.zero] * (c + 1)
    coeffs[0] = vals[0]
    coeffs[c] = vals[1]
    if c >= 2:
        # P(1, t) - a_0 - a_c t^c = sum_{j=1}^{c-1} a_j t^j at the remaining points
        ts = [b for _, b in pts[2:]]
        rows = []
        for t, v in zip(ts, vals[2:]):
            rhs = F.sub(F.sub(v, coeffs[0]), F.mul(coeffs[c], F.pow(t, c)))
            rows.append([F.pow(t, j) for j in range(1, c)] + [rhs])
        R, piv = rref(Matrix(F, len(rows), c, tuple(tuple(r) for r in rows)))
        for i, pc in enumerate(piv):
            coeffs[pc + 1] = R.data[i][c - 1]
    return HomogPoly2(F, c, tuple(coeffs))


def det_pencil_cofactor(A1: Matrix, A2: Matrix) -> HomogPoly2:
    """Cross-check path: Laplace expansion with binary-form entries."""
    _check_pencil(A1, A2)
    F = A1.field
    c = A1.rows
    entries = [[(A1.data[i][j], A2.data[i][j]) for j in range(c)] for i in range(c)]

    def form_mul(p, q):
        out = [F.zero] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            if F.is_zero(x):
                continue
            for j, y in enumerate(q):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return out

    def expand(rows: list[int], cols: list[int]) -> list:
        if not rows:
            return [F.one]
        r0 = rows[0]
        total = [F.zero] * (len(rows) + 1)
        for k, cj in enumerate(cols):
            lin = list(entries[r0][cj])
            if all(F.is_zero(x) for x in lin):
                continue
            minor = expand(rows[1:], cols[:k] + cols[k + 1:])
            term = form_mul(lin, minor)
            if k % 2:
                term = [F.neg(x) for x in term]
            total = [F.add(x, y) for x, y in zip(total, term)]
        return total

    return HomogPoly2(F, c, tuple(expand(list(range(c)), list(range(c)))))


def embed_matrix(M: Matrix, target: ExtensionField, image_of_generator=None) -> Matrix:
    """Embed a prime-field or extension-field matrix into a larger extension field."""
    from .fields import embed_element

    return M.map(lambda x: embed_element(M.field, target, x, image_of_generator), target)


def as_columns(vectors: Sequence[Sequence], field: Field, dim_: int) -> Matrix:
    return Matrix.from_columns(field, list(vectors), dim_)
