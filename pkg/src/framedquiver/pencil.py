"""Matrix pencils nu1 A1 + nu2 A2: regularity, minimal polynomial solutions, singular points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import kernels
from .exactla import (
    ExtensionRequired,
    Field,
    HomogPoly2,
    Matrix,
    PrimeField,
    ShapeError,
    det_pencil,
    nullspace,
    rank,
)
from .exactla.linalg import pencil_points
from .subspaces import BudgetExceeded, iter_subspaces, subspace_count

DEFAULT_ORACLE_BUDGET = 10_000_000


@dataclass(frozen=True)
class Pencil:
    A1: Matrix
    A2: Matrix

    def __post_init__(self):
        if not (self.A1.is_square() and self.A1.shape == self.A2.shape):
            raise ShapeError("pencil matrices must be square of equal size")
        if self.A1.field != self.A2.field:
            raise ShapeError("pencil matrices must share a field")

    @property
    def field(self) -> Field:
        return self.A1.field

    @property
    def c(self) -> int:
        return self.A1.rows

    def at(self, nu1, nu2) -> Matrix:
        return self.A1.scale(nu1) + self.A2.scale(nu2)


@dataclass(frozen=True)
class MinimalSolution:
    """v(lambda) = sum_a (-lambda)^a v_a with (A1 + lambda A2) v(lambda) = 0."""

    epsilon: int
    v: tuple[Matrix, ...]

    def residuals(self, p: Pencil) -> list[Matrix]:
        """The chain A1 v_0, A1 v_a - A2 v_{a-1} (a = 1..eps), A2 v_eps; all zero when valid."""
        out = [p.A1 @ self.v[0]]
        for a in range(1, self.epsilon + 1):
            out.append(p.A1 @ self.v[a] - p.A2 @ self.v[a - 1])
        out.append(p.A2 @ self.v[-1])
        return out

    def is_valid(self, p: Pencil) -> bool:
        nonzero = any(not x.is_zero() for x in self.v)
        return nonzero and all(r.is_zero() for r in self.residuals(p))

    def polynomial_coefficients(self) -> list[Matrix]:
        """Coefficients of lambda^a in v(lambda), i.e. (-1)^a v_a."""
        return [x if a % 2 == 0 else -x for a, x in enumerate(self.v)]


@dataclass(frozen=True)
class PencilStatus:
    tag: str                           # "Regular" or "Singular"
    det: HomogPoly2
    witness: Optional[tuple] = None    # projective point with det != 0
    minimal: Optional[MinimalSolution] = None

    @property
    def regular(self) -> bool:
        return self.tag == "Regular"


@dataclass(frozen=True)
class CurveParams:
    """lambda = [l1, l2] and mu = (mu1, mu2) on the curve l1^n mu1 + l2^n mu2 = 0."""

    field: Field
    n: int
    lam: tuple
    mu: tuple

    def __post_init__(self):
        F = self.field
        l1, l2 = self.lam
        m1, m2 = self.mu
        if not F.is_zero(F.add(F.mul(F.pow(l1, self.n), m1), F.mul(F.pow(l2, self.n), m2))):
            raise ValueError("lambda1^n mu1 + lambda2^n mu2 != 0")


@dataclass(frozen=True)
class SingularPoints:
    points: tuple[tuple[tuple, int], ...]   # ([nu1, nu2], multiplicity)
    complete: bool

    @property
    def projective(self) -> list[tuple]:
        return [pt for pt, _ in self.points]


def is_regular(p: Pencil) -> PencilStatus:
    d = det_pencil(p.A1, p.A2)
    if not d.is_zero():
        for pt in pencil_points(p.field, p.c + 1):
            if not p.field.is_zero(d(*pt)):
                return PencilStatus("Regular", d, witness=pt)
        raise AssertionError("a nonzero form of degree c vanished at c+1 points")
    return PencilStatus("Singular", d, minimal=minimal_solution(p))


def chain_system(p: Pencil, eps: int) -> Matrix:
    """Block band matrix of the chain equations in the stacked unknown (v_0, ..., v_eps)."""
    F, c = p.field, p.c
    Z = Matrix.zeros(F, c, c)
    grid = []
    for r in range(eps + 2):
        row = []
        for a in range(eps + 1):
            if a == r and r <= eps:
                row.append(p.A1)
            elif a == r - 1:
                row.append(-p.A2)
            else:
                row.append(Z)
        grid.append(row)
    rows = [r[0].hstack(*r[1:]) for r in grid]
    return rows[0].vstack(*rows[1:])


def minimal_solution(p: Pencil) -> MinimalSolution:
    """Sweep eps = 0, 1, ... and return the first nontrivial chain solution."""
    F, c = p.field, p.c
    if c == 0:
        raise ValueError("the empty pencil is regular")
    for eps in range(c):
        N = nullspace(chain_system(p, eps))
        if N.cols:
            col = N.col(0)
            v = tuple(Matrix.column(F, col[a * c:(a + 1) * c]) for a in range(eps + 1))
            return MinimalSolution(eps, v)
    raise ValueError("pencil is regular: no polynomial solution of degree < c")


def _image_rank(p: Pencil, rows: tuple[tuple, ...]) -> int:
    F = p.field
    imgs = []
    for A in (p.A1, p.A2):
        for v in rows:
            imgs.append(tuple(_dot(F, A.data[i], v) for i in range(p.c)))
    if not imgs:
        return 0
    if isinstance(F, PrimeField):
        return kernels.rank_modp(imgs, p.c, F.p)
    return rank(Matrix(F, len(imgs), p.c, tuple(imgs)))


def _dot(F: Field, u, v):
    acc = F.zero
    for x, y in zip(u, v):
        acc = F.add(acc, F.mul(x, y))
    return acc


def subspace_image_oracle(p: Pencil, budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """True iff dim(A1 S + A2 S) >= dim S for every subspace S of F^c (exhaustive)."""
    F = p.field
    if not F.is_finite:
        raise ValueError("the subspace oracle needs a finite field")
    work = F.order ** p.c * subspace_count(p.c, F.order)
    if work > budget:
        raise BudgetExceeded(f"oracle work {work} exceeds the budget {budget}")
    for sub in iter_subspaces(F, p.c, range(1, p.c + 1)):
        if _image_rank(p, sub.rows) < sub.dim:
            return False
    return True


def _normalize_point(F: Field, nu1, nu2) -> tuple:
    if F.is_zero(nu1):
        return (F.zero, F.one)
    return (F.one, F.div(nu2, nu1))


def singular_points(p: Pencil) -> SingularPoints:
    """Base-field roots of det(nu1 A1 + nu2 A2), normalized to [1, t] or [0, 1]."""
    try:
        d = det_pencil(p.A1, p.A2)
    except ExtensionRequired:
        from .exactla.linalg import det_pencil_cofactor

        d = det_pencil_cofactor(p.A1, p.A2)
    return form_roots(d)


def form_roots(d: HomogPoly2) -> SingularPoints:
    F = d.field
    if d.is_zero():
        raise ValueError("singular pencil: every point is singular")
    g = d.dehomogenize()
    pts = [((F.one, t), m) for t, m in g.roots_with_multiplicity()]
    at_infinity = d.degree - g.degree
    if at_infinity:
        pts.append(((F.zero, F.one), at_infinity))
    total = sum(m for _, m in pts)
    return SingularPoints(tuple(pts), total == d.degree)
