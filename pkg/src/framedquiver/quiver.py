"""Framed representations of Lambda_n and its augmented cousin Lambda'_n.

A framed representation lives on V0 = V1 = F^c with a one-dimensional
framing space W.  ``A1, A2: V0 -> V1``, ``C_q (or B_q, D_q): V1 -> V0``,
``e: V0 -> W`` (a 1 x c row) and ``f_q: W -> V0`` (c x 1 columns).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field, replace
from typing import Sequence, Union

from .exactla import Field, Matrix, ShapeError, inverse, is_invertible, nullspace
from .exactla.fields import FieldError


class NotInSubvariety(ValueError):
    """An augmented representation with B_q != D_q for some 2 <= q <= n-1."""

    def __init__(self, offending: Sequence[int]):
        super().__init__(f"B_q != D_q at q = {list(offending)}")
        self.offending = list(offending)


class SamplerExhausted(RuntimeError):
    """The relation system only has the trivial solution for this draw."""


def _check(m: Matrix, field: Field, shape: tuple[int, int], name: str) -> None:
    if m.field != field:
        raise FieldError(f"{name} is over {m.field.name}, expected {field.name}")
    if m.shape != shape:
        raise ShapeError(f"{name} has shape {m.shape}, expected {shape}")


@dataclass(frozen=True)
class FramedRep:
    n: int
    c: int
    field: Field
    A1: Matrix
    A2: Matrix
    C: tuple[Matrix, ...]
    e: Matrix
    f: tuple[Matrix, ...] = ()

    def __post_init__(self):
        if self.n < 1 or self.c < 0:
            raise ValueError("need n >= 1 and c >= 0")
        object.__setattr__(self, "C", tuple(self.C))
        object.__setattr__(self, "f", tuple(self.f))
        if len(self.C) != self.n:
            raise ShapeError(f"expected {self.n} C matrices, got {len(self.C)}")
        if len(self.f) != self.n - 1:
            raise ShapeError(f"expected {self.n - 1} f vectors, got {len(self.f)}")
        c, F = self.c, self.field
        _check(self.A1, F, (c, c), "A1")
        _check(self.A2, F, (c, c), "A2")
        for q, m in enumerate(self.C, 1):
            _check(m, F, (c, c), f"C{q}")
        _check(self.e, F, (1, c), "e")
        for q, m in enumerate(self.f, 1):
            _check(m, F, (c, 1), f"f{q}")

    @property
    def v_to_v0_maps(self) -> tuple[Matrix, ...]:
        """All arrows V1 -> V0."""
        return self.C

    @property
    def kind(self) -> str:
        return "framed_rep"


@dataclass(frozen=True)
class AugmentedRep:
    n: int
    c: int
    field: Field
    A1: Matrix
    A2: Matrix
    B: tuple[Matrix, ...]   # B_1 .. B_{n-1}
    D: tuple[Matrix, ...]   # D_2 .. D_n
    e: Matrix
    f: tuple[Matrix, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("augmented representations need n >= 2")
        for name in ("B", "D", "f"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        k = self.n - 1
        if len(self.B) != k or len(self.D) != k or len(self.f) != k:
            raise ShapeError(f"expected {k} matrices in each of B, D, f")
        c, F = self.c, self.field
        _check(self.A1, F, (c, c), "A1")
        _check(self.A2, F, (c, c), "A2")
        for q, m in enumerate(self.B, 1):
            _check(m, F, (c, c), f"B{q}")
        for q, m in enumerate(self.D, 2):
            _check(m, F, (c, c), f"D{q}")
        _check(self.e, F, (1, c), "e")
        for q, m in enumerate(self.f, 1):
            _check(m, F, (c, 1), f"f{q}")

    @property
    def v_to_v0_maps(self) -> tuple[Matrix, ...]:
        return self.B + self.D

    @property
    def kind(self) -> str:
        return "augmented_rep"


@dataclass(frozen=True)
class AdhmDatum:
    n: int
    c: int
    field: Field
    A1: Matrix
    A2: Matrix
    C: tuple[Matrix, ...]
    e: Matrix

    def __post_init__(self):
        object.__setattr__(self, "C", tuple(self.C))
        if self.n < 1 or len(self.C) != self.n:
            raise ShapeError(f"expected {self.n} C matrices")
        c, F = self.c, self.field
        _check(self.A1, F, (c, c), "A1")
        _check(self.A2, F, (c, c), "A2")
        for q, m in enumerate(self.C, 1):
            _check(m, F, (c, c), f"C{q}")
        _check(self.e, F, (1, c), "e")

    @property
    def kind(self) -> str:
        return "adhm"


Rep = Union[FramedRep, AugmentedRep, AdhmDatum]


@dataclass(frozen=True)
class GaugeElement:
    phi1: Matrix
    phi2: Matrix
    phi1_inv: Matrix = dc_field(init=False, repr=False, compare=False)
    phi2_inv: Matrix = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name, m in (("phi1", self.phi1), ("phi2", self.phi2)):
            if not is_invertible(m):
                raise ValueError(f"{name} is singular")
        object.__setattr__(self, "phi1_inv", inverse(self.phi1))
        object.__setattr__(self, "phi2_inv", inverse(self.phi2))

    @classmethod
    def random(cls, field: Field, c: int, rng: random.Random) -> "GaugeElement":
        return cls(random_invertible(field, c, rng), random_invertible(field, c, rng))


@dataclass(frozen=True)
class RotationElement:
    """The SO(2) element ((nu1, nu2), (-nu2, nu1))."""

    field: Field
    nu1: object
    nu2: object

    def __post_init__(self):
        F = self.field
        if F.add(F.mul(self.nu1, self.nu1), F.mul(self.nu2, self.nu2)) != F.one:
            raise ValueError("rotation requires nu1^2 + nu2^2 = 1")

    @classmethod
    def identity(cls, field: Field) -> "RotationElement":
        return cls(field, field.one, field.zero)

    @classmethod
    def from_parameter(cls, field: Field, t) -> "RotationElement":
        """Rational parametrization ((1 - t^2)/(1 + t^2), 2t/(1 + t^2)) of the unit conic."""
        F = field
        t2 = F.mul(t, t)
        den = F.add(F.one, t2)
        if F.is_zero(den):
            raise ValueError("1 + t^2 = 0 gives no conic point")
        return cls(F, F.div(F.sub(F.one, t2), den), F.div(F.add(t, t), den))

    def inverse(self) -> "RotationElement":
        return RotationElement(self.field, self.nu1, self.field.neg(self.nu2))


def conic_points(field: Field, limit: int | None = None) -> list[RotationElement]:
    """SO(2) points: full enumeration over finite fields, a parameter sweep otherwise.

    The identity always comes first.
    """
    F = field
    out = [RotationElement.identity(F)]
    if F.is_finite:
        elems = list(F.elements())
        squares: dict = {}
        for y in elems:
            squares.setdefault(F.mul(y, y), []).append(y)
        for x in elems:
            need = F.sub(F.one, F.mul(x, x))
            for y in squares.get(need, ()):
                if (x, y) != (F.one, F.zero):
                    out.append(RotationElement(F, x, y))
                    if limit is not None and len(out) >= limit:
                        return out
        return out
    limit = 64 if limit is None else limit
    k = 1
    while len(out) < limit:
        for t in (F.from_int(k), F.from_int(-k), F.div(F.one, F.from_int(k + 1))):
            try:
                out.append(RotationElement.from_parameter(F, t))
            except ValueError:
                continue
        k += 1
    return out[:limit]


def random_rotation(field: Field, rng: random.Random) -> RotationElement:
    if field.is_finite:
        pts = conic_points(field)
        return pts[rng.randrange(len(pts))]
    while True:
        t = field.div(field.random_element(rng, 6), field.from_int(rng.randint(1, 5)))
        try:
            return RotationElement.from_parameter(field, t)
        except ValueError:
            continue


# -- relations -------------------------------------------------------------------

@dataclass(frozen=True)
class RelationCheck:
    q: int
    first: Matrix
    second: Matrix

    @property
    def passed(self) -> bool:
        return self.first.is_zero() and self.second.is_zero()


@dataclass(frozen=True)
class RelationReport:
    relation: str
    checks: tuple[RelationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    @property
    def failures(self) -> list[int]:
        return [ch.q for ch in self.checks if not ch.passed]


def p1_report(A1: Matrix, A2: Matrix, C: Sequence[Matrix], e: Matrix | None = None) -> RelationReport:
    """(P1): A1 C1 A2 = A2 C1 A1 for n = 1, else A1 C_q = A2 C_{q+1} and C_q A1 = C_{q+1} A2."""
    if len(C) == 1:
        C1 = C[0]
        res = A1 @ C1 @ A2 - A2 @ C1 @ A1
        zero = Matrix.zeros(A1.field, 0, 0)
        return RelationReport("P1", (RelationCheck(1, res, zero),))
    checks = []
    for q in range(len(C) - 1):
        checks.append(RelationCheck(q + 1, A1 @ C[q] - A2 @ C[q + 1], C[q] @ A1 - C[q + 1] @ A2))
    return RelationReport("P1", tuple(checks))


def check_relations(rep: FramedRep) -> RelationReport:
    """Residuals A2 C_{q+1} - A1 C_q and C_{q+1} A2 - C_q A1 - f_q e for q = 1..n-1.

    For n = 1 there is no f and the quadratic relation (P1) is checked instead.
    """
    if rep.n == 1:
        return p1_report(rep.A1, rep.A2, rep.C)
    checks = []
    for q in range(rep.n - 1):
        Cq, Cq1 = rep.C[q], rep.C[q + 1]
        first = rep.A2 @ Cq1 - rep.A1 @ Cq
        second = Cq1 @ rep.A2 - Cq @ rep.A1 - rep.f[q] @ rep.e
        checks.append(RelationCheck(q + 1, first, second))
    return RelationReport("Q1", tuple(checks))


def check_relations_augmented(rep: AugmentedRep) -> RelationReport:
    checks = []
    for q in range(rep.n - 1):
        Bq, Dq1 = rep.B[q], rep.D[q]
        first = rep.A2 @ Dq1 - rep.A1 @ Bq
        second = Dq1 @ rep.A2 - Bq @ rep.A1 - rep.f[q] @ rep.e
        checks.append(RelationCheck(q + 1, first, second))
    return RelationReport("Q1'", tuple(checks))


# -- Lambda_n <-> Lambda'_n ---------------------------------------------------------

def embed_to_augmented(rep: FramedRep) -> AugmentedRep:
    if rep.n < 2:
        raise ValueError("embedding needs n >= 2")
    return AugmentedRep(rep.n, rep.c, rep.field, rep.A1, rep.A2, rep.C[:-1], rep.C[1:], rep.e, rep.f)


def project_to_lambda(rep: AugmentedRep) -> FramedRep:
    # B holds B_1..B_{n-1} and D holds D_2..D_n, so B_q sits at q-1 and D_q at q-2
    bad = [q for q in range(2, rep.n) if rep.B[q - 1] != rep.D[q - 2]]
    if bad:
        raise NotInSubvariety(bad)
    C = rep.B + (rep.D[-1],)
    return FramedRep(rep.n, rep.c, rep.field, rep.A1, rep.A2, C, rep.e, rep.f)


def kronecker_project(rep: FramedRep | AugmentedRep) -> tuple[Matrix, Matrix]:
    return rep.A1, rep.A2


def to_adhm(rep: FramedRep) -> AdhmDatum:
    return AdhmDatum(rep.n, rep.c, rep.field, rep.A1, rep.A2, rep.C, rep.e)


# -- group actions -------------------------------------------------------------------

def gauge_act(g: GaugeElement, rep: Rep) -> Rep:
    """(phi1, phi2): A -> phi2 A phi1^-1, C/B/D -> phi1 C phi2^-1, e -> e phi1^-1, f -> phi1 f."""
    p1, p2, p1i, p2i = g.phi1, g.phi2, g.phi1_inv, g.phi2_inv
    if p1.shape != (rep.c, rep.c):
        raise ShapeError("gauge element size does not match the representation")
    A1 = p2 @ rep.A1 @ p1i
    A2 = p2 @ rep.A2 @ p1i
    e = rep.e @ p1i
    back = lambda m: p1 @ m @ p2i  # noqa: E731
    if isinstance(rep, FramedRep):
        return replace(rep, A1=A1, A2=A2, C=tuple(map(back, rep.C)), e=e, f=tuple(p1 @ v for v in rep.f))
    if isinstance(rep, AugmentedRep):
        return replace(
            rep, A1=A1, A2=A2, B=tuple(map(back, rep.B)), D=tuple(map(back, rep.D)), e=e,
            f=tuple(p1 @ v for v in rep.f),
        )
    return replace(rep, A1=A1, A2=A2, C=tuple(map(back, rep.C)), e=e)


def so2_act(nu: RotationElement, rep: AugmentedRep) -> AugmentedRep:
    """(A1, A2) -> nu (A1, A2) and (B_q, D_{q+1}) -> nu^-1 (B_q, D_{q+1}); e and f fixed."""
    a, b = nu.nu1, nu.nu2
    F = rep.field
    A1 = rep.A1.scale(a) + rep.A2.scale(b)
    A2 = rep.A1.scale(F.neg(b)) + rep.A2.scale(a)
    B = tuple(Bq.scale(a) - Dq.scale(b) for Bq, Dq in zip(rep.B, rep.D))
    D = tuple(Bq.scale(b) + Dq.scale(a) for Bq, Dq in zip(rep.B, rep.D))
    return replace(rep, A1=A1, A2=A2, B=B, D=D)


# -- sampling --------------------------------------------------------------------------

PROFILES = ("generic", "forced-singular-pencil", "e=0")


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random) -> Matrix:
    return Matrix(field, rows, cols, tuple(tuple(field.random_element(rng) for _ in range(cols)) for _ in range(rows)))


def random_invertible(field: Field, c: int, rng: random.Random) -> Matrix:
    while True:
        M = random_matrix(field, c, c, rng)
        if is_invertible(M):
            return M


def singular_pencil(field: Field, c: int, rng: random.Random) -> tuple[Matrix, Matrix]:
    """A random c x c pencil with det(nu1 A1 + nu2 A2) identically zero.

    Built as P (L_eps + L_eta^T + R) Q with Kronecker blocks L_eps (eps x (eps+1)),
    L_eta^T ((eta+1) x eta), a random square block R, and random invertible P, Q.
    """
    F = field
    eps = rng.randint(0, c - 1)
    eta = rng.randint(0, c - 1 - eps)
    r = c - 1 - eps - eta
    blocks1 = [[F.zero] * c for _ in range(c)]
    blocks2 = [[F.zero] * c for _ in range(c)]
    for i in range(eps):  # L_eps: [I | 0] and [0 | I]
        blocks1[i][i] = F.one
        blocks2[i][i + 1] = F.one
    r0, c0 = eps, eps + 1
    for j in range(eta):  # L_eta^T: [I ; 0] and [0 ; I]
        blocks1[r0 + j][c0 + j] = F.one
        blocks2[r0 + j + 1][c0 + j] = F.one
    r0, c0 = eps + eta + 1, eps + 1 + eta
    for i in range(r):
        for j in range(r):
            blocks1[r0 + i][c0 + j] = F.random_element(rng)
            blocks2[r0 + i][c0 + j] = F.random_element(rng)
    M1 = Matrix.from_rows(F, blocks1)
    M2 = Matrix.from_rows(F, blocks2)
    P = random_invertible(F, c, rng)
    Q = random_invertible(F, c, rng)
    return P @ M1 @ Q, P @ M2 @ Q


def _draw_pencil_and_e(n, c, field, rng, profile):
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    if profile == "forced-singular-pencil":
        A1, A2 = singular_pencil(field, c, rng)
    else:
        A1 = random_matrix(field, c, c, rng)
        A2 = random_matrix(field, c, c, rng)
    if profile == "e=0":
        e = Matrix.zeros(field, 1, c)
    else:
        e = random_matrix(field, 1, c, rng)
    return A1, A2, e


def _random_combination(N: Matrix, rng: random.Random) -> list:
    F = N.field
    if N.cols == 0:
        raise SamplerExhausted("the relation system has only the trivial solution")
    while True:
        coeffs = [F.random_element(rng) for _ in range(N.cols)]
        if any(not F.is_zero(x) for x in coeffs):
            break
    out = []
    for i in range(N.rows):
        acc = F.zero
        for j, a in enumerate(coeffs):
            acc = F.add(acc, F.mul(a, N.data[i][j]))
        out.append(acc)
    return out


def _unpack(vec: list, offset: int, rows: int, cols: int, field: Field) -> Matrix:
    return Matrix(field, rows, cols, tuple(tuple(vec[offset + i * cols + j] for j in range(cols)) for i in range(rows)))


def _relation_rows(F, c, A1, A2, e, idx_left, idx_right, idx_f):
    """Rows for A2 X_right - A1 X_left = 0 and X_right A2 - X_left A1 - f e = 0.

    ``idx_left(k, l)`` / ``idx_right(k, l)`` give unknown indices of the entries
    of the two c x c unknowns, ``idx_f(i)`` those of the f column.
    """
    rows = []
    for i in range(c):
        for j in range(c):
            row = {}
            for k in range(c):
                if not F.is_zero(A2.data[i][k]):
                    row[idx_right(k, j)] = F.add(row.get(idx_right(k, j), F.zero), A2.data[i][k])
                if not F.is_zero(A1.data[i][k]):
                    row[idx_left(k, j)] = F.sub(row.get(idx_left(k, j), F.zero), A1.data[i][k])
            rows.append(row)
    for i in range(c):
        for j in range(c):
            row = {}
            for k in range(c):
                if not F.is_zero(A2.data[k][j]):
                    row[idx_right(i, k)] = F.add(row.get(idx_right(i, k), F.zero), A2.data[k][j])
                if not F.is_zero(A1.data[k][j]):
                    row[idx_left(i, k)] = F.sub(row.get(idx_left(i, k), F.zero), A1.data[k][j])
            if idx_f is not None and not F.is_zero(e.data[0][j]):
                row[idx_f(i)] = F.sub(row.get(idx_f(i), F.zero), e.data[0][j])
            rows.append(row)
    return rows


def _dense(F, rows: list[dict], ncols: int) -> Matrix:
    return Matrix(F, len(rows), ncols, tuple(tuple(r.get(j, F.zero) for j in range(ncols)) for r in rows))


def relation_system(n: int, c: int, field: Field, A1: Matrix, A2: Matrix, e: Matrix) -> Matrix:
    """Coefficient matrix of (Q1) (or (P1) when n = 1) in the stacked unknowns (C_1..C_n, f_1..f_{n-1})."""
    F = field
    cc = c * c
    if n == 1:
        rows = []
        for i in range(c):
            for j in range(c):
                row = {}
                for k in range(c):
                    for l in range(c):
                        v = F.sub(F.mul(A1.data[i][k], A2.data[l][j]), F.mul(A2.data[i][k], A1.data[l][j]))
                        if not F.is_zero(v):
                            row[k * c + l] = v
                rows.append(row)
        return _dense(F, rows, cc)
    rows = []
    for q in range(n - 1):
        rows += _relation_rows(
            F, c, A1, A2, e,
            idx_left=lambda k, l, q=q: q * cc + k * c + l,
            idx_right=lambda k, l, q=q: (q + 1) * cc + k * c + l,
            idx_f=lambda i, q=q: n * cc + q * c + i,
        )
    return _dense(F, rows, n * cc + (n - 1) * c)


def sample_rep(n: int, c: int, field: Field, seed: int, profile: str = "generic") -> FramedRep:
    """A seeded representation satisfying the relations exactly.

    A1, A2 and e are drawn first; the relations are linear in (C, f), so a
    random element of the nullspace of the stacked system completes the rep.
    """
    rng = random.Random(f"framedquiver:{n}:{c}:{field.name}:{seed}:{profile}")
    A1, A2, e = _draw_pencil_and_e(n, c, field, rng, profile)
    N = nullspace(relation_system(n, c, field, A1, A2, e))
    vec = _random_combination(N, rng)
    cc = c * c
    C = tuple(_unpack(vec, q * cc, c, c, field) for q in range(n))
    f = tuple(_unpack(vec, n * cc + q * c, c, 1, field) for q in range(n - 1))
    return FramedRep(n, c, field, A1, A2, C, e, f)


def sample_augmented_rep(n: int, c: int, field: Field, seed: int, profile: str = "generic") -> AugmentedRep:
    """Like :func:`sample_rep` but with independent (B_q, D_{q+1}, f_q) blocks."""
    rng = random.Random(f"framedquiver-aug:{n}:{c}:{field.name}:{seed}:{profile}")
    A1, A2, e = _draw_pencil_and_e(n, c, field, rng, profile)
    cc = c * c
    rows = _relation_rows(
        field, c, A1, A2, e,
        idx_left=lambda k, l: k * c + l,
        idx_right=lambda k, l: cc + k * c + l,
        idx_f=lambda i: 2 * cc + i,
    )
    N = nullspace(_dense(field, rows, 2 * cc + c))
    B, D, f = [], [], []
    for _ in range(n - 1):
        vec = _random_combination(N, rng)
        B.append(_unpack(vec, 0, c, c, field))
        D.append(_unpack(vec, cc, c, c, field))
        f.append(_unpack(vec, 2 * cc, c, 1, field))
    return AugmentedRep(n, c, field, A1, A2, tuple(B), tuple(D), e, tuple(f))


# -- monad dimensions -------------------------------------------------------------------

@dataclass(frozen=True)
class MonadDims:
    n: int
    r: int
    a: int
    c: int
    k1: int
    k2: int
    k3: int
    k4: int

    @property
    def k(self) -> tuple[int, int, int, int]:
        return (self.k1, self.k2, self.k3, self.k4)

    @property
    def nonempty(self) -> bool:
        return self.k1 >= 0


def monad_dims(n: int, r: int, a: int, c: int) -> MonadDims:
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    if not 0 <= a <= r - 1:
        raise ValueError(f"a = {a} outside the normalized range [0, {r - 1}]")
    k1 = c + n * a * (a - 1) // 2  # a(a-1) is even
    return MonadDims(n, r, a, c, k1, k1 + n * a, k1 + (n - 1) * a, k1 + r - a)


def moduli_dim(n: int, r: int, a: int, c: int) -> int:
    monad_dims(n, r, a, c)
    return 2 * r * c + (r - 1) * n * a * a
