"""Stability verdicts for framed representations and for Kronecker pairs.

Exhaustive mode enumerates every S0 in V0.  For a fixed S0 the admissible S1
are exactly the subspaces with A(S0) <= S1 <= P(S0), where A(S0) = A1 S0 + A2 S0
and P(S0) is the intersection of the preimages of S0 under the V1 -> V0 arrows.
Both stability inequalities only see (dim S0, dim S1) and two flags of S0, so
each S0 contributes the interval dim A(S0) .. dim P(S0) of values of dim S1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .exactla import Field, Matrix, PrimeField, contains, dim, intersection, preimage, span
from .quiver import AugmentedRep, FramedRep
from .subspaces import BudgetExceeded, EchelonSubspace, subspace_list, prime_subspace_arrays

DEFAULT_MAX_PAIRS = 2_000_000

SEMISTABLE = "Semistable"
STABLE = "Stable"
UNSTABLE = "Unstable"
INCONCLUSIVE = "Inconclusive"


class UnsupportedMethod(ValueError):
    """Exhaustive verdicts need a finite field."""


class NotASubrep(ValueError):
    """A subspace pair failed its invariance certificate."""


@dataclass(frozen=True)
class StabilityParam:
    theta0: Fraction
    theta1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "theta0", Fraction(self.theta0))
        object.__setattr__(self, "theta1", Fraction(self.theta1))

    @classmethod
    def theta_c(cls, c: int) -> "StabilityParam":
        return cls(Fraction(2 * c), Fraction(1 - 2 * c))

    def dot(self, s0: int, s1: int) -> Fraction:
        return self.theta0 * s0 + self.theta1 * s1

    def __str__(self) -> str:
        return f"{self.theta0},{self.theta1}"


class ChamberClass(str, Enum):
    InteriorGamma = "InteriorGamma"
    WallR1 = "WallR1"
    WallR2 = "WallR2"
    Outside = "Outside"


def classify_theta(theta: StabilityParam, c: int) -> ChamberClass:
    if c < 1:
        raise ValueError("c must be positive")
    t0, t1 = theta.theta0, theta.theta1
    if t0 <= 0:
        return ChamberClass.Outside
    lower = t0 + t1
    upper = (c - 1) * t0 + c * t1
    if lower > 0 and upper < 0:
        return ChamberClass.InteriorGamma
    if lower == 0:
        return ChamberClass.WallR1
    if upper == 0:
        return ChamberClass.WallR2
    return ChamberClass.Outside


def wall_parameter(wall: str, c: int) -> StabilityParam:
    if wall == "R1":
        return StabilityParam(1, -1)
    if wall == "R2":
        return StabilityParam(c, 1 - c)
    raise ValueError(f"unknown wall {wall!r}")


# -- representation views -----------------------------------------------------------

@dataclass(frozen=True)
class Arrows:
    """The arrow data relevant to subrepresentations."""

    field: Field
    c: int
    amaps: tuple[Matrix, ...]    # V0 -> V1
    cmaps: tuple[Matrix, ...]    # V1 -> V0
    e: Optional[Matrix]
    f: tuple[Matrix, ...]


def arrows_of(rep) -> Arrows:
    if isinstance(rep, Arrows):
        return rep
    if isinstance(rep, (FramedRep, AugmentedRep)):
        return Arrows(rep.field, rep.c, (rep.A1, rep.A2), rep.v_to_v0_maps, rep.e, rep.f)
    raise TypeError(f"no stability notion for {type(rep).__name__}")


def kronecker_arrows(A1: Matrix, A2: Matrix) -> Arrows:
    return Arrows(A1.field, A1.rows, (A1, A2), (), None, ())


@dataclass(frozen=True)
class Subrep:
    S0: Matrix   # basis columns of S0 in V0
    S1: Matrix   # basis columns of S1 in V1

    @property
    def s0(self) -> int:
        return self.S0.cols

    @property
    def s1(self) -> int:
        return self.S1.cols

    @property
    def dims(self) -> tuple[int, int]:
        return (self.s0, self.s1)

    def is_invariant(self, rep) -> bool:
        ar = arrows_of(rep)
        return all(contains(self.S1, A @ self.S0) for A in ar.amaps) and all(
            contains(self.S0, C @ self.S1) for C in ar.cmaps
        )

    def in_ker_e(self, rep) -> bool:
        ar = arrows_of(rep)
        return ar.e is None or (ar.e @ self.S0).is_zero()

    def contains_im_f(self, rep) -> bool:
        return all(contains(self.S0, fq) for fq in arrows_of(rep).f)


def certify(rep, S0: Matrix, S1: Matrix) -> Subrep:
    """Build a Subrep after checking independence and invariance."""
    if dim(S0) != S0.cols or dim(S1) != S1.cols:
        raise NotASubrep("basis columns are dependent")
    sub = Subrep(S0, S1)
    if not sub.is_invariant(rep):
        raise NotASubrep("subspace pair is not invariant under the arrows")
    return sub


@dataclass(frozen=True)
class Verdict:
    tag: str
    method: str
    witness: Optional[Subrep] = None
    violated: Optional[str] = None
    stable: Optional[bool] = None
    notes: tuple[str, ...] = ()

    @property
    def semistable(self) -> bool:
        return self.tag in (SEMISTABLE, STABLE)


# -- the scan ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanTable:
    """Per-S0 rows ``(s0, in_ker_e, contains_im_f, dim A(S0), dim P(S0), valid)``."""

    arrows: Arrows
    subspaces: tuple[EchelonSubspace, ...]
    table: np.ndarray


def _prime_arrays(ar: Arrows):
    c = ar.c
    amaps = np.array([m.tolist() for m in ar.amaps], dtype=np.int64).reshape(len(ar.amaps), c, c)
    cmaps = np.array([m.tolist() for m in ar.cmaps], dtype=np.int64).reshape(len(ar.cmaps), c, c)
    erows = np.array([ar.e.row(0)] if ar.e is not None else [], dtype=np.int64).reshape(-1, c)
    fvecs = np.array([fq.col(0) for fq in ar.f], dtype=np.int64).reshape(-1, c)
    return amaps, cmaps, erows, fvecs


def _generic_row(ar: Arrows, S0: Matrix, k: int) -> tuple[int, ...]:
    F, c = ar.field, ar.c
    in_ker = int(ar.e is None or (ar.e @ S0).is_zero())
    has_f = int(all(contains(S0, fq) for fq in ar.f))
    AS = span(F, c, *(A @ S0 for A in ar.amaps))
    P = preimage_of(ar, S0)
    return (k, in_ker, has_f, AS.cols, P.cols, int(contains(P, AS)))


def preimage_of(ar: Arrows, S0: Matrix) -> Matrix:
    """Largest S1 with C(S1) <= S0 for every V1 -> V0 arrow C."""
    P = Matrix.identity(ar.field, ar.c)
    for C in ar.cmaps:
        P = intersection(P, preimage(C, S0))
        if P.cols == 0:
            break
    return P


def scan_generic(ar: Arrows) -> np.ndarray:
    subs = subspace_list(ar.field, ar.c)
    rows = [_generic_row(ar, s.basis(ar.field, ar.c), s.dim) for s in subs]
    return np.array(rows, dtype=np.int64).reshape(len(subs), 6)


def scan(rep, max_pairs: int = DEFAULT_MAX_PAIRS) -> ScanTable:
    ar = arrows_of(rep)
    F = ar.field
    if not F.is_finite:
        raise UnsupportedMethod(f"exhaustive enumeration is impossible over {F.name}; use criteria mode")
    from .subspaces import subspace_count

    N = subspace_count(ar.c, F.order)
    if N * N > max_pairs:
        raise BudgetExceeded(f"{N * N} subspace pairs exceed the cap of {max_pairs}")
    return _scan_cached(ar)


@lru_cache(maxsize=512)
def _scan_cached(ar: Arrows) -> ScanTable:
    F = ar.field
    subs = subspace_list(F, ar.c)
    if isinstance(F, PrimeField) and ar.c > 0:
        bases, dims, pivots = prime_subspace_arrays(F.p, ar.c)
        table = kernels.scan_subspaces(bases, dims, pivots, *_prime_arrays(ar), F.p)
    else:
        table = scan_generic(ar)
    table.setflags(write=False)
    return ScanTable(ar, subs, table)


def build_s1(ar: Arrows, S0: Matrix, s1: int) -> Matrix:
    """An S1 of dimension s1 with A(S0) <= S1 <= P(S0): A(S0) extended greedily from P(S0)."""
    cur = span(ar.field, ar.c, *(A @ S0 for A in ar.amaps))
    if cur.cols > s1:
        raise ValueError("requested dim S1 is below dim A(S0)")
    P = preimage_of(ar, S0)
    for j in range(P.cols):
        if cur.cols == s1:
            break
        col = P.select_columns([j])
        if not contains(cur, col):
            cur = cur.hstack(col)
    if cur.cols != s1:
        raise ValueError("requested dim S1 exceeds dim P(S0)")
    return cur


def _witness(st: ScanTable, index: int, s1: int, rep) -> Subrep:
    ar = st.arrows
    S0 = st.subspaces[index].basis(ar.field, ar.c)
    return certify(rep, S0, build_s1(ar, S0, s1))


def _first(cands: Iterable[tuple[int, int, int, str]]):
    best = None
    for cand in cands:
        if best is None or cand[:3] < best[:3]:
            best = cand
    return best


def _pairs(st: ScanTable):
    """(index, s0, in_ker, has_f, s1) for every admissible dimension pair."""
    for idx, (s0, in_ker, has_f, amin, cmax, valid) in enumerate(st.table.tolist()):
        if valid:
            for s1 in range(amin, cmax + 1):
                yield idx, s0, in_ker, has_f, s1


# -- Definition-level verdicts ---------------------------------------------------------------

def check_theta_ss(
    rep,
    theta: StabilityParam,
    *,
    stable: bool = False,
    mode: str = "exhaustive",
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> Verdict:
    """theta-semistability by the subrepresentation inequalities.

    The tag is Semistable or Unstable; with ``stable=True`` a stable rep is
    tagged Stable.  ``Verdict.stable`` is filled in either way.
    """
    if mode == "criteria":
        return check_criteria(rep, theta)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    ar = arrows_of(rep)
    if ar.c == 0:
        return Verdict(STABLE if stable else SEMISTABLE, "exhaustive", stable=True)
    st = scan(rep, max_pairs)
    full = theta.dot(ar.c, ar.c)
    bad, ties, notes = [], set(), []
    for idx, s0, in_ker, has_f, s1 in _pairs(st):
        val = theta.dot(s0, s1)
        if in_ker and val > 0:
            bad.append((s0, s1, idx, "cond1"))
        elif has_f and val > full:
            bad.append((s0, s1, idx, "cond2"))
        else:
            if in_ker and val == 0 and (s0, s1) != (0, 0):
                ties.add((s0, s1, "cond1"))
            if has_f and val == full and (s0, s1) != (ar.c, ar.c):
                ties.add((s0, s1, "cond2"))
    first = _first(bad)
    if first is not None:
        s0, s1, idx, cond = first
        return Verdict(UNSTABLE, "exhaustive", _witness(st, idx, s1, rep), cond, stable=False)
    is_stable = not ties
    if ties == {(ar.c, ar.c, "cond1")}:
        notes.append("strict first inequality at S = (V0, V1) decided stability")
    tag = STABLE if (stable and is_stable) else SEMISTABLE
    return Verdict(tag, "exhaustive", stable=is_stable, notes=tuple(notes))


def violates_definition(rep, theta: StabilityParam, sub: Subrep) -> Optional[str]:
    """Which inequality the given subrepresentation breaks, if any."""
    c = arrows_of(rep).c
    val = theta.dot(sub.s0, sub.s1)
    if sub.in_ker_e(rep) and val > 0:
        return "cond1"
    if sub.contains_im_f(rep) and val > theta.dot(c, c):
        return "cond2"
    return None


def violates_q23(rep, sub: Subrep) -> Optional[str]:
    s0, s1 = sub.dims
    if sub.in_ker_e(rep) and (s0 > s1 or (s0 == s1 and s0 > 0)):
        return "Q2'"
    if sub.contains_im_f(rep) and s0 > s1:
        return "Q3'"
    return None


def check_Q23(rep, subreps: Optional[Sequence[Subrep]] = None, max_pairs: int = DEFAULT_MAX_PAIRS) -> Verdict:
    """Conditions (Q2') and (Q3') applied verbatim."""
    if subreps is not None:
        for sub in subreps:
            if not sub.is_invariant(rep):
                raise NotASubrep("provided pair is not a subrepresentation")
            cond = violates_q23(rep, sub)
            if cond:
                return Verdict(UNSTABLE, "provided", sub, cond, stable=False)
        return Verdict(SEMISTABLE, "provided")
    ar = arrows_of(rep)
    if ar.c == 0:
        return Verdict(SEMISTABLE, "exhaustive")
    st = scan(rep, max_pairs)
    bad = []
    for idx, s0, in_ker, has_f, s1 in _pairs(st):
        if in_ker and (s0 > s1 or (s0 == s1 and s0 > 0)):
            bad.append((s0, s1, idx, "Q2'"))
        elif has_f and s0 > s1:
            bad.append((s0, s1, idx, "Q3'"))
    first = _first(bad)
    if first is None:
        return Verdict(SEMISTABLE, "exhaustive")
    s0, s1, idx, cond = first
    return Verdict(UNSTABLE, "exhaustive", _witness(st, idx, s1, rep), cond, stable=False)


def kronecker_ss(
    A1: Matrix, A2: Matrix, theta: StabilityParam, *, stable: bool = False, max_pairs: int = DEFAULT_MAX_PAIRS
) -> Verdict:
    """Slope semistability of the Kronecker pair over proper nontrivial subrepresentations."""
    ar = kronecker_arrows(A1, A2)
    c = ar.c
    if c == 0:
        return Verdict(STABLE if stable else SEMISTABLE, "exhaustive", stable=True)
    st = scan(ar, max_pairs)
    total = theta.dot(c, c)
    bad, strict_fail = [], False
    for idx, s0, _, _, s1 in _pairs(st):
        if (s0, s1) in ((0, 0), (c, c)):
            continue
        # slope(S) <= slope(V), cleared of the positive denominators
        lhs = theta.dot(s0, s1) * 2 * c
        rhs = total * (s0 + s1)
        if lhs > rhs:
            bad.append((s0, s1, idx, "slope"))
        elif lhs == rhs:
            strict_fail = True
    first = _first(bad)
    if first is not None:
        s0, s1, idx, cond = first
        return Verdict(UNSTABLE, "exhaustive", _witness(st, idx, s1, ar), cond, stable=False)
    tag = STABLE if (stable and not strict_fail) else SEMISTABLE
    return Verdict(tag, "exhaustive", stable=not strict_fail)


# -- criteria mode (any field) ----------------------------------------------------------------

def canonical_subreps(rep) -> list[Subrep]:
    """Subrepresentations available over any field without enumeration."""
    ar = arrows_of(rep)
    F, c = ar.field, ar.c
    V = Matrix.identity(F, c)
    zero = Matrix.zeros(F, c, 0)
    out = [Subrep(zero, zero), Subrep(V, V)]
    out.append(Subrep(zero, preimage_of(ar, zero)))
    out.append(Subrep(V, span(F, c, *(A @ V for A in ar.amaps))))
    return out


def check_criteria(rep, theta: StabilityParam) -> Verdict:
    """One-directional certificates: Unstable with a witness, or Inconclusive.

    Candidates are the canonical subrepresentations and, for a singular pencil,
    the destabilizer built from a minimal polynomial solution.
    """
    from .destabilizer import DestabilizerError, destabilizer_from_singular_pencil
    from .pencil import Pencil, is_regular

    cands = canonical_subreps(rep)
    notes = []
    if isinstance(rep, (FramedRep, AugmentedRep)) and rep.n >= 2:
        aug = rep if isinstance(rep, AugmentedRep) else None
        if aug is None:
            from .quiver import embed_to_augmented

            aug = embed_to_augmented(rep)
        try:
            status = is_regular(Pencil(rep.A1, rep.A2))
        except ValueError:
            status = None
        if status is not None and not status.regular:
            try:
                cands.insert(0, destabilizer_from_singular_pencil(aug).subrep)
            except DestabilizerError as exc:
                notes.append(f"destabilizer unavailable: {exc}")
    for sub in cands:
        cond = violates_definition(rep, theta, sub)
        if cond:
            return Verdict(UNSTABLE, "criteria", sub, cond, stable=False, notes=tuple(notes))
    return Verdict(INCONCLUSIVE, "criteria", notes=tuple(notes))
