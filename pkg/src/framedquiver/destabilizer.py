"""Destabilizing subrepresentations from a singular pencil.

Given a minimal polynomial solution v(lambda) = sum (-lambda)^a v_a of the
pencil, the smallest subrepresentation containing U0 = <v_0, ..., v_eps> breaks
(Q2') when U0 lies in ker e and (Q3') otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import ExtensionField, Field, Matrix, contains, span
from .exactla.linalg import embed_matrix
from .pencil import MinimalSolution, Pencil, minimal_solution
from .quiver import AugmentedRep, FramedRep, RotationElement, conic_points, embed_to_augmented, so2_act
from .stability import StabilityParam, Subrep, certify, violates_definition, violates_q23


class DestabilizerError(RuntimeError):
    """Preconditions failed or no rotation with e(v'_0) != 0 was found."""


@dataclass(frozen=True)
class UChain:
    spaces: tuple[Matrix, ...]   # U_0, U_1, ... (even on V0, odd on V1)
    stabilized_at: int           # first index whose space adds nothing new
    S0: Matrix
    S1: Matrix


def u_chain(rep: AugmentedRep, U0: Matrix) -> UChain:
    F, c = rep.field, rep.c
    spaces = [span(F, c, U0)]
    sums = [spaces[0], Matrix.zeros(F, c, 0)]
    i = 0
    while True:
        i += 1
        prev = spaces[-1]
        maps = (rep.A1, rep.A2) if i % 2 else rep.B + rep.D
        U = span(F, c, *(M @ prev for M in maps))
        spaces.append(U)
        side = i % 2
        if contains(sums[side], U):
            return UChain(tuple(spaces), i, sums[0], sums[1])
        sums[side] = span(F, c, sums[side], U)


@dataclass(frozen=True)
class DestabilizerResult:
    subrep: Subrep
    violated: str                 # "Q2'" or "Q3'"
    rotation: RotationElement
    case: str                     # "i" (U0 in ker e) or "ii"
    minimal: MinimalSolution
    chain: UChain
    notes: tuple[str, ...] = ()


def rotate_solution(sol: MinimalSolution, nu: RotationElement) -> MinimalSolution:
    """The minimal solution of the rotated pencil (nu1 A1 + nu2 A2, -nu2 A1 + nu1 A2).

    v'(lambda) = (nu1 - lambda nu2)^eps v(mu) with mu = (nu2 + lambda nu1) / (nu1 - lambda nu2).
    """
    F = nu.field
    eps = sol.epsilon
    c = sol.v[0].rows

    def pmul(p, q):
        out = [F.zero] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return out

    a = [nu.nu2, nu.nu1]              # nu2 + lambda nu1
    b = [nu.nu1, F.neg(nu.nu2)]       # nu1 - lambda nu2
    coeffs = [[F.zero] * c for _ in range(eps + 1)]  # coefficient of lambda^beta in v'(lambda)
    for alpha, v in enumerate(sol.v):
        scal = [F.one]
        for _ in range(alpha):
            scal = pmul(scal, a)
        for _ in range(eps - alpha):
            scal = pmul(scal, b)
        sign = F.one if alpha % 2 == 0 else F.neg(F.one)
        for beta, s in enumerate(scal):
            s = F.mul(sign, s)
            for r in range(c):
                coeffs[beta][r] = F.add(coeffs[beta][r], F.mul(s, v.data[r][0]))
    vs = []
    for beta, col in enumerate(coeffs):
        m = Matrix.column(F, col)
        vs.append(m if beta % 2 == 0 else -m)
    return MinimalSolution(eps, tuple(vs))


def _e_of_rotated_v0(e: Matrix, sol: MinimalSolution, nu: RotationElement):
    """e(v'_0) = sum_a (-nu2)^a nu1^(eps - a) e(v_a)."""
    F = nu.field
    acc = F.zero
    for a, v in enumerate(sol.v):
        ev = (e @ v).data[0][0]
        acc = F.add(acc, F.mul(F.mul(F.pow(F.neg(nu.nu2), a), F.pow(nu.nu1, sol.epsilon - a)), ev))
    return acc


def _rotation_candidates(F: Field, eps: int):
    if F.is_finite:
        yield from conic_points(F)
        return
    # 2 eps + 1 distinct parameters always contain a good one
    yield from conic_points(F, limit=2 * eps + 4)


def _embed_solution(sol: MinimalSolution, target: ExtensionField) -> MinimalSolution:
    return MinimalSolution(sol.epsilon, tuple(embed_matrix(v, target) for v in sol.v))


def find_rotation(e: Matrix, sol: MinimalSolution, max_ext_degree: int = 4):
    """First SO(2) point with e(v'_0) != 0; over tiny fields, look in extensions.

    Returns ``(nu, embedded_solution, embedded_e)``; the last two are the inputs
    themselves unless an extension was needed.
    """
    F = e.field
    for nu in _rotation_candidates(F, sol.epsilon):
        if not F.is_zero(_e_of_rotated_v0(e, sol, nu)):
            return nu, sol, e
    if not F.is_finite:
        raise DestabilizerError("no rotation found in the parameter sweep")
    base = F.degree
    for k in range(2, max_ext_degree + 1):
        E = ExtensionField(F.characteristic, base * k)
        sol_e, e_e = _embed_solution(sol, E), embed_matrix(e, E)
        for nu in conic_points(E):
            if not E.is_zero(_e_of_rotated_v0(e_e, sol_e, nu)):
                return nu, sol_e, e_e
    raise DestabilizerError(f"no rotation with e(v'_0) != 0 in extensions up to degree {max_ext_degree}")


def destabilizer_from_singular_pencil(rep, max_ext_degree: int = 4) -> DestabilizerResult:
    if isinstance(rep, FramedRep):
        rep = embed_to_augmented(rep)
    from .quiver import check_relations_augmented

    if not check_relations_augmented(rep).passed:
        raise DestabilizerError("representation does not satisfy the augmented relations")
    p = Pencil(rep.A1, rep.A2)
    try:
        sol = minimal_solution(p)
    except ValueError as exc:
        raise DestabilizerError(str(exc)) from exc
    F, c = rep.field, rep.c
    U0 = span(F, c, *sol.v)
    notes = []
    if (rep.e @ U0).is_zero():
        case, expected = "i", "Q2'"
        nu = RotationElement.identity(F)
        chain = u_chain(rep, U0)
    else:
        case, expected = "ii", "Q3'"
        nu, sol_used, e_used = find_rotation(rep.e, sol, max_ext_degree)
        chain = u_chain(rep, U0)
        if nu.field == F:
            rotated = so2_act(nu, rep)
            rsol = rotate_solution(sol, nu)
            if not rsol.is_valid(Pencil(rotated.A1, rotated.A2)):
                raise DestabilizerError("rotated minimal solution failed its chain equations")
            rchain = u_chain(rotated, span(F, c, *rsol.v))
            # the subrepresentation lattice is rotation invariant
            if not (_same(rchain.S0, chain.S0) and _same(rchain.S1, chain.S1)):
                raise DestabilizerError("rotated chain produced a different subrepresentation")
        else:
            notes.append(f"rotation taken over {nu.field.name}; the subrepresentation is computed over {F.name}")
    sub = certify(rep, chain.S0, chain.S1)
    got = violates_q23(rep, sub)
    if got != expected:
        raise DestabilizerError(f"case {case} subrepresentation {sub.dims} does not violate {expected}")
    if violates_definition(rep, StabilityParam.theta_c(c), sub) is None:
        raise DestabilizerError("subrepresentation passes the stability inequalities at theta_c")
    return DestabilizerResult(sub, got, nu, case, sol, chain, tuple(notes))


def _same(U: Matrix, W: Matrix) -> bool:
    return U.cols == W.cols and contains(U, W)
