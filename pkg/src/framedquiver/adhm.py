"""ADHM conditions (P1)-(P3) for data (A1, A2; C1, ..., Cn; e)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .exactla import (
    ExtensionField,
    ExtensionRequired,
    Field,
    HomogPoly2,
    Matrix,
    Poly,
    charpoly,
    det_pencil_cofactor,
    nullspace,
)
from .exactla.fields import lcm
from .exactla.linalg import embed_matrix
from .pencil import Pencil, is_regular
from .quiver import AdhmDatum, FramedRep, RelationReport, p1_report, to_adhm

PASS, FAIL, INCOMPLETE = "pass", "fail", "incomplete"
DEFAULT_MAX_EXT_DEGREE = 4


@dataclass(frozen=True)
class ConditionResult:
    status: str
    detail: str = ""
    witness: Optional[dict] = None


@dataclass(frozen=True)
class AdhmReport:
    P1: ConditionResult
    P2: ConditionResult
    P3: ConditionResult
    relations: RelationReport

    @property
    def passed(self) -> bool:
        return all(r.status == PASS for r in (self.P1, self.P2, self.P3))


def adhm_p1(d: AdhmDatum) -> RelationReport:
    return p1_report(d.A1, d.A2, d.C)


def adhm_p2(d: AdhmDatum) -> ConditionResult:
    try:
        st = is_regular(Pencil(d.A1, d.A2))
    except ExtensionRequired:
        # tiny field: the form is still exact, only the witness point needs an extension
        form = det_pencil_cofactor(d.A1, d.A2)
        if form.is_zero():
            return ConditionResult(FAIL, "det(nu1 A1 + nu2 A2) vanishes identically")
        return ConditionResult(PASS, "determinant form is nonzero", {"det": form.format()})
    if st.regular:
        F = d.field
        return ConditionResult(PASS, "regular pencil", {"point": [F.format(x) for x in st.witness]})
    return ConditionResult(FAIL, "singular pencil", {"epsilon": st.minimal.epsilon})


# -- (P3) ---------------------------------------------------------------------------------

def _affine(form: HomogPoly2) -> Poly:
    """form(x, 1) as a polynomial in x = lambda1."""
    return Poly(form.field, list(reversed(form.coeffs)))


def forms_common_root(forms: list[HomogPoly2]):
    """Whether nonzero binary forms share a root over the algebraic closure.

    Returns ``(has_root, affine_gcd, at_infinity)``: ``affine_gcd`` collects the
    common roots [x : 1], and ``at_infinity`` says whether [1 : 0] is common.
    """
    F = forms[0].field
    g = None
    for f in forms:
        a = _affine(f)
        g = a if g is None else g.gcd(a)
    g = g.monic() if not g.is_zero() else g
    at_inf = all(F.is_zero(f.coeffs[0]) for f in forms)
    return (g.degree >= 1 or at_inf), g, at_inf


def _minor_forms(X: Matrix, Y: Matrix) -> list[HomogPoly2]:
    """Nonzero d x d minors of lambda1 X + lambda2 Y (X, Y are c x d)."""
    d = X.cols
    out = []
    for rows in combinations(range(X.rows), d):
        form = det_pencil_cofactor(X.submatrix(rows, range(d)), Y.submatrix(rows, range(d)))
        if not form.is_zero():
            out.append(form)
    return out


def _curve_form(F: Field, n: int, t, s) -> HomogPoly2:
    """lambda1^n mu1 + lambda2^n mu2 with mu1 = -t, mu2 = (-1)^n s."""
    coeffs = [F.zero] * (n + 1)
    coeffs[0] = F.neg(t)
    coeffs[n] = s if n % 2 == 0 else F.neg(s)
    return HomogPoly2(F, n, tuple(coeffs))


def _eigen_setup(d: AdhmDatum, max_ext_degree: int):
    """Working field with all eigenvalues of C1 A2 and Cn A1, and the embedded matrices."""
    F = d.field
    M = d.C[0] @ d.A2
    N = d.C[-1] @ d.A1
    pm, pn = charpoly(M), charpoly(N)
    if not F.is_finite:
        rm, rn = pm.roots_with_multiplicity(), pn.roots_with_multiplicity()
        complete = sum(m for _, m in rm) == d.c and sum(m for _, m in rn) == d.c
        return F, M, N, [r for r, _ in rm], [r for r, _ in rn], d.A1, d.A2, d.e, complete
    Lm, Ln = pm.splitting_degree(max_ext_degree), pn.splitting_degree(max_ext_degree)
    L = lcm(Lm, Ln) if Lm and Ln else None
    if L is None or L > max_ext_degree:
        return None
    if L == 1:
        W = F
        emb = lambda m: m  # noqa: E731
    else:
        W = ExtensionField(F.characteristic, F.degree * L)
        emb = lambda m: embed_matrix(m, W)  # noqa: E731
    M, N = emb(M), emb(N)
    return W, M, N, charpoly(M).roots(), charpoly(N).roots(), emb(d.A1), emb(d.A2), emb(d.e), True


def adhm_p3(d: AdhmDatum, max_ext_degree: int = DEFAULT_MAX_EXT_DEGREE) -> ConditionResult:
    """Search for v != 0 in ker e, common eigenvector of C1 A2 and Cn A1, killed by
    lambda2 A1 + lambda1 A2 for some [lambda1, lambda2] on the curve.

    For each eigenvalue pair (t, s) the admissible lambda are the common roots of
    the maximal minors of (lambda2 A1 + lambda1 A2) restricted to the joint
    eigenspace in ker e; the curve condition adds the form lambda1^n mu1 + lambda2^n mu2.
    Root tests are gcd computations, so they are exact over the algebraic closure
    once the eigenvalues are in the working field.
    """
    setup = _eigen_setup(d, max_ext_degree)
    if setup is None:
        return ConditionResult(
            INCOMPLETE, f"eigenvalues of C1A2 and CnA1 need an extension of degree > {max_ext_degree}"
        )
    W, M, N, tvals, svals, A1, A2, e, complete = setup
    c = d.c
    I = Matrix.identity(W, c)
    for t in tvals:
        for s in svals:
            E = nullspace(e.vstack(M - I.scale(t), N - I.scale(s)))
            if E.cols == 0:
                continue
            X, Y = A2 @ E, A1 @ E   # coefficients of lambda1 and lambda2
            minors = _minor_forms(X, Y)
            curve = _curve_form(W, d.n, t, s)
            mu = (W.neg(t), s if d.n % 2 == 0 else W.neg(s))
            if not minors:
                found = True
                cands = [] if curve.is_zero() else [curve]
            else:
                cands = minors if curve.is_zero() else minors + [curve]
                found, _, _ = forms_common_root(cands)
            if found:
                return ConditionResult(FAIL, "eigenvector in ker e on the curve", _p3_witness(W, E, X, Y, cands, mu))
    if not complete:
        return ConditionResult(INCOMPLETE, "characteristic polynomials do not split over the base field")
    return ConditionResult(PASS, f"no witness over {W.name}")


def _p3_witness(W: Field, E: Matrix, X: Matrix, Y: Matrix, forms: list[HomogPoly2], mu) -> dict:
    """A concrete (v, lambda, mu) when a common root lies in W, else the root's description."""
    lam = None
    if not forms:
        lam = (W.one, W.zero)
    else:
        _, g, at_inf = forms_common_root(forms)
        if at_inf:
            lam = (W.one, W.zero)
        elif g.degree >= 1:
            roots = g.roots()
            if roots:
                lam = (roots[0], W.one)
    out = {"mu": [W.format(x) for x in mu], "field": W.name}
    if lam is None:
        out["lambda"] = "root of " + " ".join(W.format(x) for x in g.coeffs)
        return out
    K = nullspace(X.scale(lam[0]) + Y.scale(lam[1]))
    v = E @ K.select_columns([0])
    out["lambda"] = [W.format(x) for x in lam]
    out["v"] = [W.format(x) for x in v.col(0)]
    return out


def adhm_check(d, max_ext_degree: int = DEFAULT_MAX_EXT_DEGREE) -> AdhmReport:
    if isinstance(d, FramedRep):
        d = to_adhm(d)
    rel = adhm_p1(d)
    p1 = ConditionResult(PASS if rel.passed else FAIL, "" if rel.passed else f"residual at q = {rel.failures}")
    return AdhmReport(p1, adhm_p2(d), adhm_p3(d, max_ext_degree), rel)
