import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_kronecker, brute_rep_theta

from framedquiver.exactla import GAUSSIAN, QQ, ExtensionField, Matrix, PrimeField
from framedquiver.pencil import Pencil, is_regular
from framedquiver.quiver import (
    PROFILES,
    FramedRep,
    GaugeElement,
    conic_points,
    embed_to_augmented,
    gauge_act,
    sample_augmented_rep,
    sample_rep,
    so2_act,
)
from framedquiver.stability import (
    INCONCLUSIVE,
    SEMISTABLE,
    STABLE,
    UNSTABLE,
    ChamberClass,
    NotASubrep,
    StabilityParam,
    Subrep,
    UnsupportedMethod,
    certify,
    check_Q23,
    check_theta_ss,
    classify_theta,
    kronecker_ss,
    wall_parameter,
)
from framedquiver.subspaces import BudgetExceeded

F5 = PrimeField(5)


def s(F, x):
    return Matrix.from_rows(F, [[F.coerce(x)]])


def scalar_rep(F, A1, A2, C, e, f):
    return FramedRep(len(C), 1, F, s(F, A1), s(F, A2), tuple(s(F, x) for x in C), s(F, e),
                     tuple(s(F, x) for x in f))


def zero_rep(F, n, c, e=None):
    Z = Matrix.zeros(F, c, c)
    e = Matrix.zeros(F, 1, c) if e is None else e
    return FramedRep(n, c, F, Z, Z, (Z,) * n, e, (Matrix.zeros(F, c, 1),) * (n - 1))


# -- worked examples -----------------------------------------------------------------------

def test_c1_semistable_example():
    rep = scalar_rep(F5, 1, 0, [0, 1], 1, [0])
    v = check_theta_ss(rep, StabilityParam(2, -1))
    assert v.tag == SEMISTABLE and v.witness is None


@pytest.mark.parametrize("c", [1, 2, 3])
def test_zero_pencil_unstable_with_full_v0(c):
    e = Matrix.from_rows(F5, [[1] + [0] * (c - 1)])
    rep = zero_rep(F5, 2, c, e)
    v = check_theta_ss(rep, StabilityParam.theta_c(c))
    assert v.tag == UNSTABLE
    # first violator in (s0, s1) order; (V0, 0) is one of the violators
    assert (c, 0) in brute_rep_theta(rep, 2 * c, 1 - 2 * c)[2]
    assert v.witness.s1 == 0


def test_c1_zero_rep_witness_is_v0_zero():
    rep = zero_rep(F5, 2, 1, s(F5, 1))
    v = check_theta_ss(rep, StabilityParam.theta_c(1))
    assert v.witness.dims == (1, 0) and v.violated == "cond2"


def test_empty_rep_vacuously_semistable():
    rep = zero_rep(F5, 2, 0)
    assert check_theta_ss(rep, StabilityParam(2, -1)).tag == SEMISTABLE
    assert check_theta_ss(rep, StabilityParam(2, -1), stable=True).tag == STABLE


def test_q23_examples():
    rep = embed_to_augmented(sample_rep(2, 2, F5, 3, "e=0"))
    v = check_Q23(rep)
    assert v.tag == UNSTABLE and v.violated == "Q2'"
    z = embed_to_augmented(zero_rep(F5, 2, 1, s(F5, 1)))
    v = check_Q23(z)
    assert v.tag == UNSTABLE and v.witness.dims == (1, 0) and v.violated == "Q3'"


def test_q23_with_provided_subreps():
    rep = embed_to_augmented(zero_rep(F5, 2, 1, s(F5, 1)))
    V, O = Matrix.identity(F5, 1), Matrix.zeros(F5, 1, 0)
    assert check_Q23(rep, [Subrep(O, O)]).tag == SEMISTABLE
    assert check_Q23(rep, [Subrep(O, O), Subrep(V, O)]).violated == "Q3'"
    bad = embed_to_augmented(scalar_rep(F5, 1, 0, [0, 0], 0, [0]))
    with pytest.raises(NotASubrep):
        check_Q23(bad, [Subrep(V, O)])


def test_kronecker_examples():
    assert kronecker_ss(s(F5, 1), s(F5, 0), StabilityParam(2, -1)).tag == SEMISTABLE
    v = kronecker_ss(s(F5, 0), s(F5, 0), StabilityParam(2, -1))
    assert v.tag == UNSTABLE and v.witness.dims == (1, 0)


def test_classify_theta_examples():
    assert classify_theta(StabilityParam(4, -3), 2) == ChamberClass.InteriorGamma
    for c in (1, 2, 5):
        assert classify_theta(StabilityParam(1, -1), c) == ChamberClass.WallR1
        assert classify_theta(StabilityParam.theta_c(c), c) == ChamberClass.InteriorGamma
        assert classify_theta(wall_parameter("R2", c), c) == ChamberClass.WallR2
    assert classify_theta(StabilityParam(2, -1), 2) == ChamberClass.WallR2
    assert classify_theta(StabilityParam(-1, 1), 2) == ChamberClass.Outside
    assert classify_theta(StabilityParam(1, 0), 2) == ChamberClass.Outside


# -- engine vs brute force ------------------------------------------------------------------

THETAS = [(2, -1), (1, -1), (4, -3), (3, -2), (6, -5), (-1, 2), (1, 1), (0, 0), (5, -4), (7, -3)]


@pytest.mark.parametrize("F,c", [(F5, 1), (F5, 2), (PrimeField(3), 2), (PrimeField(2), 3), (ExtensionField(2, 2), 2)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_theta_verdict_matches_pair_enumeration(F, c):
    for i in range(12):
        rep = sample_rep(2 + i % 2, c, F, i, PROFILES[i % 3])
        for t0, t1 in THETAS[: 5 if c < 3 else 2]:
            v = check_theta_ss(rep, StabilityParam(t0, t1))
            ss, stable, bad = brute_rep_theta(rep, t0, t1)
            assert (v.semistable, v.stable) == (ss, stable)
            if not ss:
                assert v.witness.dims == bad[0] or v.witness.dims in bad
                assert v.witness.is_invariant(rep)


def test_witness_is_lexicographically_first():
    for i in range(20):
        rep = sample_rep(2, 2, F5, i, PROFILES[i % 3])
        v = check_theta_ss(rep, StabilityParam.theta_c(2))
        if not v.semistable:
            assert v.witness.dims == brute_rep_theta(rep, 4, -3)[2][0]


def test_augmented_verdicts_match_pair_enumeration():
    for i in range(15):
        rep = sample_augmented_rep(3, 2, F5, i, PROFILES[i % 3])
        v = check_theta_ss(rep, StabilityParam.theta_c(2))
        assert v.semistable == brute_rep_theta(rep, 4, -3)[0]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=8, max_size=8), st.integers(-3, 3), st.integers(-3, 3))
def test_kronecker_matches_slope_enumeration(bits, t0, t1):
    F3 = PrimeField(3)
    A1 = Matrix(F3, 2, 2, ((bits[0], bits[1]), (bits[2], bits[3])))
    A2 = Matrix(F3, 2, 2, ((bits[4], bits[5]), (bits[6], bits[7])))
    assert kronecker_ss(A1, A2, StabilityParam(t0, t1)).semistable == brute_kronecker(A1, A2, t0, t1)


def test_kronecker_theta_c_iff_regular_over_f3():
    rng = random.Random(8)
    F3 = PrimeField(3)
    for _ in range(100):
        A1 = Matrix(F3, 2, 2, tuple(tuple(rng.randrange(3) for _ in range(2)) for _ in range(2)))
        A2 = Matrix(F3, 2, 2, tuple(tuple(rng.randrange(3) for _ in range(2)) for _ in range(2)))
        assert kronecker_ss(A1, A2, StabilityParam.theta_c(2)).semistable == is_regular(Pencil(A1, A2)).regular


# -- lemma-level properties ---------------------------------------------------------------

def test_q23_agrees_with_theta_c():
    for i in range(120):
        n, c = 2 + i % 3, 1 + i % 2
        rep = sample_augmented_rep(n, c, F5, i, PROFILES[i % 3])
        assert check_Q23(rep).tag == check_theta_ss(rep, StabilityParam.theta_c(c)).tag


def test_lambda_and_augmented_verdicts_agree():
    for i in range(60):
        rep = sample_rep(2 + i % 3, 1 + i % 2, F5, i, PROFILES[i % 3])
        th = StabilityParam.theta_c(rep.c)
        a = check_theta_ss(rep, th)
        b = check_theta_ss(embed_to_augmented(rep), th)
        assert (a.tag, a.stable) == (b.tag, b.stable)


def test_semistable_implies_regular_pencil():
    for i in range(90):
        rep = sample_rep(2, 2, F5, i, PROFILES[i % 3])
        if check_theta_ss(rep, StabilityParam.theta_c(2)).semistable:
            assert is_regular(Pencil(rep.A1, rep.A2)).regular
            assert kronecker_ss(rep.A1, rep.A2, StabilityParam.theta_c(2)).semistable
            assert all(fq.is_zero() for fq in rep.f)


def test_interior_verdicts_constant_and_stable():
    interior = [StabilityParam(t0, t1) for t0, t1 in [(4, -3), (3, -2), (5, -4), (7, -5), (10, -7)]]
    for th in interior:
        assert classify_theta(th, 2) == ChamberClass.InteriorGamma
    for i in range(20):
        rep = sample_rep(2, 2, F5, i, PROFILES[i % 3])
        verdicts = [check_theta_ss(rep, th, stable=True) for th in interior]
        assert len({v.tag for v in verdicts}) == 1
        # inside the chamber semistable and stable coincide
        assert verdicts[0].tag in (STABLE, UNSTABLE)


def test_stable_implies_semistable():
    for i in range(30):
        rep = sample_rep(2, 2, F5, i, PROFILES[i % 3])
        for t0, t1 in THETAS:
            v = check_theta_ss(rep, StabilityParam(t0, t1), stable=True)
            if v.tag == STABLE:
                assert v.semistable and v.stable


def test_strict_inequality_note_when_e_is_zero():
    # c = 1, e = 0, f != 0: at the wall R1 only S = (V0, V1) meets an inequality with equality
    # (with f = 0 the pair S = 0 would also tie the second inequality)
    rep = scalar_rep(F5, 1, 1, [0, 0], 0, [1])
    v = check_theta_ss(rep, StabilityParam(1, -1), stable=True)
    assert v.tag == SEMISTABLE and not v.stable
    assert v.notes == ("strict first inequality at S = (V0, V1) decided stability",)
    assert brute_rep_theta(rep, 1, -1)[:2] == (True, False)


def test_gauge_invariance():
    rng = random.Random(77)
    for i in range(20):
        rep = sample_rep(2, 2, F5, i, PROFILES[i % 3])
        g = GaugeElement.random(F5, 2, rng)
        th = StabilityParam.theta_c(2)
        assert check_theta_ss(rep, th).tag == check_theta_ss(gauge_act(g, rep), th).tag


def test_rotation_invariance():
    pts = conic_points(F5)
    for i in range(20):
        rep = sample_augmented_rep(3, 2, F5, i, PROFILES[i % 3])
        th = StabilityParam.theta_c(2)
        base = check_theta_ss(rep, th).tag
        for nu in pts:
            assert check_theta_ss(so2_act(nu, rep), th).tag == base


# -- refusals and criteria mode --------------------------------------------------------------

def test_exhaustive_refused_over_infinite_fields():
    with pytest.raises(UnsupportedMethod):
        check_theta_ss(sample_rep(2, 2, QQ, 0), StabilityParam.theta_c(2))


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        check_theta_ss(sample_rep(2, 3, F5, 0), StabilityParam.theta_c(3), max_pairs=100)


def test_criteria_mode_is_one_directional():
    rep = sample_rep(2, 2, QQ, 1, "forced-singular-pencil")
    v = check_theta_ss(rep, StabilityParam.theta_c(2), mode="criteria")
    assert v.tag == UNSTABLE and v.witness.is_invariant(rep)
    z = zero_rep(GAUSSIAN, 2, 2)
    assert check_theta_ss(z, StabilityParam.theta_c(2), mode="criteria").tag == UNSTABLE
    generic = [check_theta_ss(sample_rep(2, 2, QQ, i), StabilityParam.theta_c(2), mode="criteria").tag
               for i in range(5)]
    assert set(generic) <= {UNSTABLE, INCONCLUSIVE}


def test_certify_rejects_non_invariant_pairs():
    rep = scalar_rep(F5, 1, 0, [0, 0], 0, [0])
    V, O = Matrix.identity(F5, 1), Matrix.zeros(F5, 1, 0)
    assert certify(rep, O, V).dims == (0, 1)
    with pytest.raises(NotASubrep):
        certify(rep, V, O)


def test_theta_dot_is_exact():
    th = StabilityParam(Fraction(1, 3), Fraction(-1, 3))
    assert th.dot(3, 3) == 0 and str(th) == "1/3,-1/3"
