import pytest

from oracles import brute_p3_fails

from framedquiver.adhm import FAIL, INCOMPLETE, PASS, adhm_check, adhm_p2, adhm_p3, forms_common_root
from framedquiver.exactla import QQ, HomogPoly2, Matrix, PrimeField
from framedquiver.quiver import PROFILES, AdhmDatum, sample_rep, to_adhm


def s(F, x):
    return Matrix.from_rows(F, [[F.coerce(x)]])


def scalar_datum(F, A1, A2, C, e):
    return AdhmDatum(len(C), 1, F, s(F, A1), s(F, A2), tuple(s(F, x) for x in C), s(F, e))


def test_all_conditions_pass():
    rep = adhm_check(scalar_datum(QQ, 1, 1, [0], 1))
    assert (rep.P1.status, rep.P2.status, rep.P3.status) == (PASS, PASS, PASS)
    assert rep.passed


def test_p3_witness():
    r = adhm_p3(scalar_datum(QQ, 1, 0, [0], 0))
    assert r.status == FAIL
    assert r.witness["lambda"] == ["1", "0"]
    assert r.witness["mu"] == ["0", "0"]
    assert r.witness["v"] == ["1"]


@pytest.mark.parametrize("c", [1, 2, 3])
def test_zero_pencil_fails_p2(c):
    Z = Matrix.zeros(QQ, c, c)
    d = AdhmDatum(2, c, QQ, Z, Z, (Z, Z), Matrix.zeros(QQ, 1, c))
    assert adhm_p2(d).status == FAIL


def test_p1_failure_reported():
    d = AdhmDatum(2, 1, QQ, s(QQ, 1), s(QQ, 0), (s(QQ, 1), s(QQ, 0)), s(QQ, 1))
    assert adhm_check(d).P1.status == FAIL


def test_p2_on_tiny_field_uses_cofactor_form():
    F2 = PrimeField(2)
    I = Matrix.identity(F2, 3)
    Z = Matrix.zeros(F2, 3, 3)
    d = AdhmDatum(1, 3, F2, I, I, (Z,), Matrix.zeros(F2, 1, 3))
    assert adhm_p2(d).status == PASS


def test_p3_incomplete_over_q_when_eigenvalues_irrational():
    # C1 A2 = [[0, 2], [1, 0]] has eigenvalues +-sqrt 2
    A1 = Matrix.zeros(QQ, 2, 2)
    A2 = Matrix.identity(QQ, 2)
    C1 = Matrix.from_rows(QQ, [[QQ.zero, QQ.coerce(2)], [QQ.one, QQ.zero]])
    d = AdhmDatum(1, 2, QQ, A1, A2, (C1,), Matrix.from_rows(QQ, [[QQ.one, QQ.one]]))
    assert adhm_p3(d).status == INCOMPLETE


def test_p3_extension_cap():
    F5 = PrimeField(5)
    A2 = Matrix.identity(F5, 2)
    # charpoly x^2 - 2 is irreducible over F5: needs degree 2
    C1 = Matrix.from_rows(F5, [[0, 2], [1, 0]])
    d = AdhmDatum(1, 2, F5, Matrix.zeros(F5, 2, 2), A2, (C1,), Matrix.from_rows(F5, [[1, 1]]))
    assert adhm_p3(d, max_ext_degree=1).status == INCOMPLETE
    assert adhm_p3(d, max_ext_degree=2).status in (PASS, FAIL)
    assert (adhm_p3(d).status == FAIL) == brute_p3_fails(d)


def test_common_root_of_forms():
    F = QQ
    # nu1 nu2 and nu1^2 share [0, 1]; nu1 and nu2 share nothing
    f = HomogPoly2(F, 2, (F.zero, F.one, F.zero))
    g = HomogPoly2(F, 2, (F.one, F.zero, F.zero))
    assert forms_common_root([f, g])[0]
    a = HomogPoly2(F, 1, (F.one, F.zero))
    b = HomogPoly2(F, 1, (F.zero, F.one))
    assert not forms_common_root([a, b])[0]
    # both vanish at infinity [1, 0]
    x = HomogPoly2(F, 2, (F.zero, F.one, F.one))
    y = HomogPoly2(F, 2, (F.zero, F.zero, F.one))
    has, _, at_inf = forms_common_root([x, y])
    assert has and at_inf


@pytest.mark.parametrize("p", [3, 5])
def test_p3_matches_enumeration(p):
    F = PrimeField(p)
    for i in range(40):
        n, c = 1 + i % 2, 1 + (i // 2) % 2
        d = to_adhm(sample_rep(n, c, F, 1000 + i, PROFILES[i % 3]))
        assert (adhm_p3(d).status == FAIL) == brute_p3_fails(d)
