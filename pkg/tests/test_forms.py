import random
from fractions import Fraction

import pytest
from mpmath import fabs, mpc, mpf, workprec

from formclass import (
    DomainError,
    GammaMatrix,
    Mat2,
    NotAnIdealError,
    QuadForm,
    act,
    cm_point,
    conj_ideal,
    embed,
    equivalence_certificate,
    equivalent,
    form_from_point,
    ideal_of,
    is_totally_positive,
    membership,
    mul,
    omega_of,
    principal_form,
    totally_positive_rep,
    unit_ideal,
)
from formclass.ideals import scale_ideal


def rand_gamma(rng, field, N, steps=4):
    m = Mat2.identity(field)
    for _ in range(steps):
        if field.is_rational:
            t = field.elem(rng.randint(-3, 3))
        else:
            t = field.elem(rng.randint(-2, 2), rng.randint(-2, 2))
        if rng.random() < 0.5:
            m = m * Mat2(field.one, t, field.zero, field.one)
        else:
            m = m * Mat2(field.one, field.zero, t * N, field.one)
    return GammaMatrix(m, N)


def sample_forms(K, N, rng, count=6):
    """A few members of the level-N family: the principal form moved around."""
    out = [principal_form(K)]
    while len(out) < count:
        Q = act(out[rng.randrange(len(out))], rand_gamma(rng, K.base, N))
        if membership(Q, N, K):
            out.append(Q)
    return out


def test_form_invariants_enforced(QQ):
    with pytest.raises(DomainError):
        QuadForm(QQ.elem(2), QQ.elem(2), QQ.elem(4))  # imprimitive
    with pytest.raises(DomainError):
        QuadForm(QQ.elem(-1), QQ.elem(0), QQ.elem(-1))  # a < 0
    with pytest.raises(DomainError):
        QuadForm(QQ.elem(1), QQ.elem(4), QQ.elem(1))  # positive discriminant


def test_membership_examples(QQ, K23):
    assert membership(principal_form(K23), 7, K23)
    Q = QuadForm(QQ.elem(2), QQ.elem(1), QQ.elem(3))
    assert not membership(Q, 2, K23)
    assert membership(Q, 5, K23)
    # wrong discriminant
    Q47 = QuadForm(QQ.elem(2), QQ.elem(1), QQ.elem(6))
    assert not membership(Q47, 5, K23)


def test_gamma_validation(QQ, F5):
    with pytest.raises(DomainError):
        GammaMatrix(Mat2(QQ.elem(1), QQ.elem(0), QQ.elem(1), QQ.elem(1)), 5)  # c != 0 mod 5
    with pytest.raises(DomainError):
        GammaMatrix(Mat2(QQ.elem(2), QQ.elem(0), QQ.elem(0), QQ.elem(1)), 1)  # det not a unit
    with pytest.raises(DomainError):
        GammaMatrix(Mat2(QQ.elem(1), QQ.elem(0), QQ.elem(0), QQ.elem(-1)), 1)  # det < 0
    g = GammaMatrix(Mat2(F5.fundamental_unit, F5.zero, F5.zero, F5.one), 3)
    assert not g.plus  # determinant has a negative embedding


def test_act_example(QQ, K23):
    g = GammaMatrix(Mat2(QQ.elem(1), QQ.elem(1), QQ.elem(0), QQ.elem(1)), 1)
    Q2 = act(principal_form(K23), g)
    assert (Q2.a, Q2.b, Q2.c) == (QQ.elem(1), QQ.elem(3), QQ.elem(8))
    assert act(principal_form(K23), GammaMatrix(Mat2.identity(QQ), 1)) == principal_form(K23)


def test_action_is_group_action(QQ, K23, K5):
    rng = random.Random(101)
    for K, N in ((K23, 5), (K5, 2)):
        forms = sample_forms(K, N, rng, 4)
        for _ in range(40):
            Q = forms[rng.randrange(len(forms))]
            g1 = rand_gamma(rng, K.base, N)
            g2 = rand_gamma(rng, K.base, N)
            both = GammaMatrix(g1.mat * g2.mat, N)
            assert act(act(Q, g1), g2) == act(Q, both)
            assert membership(act(Q, g1), N, K)
            assert act(Q, g1).disc == K.disc


def test_omega_root_and_moebius(QQ, K23, K5):
    rng = random.Random(7)
    for K, N in ((K23, 5), (K5, 3)):
        for Q in sample_forms(K, N, rng, 5):
            w = omega_of(Q, K)
            assert Q.value(w, K.one).is_zero()
            g = rand_gamma(rng, K.base, N)
            Qg = act(Q, g)
            # the root transforms by the Moebius action
            assert omega_of(Q, K) == g.mobius(omega_of(Qg, K))


def test_omega_injective(QQ, K23):
    rng = random.Random(13)
    seen = {}
    for Q in sample_forms(K23, 5, rng, 30):
        w = omega_of(Q, K23)
        key = (w.x, w.y)
        if key in seen:
            assert seen[key] == Q
        seen[key] = Q


def test_ideal_of_scaled_conjugate(QQ, K23, K5):
    rng = random.Random(19)
    for K, N in ((K23, 5), (K5, 2)):
        for Q in sample_forms(K, N, rng, 6):
            I = ideal_of(Q, K)
            assert scale_ideal(Q.a, mul(I, conj_ideal(I))) == unit_ideal(K)


def test_form_from_point_roundtrip(QQ, K23, Ki, K5):
    rng = random.Random(23)
    for K, N in ((K23, 5), (Ki, 3), (K5, 2)):
        for Q in sample_forms(K, N, rng, 6):
            assert form_from_point(omega_of(Q, K), N, K) == Q
    assert form_from_point(K5.omega, 1, K5) == principal_form(K5)


def test_form_from_point_unit_scaling(K5, F5):
    # z = omega/eps exercises the unit-square discriminant adjustment
    eps = F5.theta
    z = K5.omega / K5.elem(eps)
    Q = form_from_point(z, 1, K5)
    assert Q.disc == K5.disc
    assert omega_of(Q, K5) == z


def test_form_from_point_rejects(QQ, Ki, K23):
    with pytest.raises(DomainError):
        form_from_point(Ki.elem(3), 1, Ki)  # in the base field
    with pytest.raises(DomainError):
        form_from_point(-Ki.omega, 1, Ki)  # lower half-plane
    with pytest.raises(NotAnIdealError):
        form_from_point(K23.elem(0, Fraction(1, 5)), 1, K23)  # [omega/5, 1] not a module


def test_equivalence_distinct_classes(QQ, K23):
    P = principal_form(K23)
    Q = QuadForm(QQ.elem(2), QQ.elem(1), QQ.elem(3))
    assert not equivalent(P, Q, 1, K23)
    assert equivalent(P, P, 1, K23)
    assert equivalence_certificate(P, Q, 1, K23) is None


def test_equivalence_with_certificates(QQ, K23, K5):
    rng = random.Random(29)
    for K, N in ((K23, 5), (K23, 1), (K5, 2)):
        for Q in sample_forms(K, N, rng, 4):
            g = rand_gamma(rng, K.base, N)
            Qg = act(Q, g)
            assert equivalent(Q, Qg, N, K)
            cert = equivalence_certificate(Q, Qg, N, K)
            assert cert is not None
            assert act(Q, cert) == Qg


def test_certificate_totally_positive_det(QQ, K5):
    # when both forms are totally positive definite the certificate has
    # totally positive determinant
    rng = random.Random(31)
    N = 2
    for Q in sample_forms(K5, N, rng, 4):
        Qp = totally_positive_rep(Q, N, K5)
        g = rand_gamma(rng, K5.base, N)
        Qg = totally_positive_rep(act(Qp, g), N, K5)
        cert = equivalence_certificate(Qp, Qg, N, K5)
        assert cert is not None
        assert is_totally_positive(cert.mat.det())


def test_totally_positive_rep(QQ, K23, K8, F2):
    # one embedding: nothing to do
    Q = QuadForm(QQ.elem(2), QQ.elem(1), QQ.elem(3))
    assert totally_positive_rep(Q, 5, K23) == Q
    # mixed-sign leading coefficient over Q(sqrt2)
    a = F2.elem(-1, 1)  # -1+sqrt2 > 0, conjugate -1-sqrt2... sign pattern (+, -)
    Qm = QuadForm(a, F2.zero, F2.one / a)
    assert not Qm.is_totally_positive_definite()
    Qp = totally_positive_rep(Qm, 1, K8)
    assert Qp.is_totally_positive_definite()
    assert equivalent(Qm, Qp, 1, K8)
    assert totally_positive_rep(Qp, 1, K8) == Qp


def test_cm_point(Ki, K5):
    pts = cm_point(principal_form(Ki), Ki, 64)
    with workprec(128):
        assert fabs(pts[0] - mpc(0, 1)) < mpf(2) ** -60
    rng = random.Random(37)
    for Q in sample_forms(K5, 2, rng, 5):
        Qp = totally_positive_rep(Q, 2, K5)
        pts = cm_point(Qp, K5, 96)
        assert all(p.imag > 0 for p in pts)
        w = omega_of(Qp, K5)
        with workprec(160):
            for i, p in enumerate(pts):
                assert fabs(embed(-(w.conj()), i + 1, 96) - p) < mpf(2) ** (4 - 96)
