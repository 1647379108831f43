import random
from fractions import Fraction

import pytest
from mpmath import exp, fabs, mpf, pi, workprec, conj as mconj

from formclass import (
    DomainError,
    Mat2,
    RATIONALS,
    build_cm_field,
    cm_type,
    embed,
    regular_rep,
    verify_relative_basis,
)
from formclass.cm_field import coords_in_basis


def test_build_examples(QQ, F5, K23, Ki, K5):
    assert K23.disc == QQ.elem(-23)
    assert Ki.disc == QQ.elem(-4)
    # disc of Q(zeta5) over Q(sqrt5) is (-5-sqrt5)/2, totally negative
    d = K5.disc
    assert d.sign_at(0) < 0 and d.sign_at(1) < 0
    assert d == F5.elem(-2, -1)


def test_build_rejects_non_cm(QQ, F5):
    with pytest.raises(DomainError):
        build_cm_field(QQ, QQ.elem(0), QQ.elem(-1))
    # x^2 + sqrt5 x - 1 has mixed-sign discriminant
    with pytest.raises(DomainError):
        build_cm_field(F5, F5.elem(-1, 2), -F5.one)
    with pytest.raises(DomainError):
        build_cm_field(QQ, QQ.elem(Fraction(1, 2)), QQ.elem(1))


def test_conj_trace_norm(K23, QQ):
    w = K23.omega
    assert w.conj() == -K23.elem(K23.b) - w
    assert w.norm_rel() == QQ.elem(6)
    assert w.trace_rel() == -K23.b
    z = K23.elem(QQ.elem(3), QQ.elem(2))
    assert z.trace_rel() == QQ.elem(4)
    assert z.conj().conj() == z
    assert (z * z.conj()).y.is_zero()
    assert z * (1 / z) == K23.one


def test_embeddings_normalized(Ki, K5):
    with workprec(200):
        assert fabs(embed(Ki.omega, 1, 64) - 1j) < mpf(2) ** -60
        e1 = embed(K5.omega, 1, 128)
        e2 = embed(K5.omega, 2, 128)
        assert fabs(e1 - exp(2j * pi / 5)) < mpf(2) ** -120
        assert fabs(e2 - exp(4j * pi / 5)) < mpf(2) ** -120
    es = cm_type(K5, 96)
    assert es.g == 2 and all(v.imag > 0 for v in es.values)


def test_embed_identity_is_exact(K5):
    assert embed(K5.one, 1, 64) == 1


def test_conjugation_compatible_with_embeddings(K23, Ki, K5, K8):
    rng = random.Random(1)
    for K in (K23, Ki, K5, K8):
        for _ in range(25):
            if K.base.is_rational:
                z = K.elem(rng.randint(-9, 9), rng.randint(-9, 9))
            else:
                z = K.elem(
                    K.base.elem(rng.randint(-9, 9), rng.randint(-9, 9)),
                    K.base.elem(rng.randint(-9, 9), rng.randint(-9, 9)),
                )
            with workprec(160):
                for i in range(1, K.g + 1):
                    assert fabs(embed(z.conj(), i, 96) - mconj(embed(z, i, 96))) < mpf(2) ** (4 - 96)


def test_regular_rep_companion(K23, QQ):
    assert regular_rep(K23.omega, K23.omega) == Mat2(
        QQ.elem(-1), QQ.elem(-6), QQ.elem(1), QQ.elem(0)
    )
    assert regular_rep(K23.one, K23.omega) == Mat2.identity(QQ)
    with pytest.raises(DomainError):
        regular_rep(K23.omega, K23.one)


def test_regular_rep_is_ring_hom(K5, F5):
    rng = random.Random(6)
    xi = K5.omega + K5.elem(F5.elem(1, 1))
    for _ in range(100):
        nu = K5.elem(
            F5.elem(rng.randint(-3, 3), rng.randint(-3, 3)),
            F5.elem(rng.randint(-3, 3), rng.randint(-3, 3)),
        )
        la = K5.elem(
            F5.elem(rng.randint(-3, 3), rng.randint(-3, 3)),
            F5.elem(rng.randint(-3, 3), rng.randint(-3, 3)),
        )
        h1, h2 = regular_rep(nu, xi), regular_rep(la, xi)
        assert h1 * h2 == regular_rep(nu * la, xi)
        assert h1.det() == nu.norm_rel()
        assert h1.a + h1.d == nu.trace_rel()


def test_coords_in_basis_roundtrip(K5, F5):
    xi = K5.omega * K5.omega + K5.one
    mu = K5.elem(F5.elem(2, -1), F5.elem(0, 3))
    p, q = coords_in_basis(mu, xi)
    assert p * xi + K5.elem(q) == mu


def test_verify_relative_basis(Ki, K23, K5, K8):
    assert verify_relative_basis(Ki, [Ki.one, Ki.omega])
    assert verify_relative_basis(K23, [K23.one, K23.omega])
    z = K5.omega
    assert verify_relative_basis(K5, [K5.one, z, z * z, z ** 3])
    w = K8.omega
    assert verify_relative_basis(K8, [K8.one, w, w * w, w ** 3])
    # an index-2 suborder is rejected
    assert not verify_relative_basis(Ki, [Ki.one, 2 * Ki.omega])
    # a witness that is not a ring errors out
    with pytest.raises(DomainError):
        verify_relative_basis(Ki, [Ki.one, Ki.elem(Fraction(1, 3))])
