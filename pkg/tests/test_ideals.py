import random
from fractions import Fraction

import pytest

from formclass import (
    DomainError,
    InconclusiveSearch,
    NotAnIdealError,
    conj_ideal,
    factor_level,
    inv,
    is_coprime_to,
    mul,
    mult_congruent_one,
    principal_generator_mod,
    principal_ideal,
    ray_equal,
    reduce,
    unit_ideal,
    valuation,
    valuation_elem,
)
from formclass.forms import QuadForm, ideal_of
from formclass.ideals import (
    contains,
    denominator_ideal,
    generators_of,
    module_solve,
    norm_rel_ideal,
    scale_ideal,
)


def rand_elem(rng, K, span=9):
    if K.base.is_rational:
        return K.elem(rng.randint(-span, span), rng.randint(-span, span))
    return K.elem(
        K.base.elem(rng.randint(-span, span), rng.randint(-span, span)),
        K.base.elem(rng.randint(-span, span), rng.randint(-span, span)),
    )


def test_reduce_unit_ideal(K23, Ki, K5):
    for K in (K23, Ki, K5):
        OK = unit_ideal(K)
        assert OK.scale == K.base.one
        assert OK.b.is_zero() and OK.d == K.base.one
        assert reduce(K, [2 * K.omega, K.elem(2)]) == scale_ideal(K.elem(2), OK)


def test_reduce_rejects_non_module(Ki):
    with pytest.raises(NotAnIdealError):
        reduce(Ki, [Ki.omega, Ki.elem(2)])  # [i, 2] is not omega-closed


def test_reduce_scalar_equivariant(K23, Ki, K5):
    # reduce([nu w, nu]) spans the same module as nu * reduce([w, 1])
    rng = random.Random(17)
    for K in (K23, Ki, K5):
        points = [K.omega, K.omega / 2 if K is K23 else K.omega + K.one]
        for w in points:
            base = reduce(K, [w, K.one])
            for _ in range(20):
                nu = rand_elem(rng, K, 6)
                if nu.is_zero():
                    continue
                lhs = reduce(K, [nu * w, nu])
                assert lhs == reduce(K, [nu * g for g in base.basis()])


def test_lemma_fractional_triple(K23, QQ):
    # a * [omega_Q, 1] * conj = O_K for Q = 2x^2 + xy + 3y^2
    Q = QuadForm(QQ.elem(2), QQ.elem(1), QQ.elem(3))
    frac = ideal_of(Q, K23)
    prod = mul(frac, conj_ideal(frac))
    assert prod == scale_ideal(K23.elem(Fraction(1, 2)), unit_ideal(K23))
    assert scale_ideal(Q.a, prod) == unit_ideal(K23)


def test_inv_roundtrip(K23, Ki, K5):
    from formclass.class_groups import ideals_of_norm

    rng = random.Random(23)
    for K in (K23, Ki, K5):
        small = [J for n in range(1, 12) for J in ideals_of_norm(K, n)]
        done = 0
        while done < 35:
            z = rand_elem(rng, K, 7)
            if z.is_zero():
                continue
            A = mul(principal_ideal(z), rng.choice(small))
            assert mul(A, inv(A)) == unit_ideal(K)
            assert inv(inv(A)) == A
            done += 1


def test_norm_multiplicative(Ki, K5):
    from formclass.number_ring import canonical_associate

    rng = random.Random(29)
    for K in (Ki, K5):
        for _ in range(25):
            z1, z2 = rand_elem(rng, K, 5), rand_elem(rng, K, 5)
            if z1.is_zero() or z2.is_zero():
                continue
            A, B = principal_ideal(z1), principal_ideal(z2)
            nab = norm_rel_ideal(mul(A, B))
            assert nab == canonical_associate(norm_rel_ideal(A) * norm_rel_ideal(B))[0]


def test_coprimality(Ki, K23, QQ):
    assert is_coprime_to(unit_ideal(Ki), 12)
    one_i = Ki.elem(1, 1)
    assert not is_coprime_to(principal_ideal(one_i), 2)
    assert is_coprime_to(principal_ideal(one_i), 3)
    # fractional: (1+i)/2 has nonzero valuation at the ramified prime
    assert not is_coprime_to(principal_ideal(one_i / 2), 2)
    # forms: coprime iff gcd(a, N) = 1
    rng = random.Random(31)
    count = 0
    while count < 40:
        a = rng.randint(1, 12)
        b = rng.choice([x for x in range(-9, 10) if (x - 1) % 2 == 0])
        if (b * b + 23) % (4 * a):
            continue
        c = (b * b + 23) // (4 * a)
        try:
            Q = QuadForm(QQ.elem(a), QQ.elem(b), QQ.elem(c))
        except DomainError:
            continue
        for N in (2, 3, 5):
            import math

            assert is_coprime_to(ideal_of(Q, K23), N) == (math.gcd(a, N) == 1)
        count += 1


def test_mult_congruence_examples(Ki):
    assert mult_congruent_one(Ki.one, 7)
    # i - 1 has valuation 1 < 2 at the ramified prime over 2
    assert not mult_congruent_one(Ki.omega, 2)
    assert mult_congruent_one(Ki.one + 5 * Ki.omega, 5)
    nu = (Ki.elem(6) + 5 * Ki.omega) / (Ki.elem(6) - 5 * Ki.omega)
    assert mult_congruent_one(nu, 5)
    with pytest.raises(DomainError):
        mult_congruent_one(Ki.elem(1, 1), 2)


def test_mult_congruence_group_property(Ki, K5):
    rng = random.Random(37)
    for K, N in ((Ki, 5), (Ki, 3), (K5, 2)):
        done = 0
        while done < 30:
            w1, w2 = rand_elem(rng, K, 3), rand_elem(rng, K, 3)
            nu = K.one + N * w1
            la = K.one + N * w2
            if nu.is_zero() or la.is_zero():
                continue
            assert mult_congruent_one(nu, N)
            assert mult_congruent_one(la, N)
            assert mult_congruent_one(nu * la, N)
            done += 1


def test_congruence_agrees_with_valuations(Ki, K5):
    # the integral implementation against the p-adic definition
    rng = random.Random(41)
    for K, N in ((Ki, 4), (Ki, 5), (Ki, 6), (K5, 2)):
        mod = factor_level(K, N)
        checked = 0
        while checked < 25:
            nu = rand_elem(rng, K, 6)
            if nu.is_zero() or not is_coprime_to(principal_ideal(nu), N):
                continue
            direct = mult_congruent_one(nu, N)
            by_val = all(
                valuation_elem(p.ideal, nu - K.one) >= e if not (nu - K.one).is_zero() else True
                for p, e in mod.factors
            )
            assert direct == by_val
            checked += 1


def test_module_solve(K23):
    wq = K23.elem(0, Fraction(1, 2))
    sol = module_solve(K23.one, [wq, K23.one])
    assert sol is not None
    assert sol[0] * wq + sol[1] * K23.one == K23.one
    assert module_solve(K23.elem(0, Fraction(1, 3)), [K23.omega, K23.one]) is None


def test_denominator_ideal(K23):
    wq = K23.elem(0, Fraction(1, 2))  # (-1+sqrt-23)/4
    D = denominator_ideal(wq)
    assert D.is_integral()
    assert contains(D, K23.elem(2))
    # elements of D clear wq by definition
    for g in D.basis():
        assert (g * wq).is_integral()


def test_principal_generator_search(Ki):
    A = principal_ideal(Ki.elem(2, 1))
    gens = generators_of(A)
    assert gens and all(principal_ideal(g) == A for g in gens)
    assert principal_generator_mod(A, 1) is not None
    # the class of (2+i) is nontrivial modulo 5
    assert principal_generator_mod(A, 5) is None
    assert principal_generator_mod(unit_ideal(Ki), 5) is not None
    nu = principal_generator_mod(principal_ideal(Ki.elem(1, 2) * (Ki.one + 5 * Ki.omega)), 5)
    assert nu is None or mult_congruent_one(nu, 5)


def test_principal_generator_inconclusive_bound(Ki):
    A = principal_ideal(Ki.elem(7, 4))
    with pytest.raises(InconclusiveSearch):
        principal_generator_mod(A, 1, bound=2)


def test_nonprincipal_class(K23):
    # the ideal of the nontrivial form class is not principal in O_{Q(sqrt-23)}
    from formclass.class_groups import integral_coprime_rep

    Q = QuadForm(K23.base.elem(2), K23.base.elem(1), K23.base.elem(3))
    I = integral_coprime_rep(ideal_of(Q, K23), 1)
    assert generators_of(I) == []
    assert principal_generator_mod(I, 1) is None


def test_ray_equal_reflexive_and_distinct(K23):
    I1 = reduce(K23, [K23.omega, K23.one])
    wq = K23.elem(0, Fraction(1, 2))
    I2 = reduce(K23, [wq, K23.one])
    assert ray_equal(I1, I1, 1)
    assert not ray_equal(I1, I2, 1)


def test_factor_level(Ki, K5):
    rm = factor_level(Ki, 2)
    assert len(rm.factors) == 1
    prime, e = rm.factors[0]
    assert e == 2 and prime.residue_degree == 1 and prime.ramification == 2
    assert valuation(prime.ideal, principal_ideal(Ki.elem(2))) == 2

    rm5 = factor_level(Ki, 5)
    assert len(rm5.factors) == 2 and all(e == 1 for _, e in rm5.factors)
    for p, _ in rm5.factors:
        assert int(p.ideal.norm_abs()) == 5

    rm3 = factor_level(Ki, 3)
    assert len(rm3.factors) == 1 and rm3.factors[0][0].residue_degree == 2

    # 2 and 3 stay inert all the way up in Q(zeta5)
    for p in (2, 3):
        rk = factor_level(K5, p)
        assert len(rk.factors) == 1
        assert rk.factors[0][0].residue_degree == 4

    # 5 is totally ramified in Q(zeta5)
    r5 = factor_level(K5, 5)
    assert len(r5.factors) == 1
    assert r5.factors[0][1] == 4


def test_valuation_elem(Ki):
    p2 = factor_level(Ki, 2).factors[0][0].ideal
    assert valuation_elem(p2, Ki.omega - Ki.one) == 1
    assert valuation_elem(p2, Ki.elem(2)) == 2
    assert valuation_elem(p2, Ki.elem(0, 2)) == 2
    assert valuation_elem(p2, Ki.elem(3)) == 0
