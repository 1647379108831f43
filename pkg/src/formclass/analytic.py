"""Ray class invariant data and the imaginary quadratic Siegel specialization.

The exact layer assembles, for a ray class C, an integral representative, a
basis of its inverse whose ratio lies in the upper half-plane under every
embedding, the change-of-basis matrix A with totally positive determinant,
and its SL2 part A1 prescribed modulo N.  This is the complete computable
content of the singular-value invariant minus the evaluation of a Hilbert
modular function, which for a real quadratic base has no desk-scale model.

Over an imaginary quadratic field the invariant specializes to
Siegel-Ramachandra values: twelfth-power-normalized Siegel products
evaluated at the basis ratio, with explicit truncation error bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from mpmath import mp, mpc, mpf, workprec

from .errors import DomainError
from .number_ring import Mat2, RingElem, canonical_associate, is_totally_positive
from .cm_field import CMElem, CMField, embed, omega_numeric
from .forms import QuadForm, cm_point, ideal_of, membership, omega_of
from .ideals import (
    FracIdeal,
    inv,
    is_coprime_to,
    module_solve,
    mul,
    norm_rel_ideal,
    principal_generator_mod,
    principal_ideal,
    reduce,
    unit_ideal,
)
from .class_groups import (
    RayClass,
    decompose_det,
    form_class_of,
    integral_coprime_rep,
    enumerate_ray_classes,
)


@dataclass(frozen=True)
class InvariantSetup:
    """All exact data entering a ray class invariant at level N."""

    ray_class: RayClass
    c_ideal: FracIdeal
    form: QuadForm
    nu: CMElem
    xi1: CMElem
    xi2: CMElem
    A: Mat2
    d: RingElem
    A1: Mat2
    cm_values: tuple


@lru_cache(maxsize=None)
def f_residue_unit_count(field, N: int) -> int:
    """|(O_F / N O_F)^x|."""
    if N == 1:
        return 1
    from .number_ring import residue_is_unit

    count = 0
    if field.is_rational:
        return sum(1 for x in range(N) if math.gcd(x, N) == 1)
    for x in range(N):
        for y in range(N):
            if residue_is_unit(field.elem(x, y), N):
                count += 1
    return count


def _check_setup(K: CMField, N: int, c_ideal, nu, xi1, xi2, prec) -> InvariantSetup:
    cinv = inv(c_ideal)
    if reduce(K, [xi1, xi2]) != cinv:
        raise DomainError("basis does not span the inverse ideal")
    xi = xi1 / xi2
    for i in range(K.g):
        if xi.y.sign_at(i) <= 0:
            raise DomainError("basis ratio leaves the upper half-plane at some embedding")
    rowA = module_solve(K.omega, [xi1, xi2])
    rowB = module_solve(K.one, [xi1, xi2])
    if rowA is None or rowB is None:
        raise DomainError("O_K does not embed into the inverse ideal")
    A = Mat2(rowA[0], rowA[1], rowB[0], rowB[1])
    d = A.det()
    if not is_totally_positive(d):
        raise DomainError("determinant is not totally positive")
    if canonical_associate(d)[0] != norm_rel_ideal(c_ideal):
        raise DomainError("determinant does not generate the relative norm of c")
    d, A1 = decompose_det(A, N)
    cm_values = tuple(embed(xi, i, prec) for i in range(1, K.g + 1))
    return InvariantSetup(
        RayClass(K, N, c_ideal), c_ideal, None, nu, xi1, xi2, A, d, A1, cm_values
    )


def invariant_setup(C: RayClass, N: Optional[int] = None, prec: int = 64) -> InvariantSetup:
    """The invariant data for C, following the totally positive form route.

    Chooses a totally positive definite form whose class maps to C^{-1} and
    the principal generator linking the ideals, so the basis ratio is the
    root of the form and lies in the upper half-plane at every embedding.
    """
    K = C.field
    N = C.N if N is None else N
    c_ideal = integral_coprime_rep(C.rep, N)
    fc = form_class_of(RayClass(K, N, inv(c_ideal)))
    Q = fc.rep
    w = omega_of(Q, K)
    nu = principal_generator_mod(mul(inv(c_ideal), inv(ideal_of(Q, K))), N)
    if nu is None:
        raise DomainError("no congruent generator links c^{-1} to the form module")
    xi1, xi2 = nu * w, nu
    setup = _check_setup(K, N, c_ideal, nu, xi1, xi2, prec)
    return InvariantSetup(
        setup.ray_class, c_ideal, Q, nu, xi1, xi2, setup.A, setup.d, setup.A1,
        setup.cm_values,
    )


def invariant_setup_from_form(Q: QuadForm, N: int, field: CMField, prec: int = 64) -> InvariantSetup:
    """The invariant data for the class of [omega_Q, 1], choosing
    c = a^e [omega_Q, 1] with e = |(O_F/N)^x| so the basis ratio is the CM
    point -conj(omega_Q) of the form itself."""
    if not membership(Q, N, field):
        raise DomainError("form outside the level-N family")
    if not Q.is_totally_positive_definite():
        raise DomainError("the CM-point route requires a totally positive form")
    e = f_residue_unit_count(field.base, N)
    w = omega_of(Q, field)
    ae = Q.a ** e
    c_ideal = reduce(field, [ae * w, field.elem(ae)])
    if not c_ideal.is_integral():
        raise DomainError("scaled module is not integral")
    am = Q.a ** (e - 1)
    xi1 = -(w.conj()) / am
    xi2 = field.one / field.elem(am)
    nu = field.one
    setup = _check_setup(field, N, c_ideal, nu, xi1, xi2, prec)
    return InvariantSetup(
        setup.ray_class, c_ideal, Q, nu, xi1, xi2, setup.A, setup.d, setup.A1,
        setup.cm_values,
    )


def coherence_matrix(s1: InvariantSetup, s2: InvariantSetup) -> Mat2:
    """B in GL2(O_F) relating two setups of the same ray class:
    [xi1'; xi2'] = B [nu^-1 xi1; nu^-1 xi2] for the linking nu = c'/c.

    The decompositions then satisfy A1' = diag(1, det B) A1 B^-1 mod N.
    """
    K = s1.ray_class.field
    N = s1.ray_class.N
    nu = principal_generator_mod(mul(s2.c_ideal, inv(s1.c_ideal)), N)
    if nu is None:
        raise DomainError("setups do not represent the same ray class")
    g1, g2 = s1.xi1 / nu, s1.xi2 / nu
    r1 = module_solve(s2.xi1, [g1, g2])
    r2 = module_solve(s2.xi2, [g1, g2])
    if r1 is None or r2 is None:
        raise DomainError("setup bases are not commensurable")
    B = Mat2(r1[0], r1[1], r2[0], r2[1])
    if not B.det().is_unit():
        raise DomainError("coherence matrix is not unimodular")
    return B


def coherence_holds(s1: InvariantSetup, s2: InvariantSetup) -> bool:
    """Check A1' = diag(1, det B) A1 B^-1 modulo N for two setups of a class."""
    N = s1.ray_class.N
    B = coherence_matrix(s1, s2)
    b = B.det()
    Binv = Mat2(B.d, -B.b, -B.c, B.a).scale(1 / b)
    target = Mat2(s1.A1.a, s1.A1.b, b * s1.A1.c, b * s1.A1.d) * Binv
    return s2.A1.congruent_mod_int(target, N)


# -- Siegel products -----------------------------------------------------------


def siegel_g(r1: Fraction, r2: Fraction, tau: mpc, prec: int):
    """The Siegel product at (r1, r2) and tau, with a truncation error bound.

    Returns (value, bound): the infinite product is cut once the geometric
    tail drops below 2^-(prec+32); the bound covers the dropped tail and the
    working-precision rounding.
    """
    r1, r2 = Fraction(r1), Fraction(r2)
    if r1.denominator == 1 and r2.denominator == 1:
        raise DomainError("the characteristics must not both be integral")
    if not tau.imag > 0:
        raise DomainError("tau must lie in the upper half-plane")
    with workprec(prec + 48):
        two_pi_i = 2j * mp.pi

        def qpow(s: Fraction):
            return mp.exp(two_pi_i * tau * mpf(s.numerator) / mpf(s.denominator))

        e2 = mp.exp(two_pi_i * mpf(r2.numerator) / mpf(r2.denominator))
        lead = -mp.exp(mp.pi * 1j * _to_mpf(r2 * (r1 - 1))) * qpow(
            Fraction(1, 2) * (r1 * r1 - r1 + Fraction(1, 6))
        )
        absq = abs(mp.exp(two_pi_i * tau))
        if not absq < 1:
            raise DomainError("q does not contract; tau too close to the real axis")
        # terms: (1 - q^(n+r1) e2)(1 - q^(n-r1)/e2), n >= 1, plus the n = 0 factor
        target = mpf(2) ** (-(prec + 32))
        M = int(
            (prec + 34 + max(0.0, math.log2(4.0 / (1.0 - float(absq)))))
            / (-math.log2(float(absq)))
        ) + 2
        val = mp.mpc(1) - qpow(r1) * e2
        qr1 = qpow(r1)
        q1 = mp.exp(two_pi_i * tau)
        qn = mp.mpc(1)
        for n in range(1, M + 1):
            qn = qn * q1
            val = val * (1 - qn * qr1 * e2) * (1 - qn / (qr1 * e2))
        val = lead * val
        tail = 2 * absq ** M / (1 - absq)
        bound = abs(val) * (4 * tail + mpf(2) ** (-(prec + 16)))
        return +val, +bound


def _to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / mpf(q.denominator)


def siegel_ramachandra(field: CMField, N: int, C: RayClass, prec: int = 512):
    """The normalized Siegel value of the ray class C of an imaginary
    quadratic field, with an error bound.

    Picks an integral c in C, a basis [xi1, xi2] of N c^-1 with ratio in the
    upper half-plane, integers with N = a xi1 + b xi2, and returns the
    12N-th power of the Siegel product at ((a/N, b/N), xi1/xi2)."""
    if not field.base.is_rational:
        raise DomainError("the Siegel specialization needs an imaginary quadratic field")
    if N < 2:
        raise DomainError("the level must be at least 2")
    c_ideal = integral_coprime_rep(C.rep, N)
    return _siegel_for_rep(field, N, c_ideal, prec)


def _siegel_for_rep(field: CMField, N: int, c_ideal: FracIdeal, prec: int):
    J = mul(principal_ideal(field.elem(N)), inv(c_ideal))
    xi1, xi2 = J.basis()
    if (xi1 / xi2).y.sign_at(0) < 0:
        xi1 = -xi1
    sol = module_solve(field.elem(N), [xi1, xi2])
    if sol is None:
        raise DomainError("N does not lie in N c^-1")
    a, b = int(sol[0].x), int(sol[1].x)
    r1, r2 = Fraction(a % N, N), Fraction(b % N, N)
    if r1 == 0 and r2 == 0:
        raise DomainError("degenerate characteristics: c is not coprime to N")
    xi = xi1 / xi2
    with workprec(prec + 64):
        tau = embed(xi, 1, prec + 64)
        g, gerr = siegel_g(r1, r2, tau, prec + 48)
        val = g ** (12 * N)
        rel = gerr / abs(g)
        bound = abs(val) * (24 * N * rel + mpf(2) ** (-(prec + 8)))
        return +val, +bound


def siegel_values(field: CMField, N: int, prec: int = 512, norm_bound=None):
    """All Siegel-Ramachandra values at level N, indexed by the enumerated
    ray classes.  Returns (group, [(value, bound)])."""
    group = enumerate_ray_classes(field, N, norm_bound)
    out = [
        siegel_ramachandra(field, N, group.ray_class(i), prec)
        for i in range(group.order)
    ]
    return group, out


def class_polynomial(field: CMField, N: int, prec: int = 512, norm_bound=None) -> dict:
    """Coefficients of prod_C (X - g(C)) with nearest-integer reports.

    The Galois action permutes the values, so the coefficients are
    (numerically) algebraic integers of K; each is rounded to the nearest
    element of O_K in the basis {1, omega} and the residual distance
    reported."""
    group, vals = siegel_values(field, N, prec, norm_bound)
    with workprec(prec + 64):
        coeffs = [mp.mpc(1)]
        errs = [mpf(0)]
        for v, e in vals:
            new_c = [mp.mpc(0)] * (len(coeffs) + 1)
            new_e = [mpf(0)] * (len(coeffs) + 1)
            for k, (c, ce) in enumerate(zip(coeffs, errs)):
                new_c[k] += c
                new_e[k] += ce
                new_c[k + 1] -= c * v
                new_e[k + 1] += abs(c) * e + ce * abs(v) + ce * e
            coeffs, errs = new_c, new_e
        w = omega_numeric(field, 0)
        nearest = []
        residuals = []
        for c in coeffs:
            y = mp.nint(c.imag / w.imag)
            x = mp.nint(c.real - y * w.real)
            approx = x + y * w
            nearest.append((int(x), int(y)))
            residuals.append(abs(c - approx))
        out = {
            "group": group,
            "values": vals,
            "coefficients": [+c for c in coeffs],
            "coefficient_bounds": [+e for e in errs],
            "nearest": nearest,
            "residuals": [+r for r in residuals],
            "degree": len(vals),
        }
    return out
