"""Binary quadratic forms over O_F and their level-N equivalence.

A form a x^2 + b xy + c y^2 is primitive, has a > 0 at the identity
embedding, and totally negative discriminant.  The congruence group of level
N acts by linear substitution divided by the determinant; equivalence of
forms is decided through the attached fractional ideals, which is sound and
complete for this action, and an explicit certificate matrix can be
recovered from the principal generator that links the two ideals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .number_ring import (
    Mat2,
    RingElem,
    canonical_associate,
    div_exact,
    gcd_of,
    is_totally_positive,
    reduce_mod_int,
    units_mod,
)
from .cm_field import CMElem, CMField, embed
from .ideals import (
    FracIdeal,
    contains,
    inv,
    is_coprime_to,
    module_solve,
    mul,
    principal_generator_mod,
    reduce,
)


@dataclass(frozen=True)
class QuadForm:
    """a x^2 + b xy + c y^2 with coefficients in O_F."""

    a: RingElem
    b: RingElem
    c: RingElem

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not (a.is_integral() and b.is_integral() and c.is_integral()):
            raise DomainError("form coefficients must be integral")
        if a.sign_at(0) <= 0:
            raise DomainError("leading coefficient must be positive at the identity embedding")
        g = gcd_of(gcd_of(a, b), c)
        if not g.is_unit():
            raise DomainError("form is not primitive")
        d = self.disc
        if any(d.sign_at(i) >= 0 for i in range(a.field.degree)):
            raise DomainError("discriminant must be totally negative")

    @property
    def field(self):
        return self.a.field

    @property
    def disc(self) -> RingElem:
        return self.b * self.b - 4 * self.a * self.c

    def value(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_totally_positive_definite(self) -> bool:
        return is_totally_positive(self.a)

    def __repr__(self):
        return "Form(%r, %r, %r)" % (self.a, self.b, self.c)


def membership(Q: QuadForm, N: int, field: CMField) -> bool:
    """Q belongs to the level-N family of forms with the discriminant of K."""
    if N < 1:
        raise DomainError("level must be positive")
    if Q.disc != field.disc:
        return False
    g = gcd_of(Q.a, Q.a.field.elem(N))
    return g.is_unit()


def principal_form(field: CMField) -> QuadForm:
    """x^2 + b xy + c y^2, the form with root omega."""
    return QuadForm(field.base.one, field.b, field.c)


@dataclass(frozen=True)
class GammaMatrix:
    """A level-N substitution matrix: integral, det > 0 at the identity,
    lower-left entry divisible by N and lower-right a unit residue mod N."""

    mat: Mat2
    level: int

    def __post_init__(self):
        m = self.mat
        N = self.level
        if N < 1:
            raise DomainError("level must be positive")
        if not m.is_integral():
            raise DomainError("matrix entries must be integral")
        det = m.det()
        if not det.is_unit():
            raise DomainError("matrix must be invertible over O_F")
        if det.sign_at(0) <= 0:
            raise DomainError("matrix determinant must be positive at the identity embedding")
        if N > 1:
            if not reduce_mod_int(m.c, N).is_zero():
                raise DomainError("lower-left entry must vanish mod N")
            field = m.a.field
            if reduce_mod_int(m.d, N) not in units_mod(field, N):
                raise DomainError("lower-right entry must be a unit residue mod N")

    @property
    def plus(self) -> bool:
        """det totally positive (the plus-subgroup variant)."""
        return is_totally_positive(self.mat.det())

    def mobius(self, z: CMElem) -> CMElem:
        m = self.mat
        den = m.c * z + m.d
        if den.is_zero():
            raise DomainError("Moebius image undefined")
        return (m.a * z + m.b) / den


def act(Q: QuadForm, gamma: GammaMatrix) -> QuadForm:
    """The substituted form Q(gamma [x, y]) / det(gamma)."""
    m = gamma.mat
    det = m.det()
    a2 = div_exact(Q.value(m.a, m.c), det)
    b2 = div_exact(
        2 * Q.a * m.a * m.b + Q.b * (m.a * m.d + m.b * m.c) + 2 * Q.c * m.c * m.d, det
    )
    c2 = div_exact(Q.value(m.b, m.d), det)
    return QuadForm(a2, b2, c2)


def omega_of(Q: QuadForm, field: CMField) -> CMElem:
    """The upper-half-plane root of Q(x, 1), as an exact element of K.

    Requires disc(Q) = disc(K); then omega_Q = (omega + (bK - b)/2) / a.
    """
    if Q.disc != field.disc:
        raise DomainError("form discriminant differs from the field discriminant")
    shift = (field.b - Q.b) / 2
    if not shift.is_integral():
        raise DomainError("inconsistent parity between form and field")
    return field.elem(shift / Q.a, 1 / Q.a)


def ideal_of(Q: QuadForm, field: CMField) -> FracIdeal:
    """The reduced fractional ideal spanned by {omega_Q, 1} over O_F."""
    w = omega_of(Q, field)
    return reduce(field, [w, field.one])


def _unit_square_root(field, usq: RingElem) -> RingElem:
    """A unit e with e^2 = usq and e > 0 at the identity, if one exists."""
    if usq == field.one:
        return field.one
    if field.is_rational:
        raise DomainError("discriminant class mismatch")
    eps = field.fundamental_unit
    e2 = eps * eps
    for k in range(1, 64):
        for cand in (e2 ** k, (e2 ** k).conj()):
            if cand == usq:
                e = eps ** k if cand == e2 ** k else (eps.conj()) ** k
                if e.sign_at(0) < 0:
                    e = -e
                if e * e == usq:
                    return e
        # odd powers of eps square to eps^2k as well when usq = eps^(2k)
    raise DomainError("discriminant class mismatch")


def form_from_point(z: CMElem, N: int, field: CMField) -> QuadForm:
    """The unique form in the level-N family whose upper root is z.

    z must lie outside F, in the upper half-plane at the identity embedding,
    and [z, 1]_F must be a fractional ideal (checked by reduce).  The
    primitive form built from the minimal polynomial of z has discriminant a
    positive-unit square times disc(K); dividing by that unit lands it
    exactly on disc(K).
    """
    if z.in_base():
        raise DomainError("the point must generate K over F")
    if z.y.sign_at(0) <= 0:
        raise DomainError("the point must lie in the upper half-plane")
    base = field.base
    ideal = reduce(field, [z, field.one])  # raises NotAnIdealError if not a module
    if N > 1 and not is_coprime_to(ideal, N):
        raise DomainError("the module of the point is not coprime to the level")
    tr, nm = z.trace_rel(), z.norm_rel()
    # scale (1, -tr, nm) to a primitive integral triple
    den = 1
    import math as _math

    for q in (tr.x, tr.y, nm.x, nm.y):
        den = den * q.denominator // _math.gcd(den, q.denominator)
    a0 = base.elem(den)
    b0 = -tr * den
    c0 = nm * den
    g = gcd_of(gcd_of(a0, b0), c0)
    a0, b0, c0 = div_exact(a0, g), div_exact(b0, g), div_exact(c0, g)
    if a0.sign_at(0) < 0:
        a0, b0, c0 = -a0, -b0, -c0
    Q0 = QuadForm(a0, b0, c0)
    usq = div_exact(Q0.disc, field.disc)
    eps = _unit_square_root(base, usq)
    Q = QuadForm(div_exact(a0, eps), div_exact(b0, eps), div_exact(c0, eps))
    if omega_of(Q, field) != z:
        raise DomainError("root reconstruction failed")
    if not membership(Q, N, field):
        raise DomainError("form fails level membership")
    return Q


def equivalent(Q1: QuadForm, Q2: QuadForm, N: int, field: CMField) -> bool:
    """Class equality at level N, decided through the ray classes of the ideals."""
    for Q in (Q1, Q2):
        if not membership(Q, N, field):
            raise DomainError("form outside the level-N family")
    if Q1 == Q2:
        return True
    I1, I2 = ideal_of(Q1, field), ideal_of(Q2, field)
    return principal_generator_mod(mul(I1, inv(I2)), N) is not None


def equivalence_certificate(
    Q1: QuadForm, Q2: QuadForm, N: int, field: CMField
) -> Optional[GammaMatrix]:
    """A level-N matrix gamma with act(Q1, gamma) = Q2, when the classes agree.

    Recovered from the principal generator nu with [omega_Q2, 1] =
    nu [omega_Q1, 1]: expressing (nu omega_Q1, nu) in the basis of
    [omega_Q2, 1] gives the substitution matrix.
    """
    I1, I2 = ideal_of(Q1, field), ideal_of(Q2, field)
    nu = principal_generator_mod(mul(I2, inv(I1)), N)
    if nu is None:
        return None
    w1, w2 = omega_of(Q1, field), omega_of(Q2, field)
    gens = [w2, field.one]
    row1 = module_solve(nu * w1, gens)
    row2 = module_solve(nu, gens)
    if row1 is None or row2 is None:
        raise DomainError("certificate reconstruction failed")
    gamma = GammaMatrix(Mat2(row1[0], row1[1], row2[0], row2[1]), N)
    if act(Q1, gamma) != Q2:
        raise DomainError("certificate failed verification")
    return gamma


def _round_coords(e: RingElem) -> RingElem:
    return e.field.elem(round(e.x), round(e.y))


def _fnorm(e: RingElem):
    return abs(e.x if e.field.is_rational else e.norm())


def shrink_in_class(Q: QuadForm, N: int, field: CMField) -> QuadForm:
    """A same-class representative with smaller coefficients (best effort).

    Alternates translations [[1, t], [0, 1]] and level slides
    [[1, 0], [sN, 1]], both in the level-N group, while the leading
    coefficient's norm drops.  Not a canonical reduction; only keeps the
    downstream generator searches inside small boxes.
    """
    base = Q.field
    for _ in range(64):
        t = _round_coords(-Q.b / (2 * Q.a))
        if not t.is_zero():
            Q = act(Q, GammaMatrix(Mat2(base.one, t, base.zero, base.one), N))
        s = _round_coords(-Q.b / (2 * Q.c * N))
        moved = False
        if not s.is_zero():
            cand = act(Q, GammaMatrix(Mat2(base.one, base.zero, s * N, base.one), N))
            if _fnorm(cand.a) < _fnorm(Q.a):
                Q = cand
                moved = True
        if not moved:
            break
    return Q


def totally_positive_rep(Q: QuadForm, N: int, field: CMField) -> QuadForm:
    """An equivalent form with totally positive leading coefficient.

    Uses the diagonal substitution by a unit zeta with zeta > 0 at the
    identity and zeta*a totally positive; exists since the narrow class
    number of F is one.
    """
    if not membership(Q, N, field):
        raise DomainError("form outside the level-N family")
    base = Q.field
    if Q.is_totally_positive_definite():
        return Q
    # a > 0 at identity, a < 0 at the conjugate: the fundamental unit has
    # norm -1, so +-eps has mixed signs; pick the sign positive at identity
    eps = base.fundamental_unit
    if eps.sign_at(0) < 0:
        eps = -eps
    zeta = eps if (eps.sign_at(1) < 0) else -eps.conj()
    if zeta.sign_at(0) < 0:
        zeta = -zeta
    gamma = GammaMatrix(Mat2(zeta, base.zero, base.zero, base.one), N)
    Q2 = act(Q, gamma)
    if not Q2.is_totally_positive_definite():
        raise DomainError("unit scaling failed to reach a totally positive representative")
    return Q2


def cm_point(Q: QuadForm, field: CMField, prec: int = 64):
    """(phi_1(-conj omega_Q), ..., phi_g(-conj omega_Q)), each in the upper half-plane."""
    if not Q.is_totally_positive_definite():
        raise DomainError("CM points require a totally positive definite form")
    w = omega_of(Q, field)
    point = -w.conj()
    return tuple(embed(point, i, prec) for i in range(1, field.g + 1))
