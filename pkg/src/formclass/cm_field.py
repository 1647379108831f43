"""The CM-field K = F(omega) presented by a monic quadratic over O_F.

K is totally imaginary quadratic over the totally real F, with
omega = (-b + sqrt(disc))/2 the upper-half-plane root of x^2 + b x + c and
disc = b^2 - 4c totally negative.  O_K = O_F*omega + O_F, so elements are
pairs of F-coordinates and integrality is coordinatewise.

The CM type is fixed once per field: the i-th embedding extends the i-th
real embedding of F and sends omega to the upper-half-plane root of the
conjugated quadratic.  No other CM types are representable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import mp, mpc, mpf, workprec

from .errors import DomainError
from .number_ring import BaseField, Mat2, RingElem, is_totally_positive


@dataclass(frozen=True)
class CMField:
    base: BaseField
    b: RingElem  # linear coefficient of the defining quadratic
    c: RingElem  # constant coefficient

    @property
    def disc(self) -> RingElem:
        return self.b * self.b - 4 * self.c

    @property
    def g(self) -> int:
        """Number of CM-type embeddings (degree of F)."""
        return self.base.degree

    def elem(self, x, y=0) -> "CMElem":
        cx = x if isinstance(x, RingElem) else self.base.elem(x)
        cy = y if isinstance(y, RingElem) else self.base.elem(y)
        return CMElem(self, cx, cy)

    @property
    def zero(self) -> "CMElem":
        return self.elem(0)

    @property
    def one(self) -> "CMElem":
        return self.elem(1)

    @property
    def omega(self) -> "CMElem":
        return self.elem(0, 1)

    def __repr__(self):
        return "CM(%r; x^2 + %r x + %r)" % (self.base, self.b, self.c)


def build_cm_field(base: BaseField, b: RingElem, c: RingElem) -> CMField:
    """Construct F(omega) and check it is a CM extension of F."""
    if b.field != base or c.field != base:
        raise DomainError("coefficients must live in the base field")
    if not (b.is_integral() and c.is_integral()):
        raise DomainError("defining quadratic must be monic over O_F")
    d = b * b - 4 * c
    if any(d.sign_at(i) >= 0 for i in range(base.degree)):
        raise DomainError("not a CM extension: discriminant is not totally negative")
    return CMField(base, b, c)


@dataclass(frozen=True)
class CMElem:
    """x + y*omega with x, y in F."""

    field: CMField
    x: RingElem
    y: RingElem

    def _coerce(self, other) -> "CMElem":
        if isinstance(other, CMElem):
            if other.field != self.field:
                raise DomainError("mixed CM-fields")
            return other
        if isinstance(other, RingElem):
            return CMElem(self.field, other, self.field.base.zero)
        return self.field.elem(other)

    def __add__(self, other):
        o = self._coerce(other)
        return CMElem(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return CMElem(self.field, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CMElem(self.field, -self.x, -self.y)

    def __mul__(self, other):
        o = self._coerce(other)
        K = self.field
        # omega^2 = -b*omega - c
        sq = self.y * o.y
        return CMElem(
            K,
            self.x * o.x - sq * K.c,
            self.x * o.y + self.y * o.x - sq * K.b,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise DomainError("division by zero")
        n = o.norm_rel()
        cj = o.conj()
        return self * CMElem(o.field, cj.x / n, cj.y / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.field.one / (self ** (-k))
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "CMElem":
        """The nontrivial F-automorphism: omega -> -b - omega."""
        return CMElem(self.field, self.x - self.y * self.field.b, -self.y)

    def trace_rel(self) -> RingElem:
        return 2 * self.x - self.y * self.field.b

    def norm_rel(self) -> RingElem:
        # (x + y*omega)(x + y*conj(omega)) with omega*conj(omega) = c
        return self.x * self.x - self.x * self.y * self.field.b + self.y * self.y * self.field.c

    def norm_abs(self) -> Fraction:
        """Absolute norm N_{K/Q} as an exact rational."""
        n = self.norm_rel()
        return n.x if self.field.base.is_rational else n.norm()

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def is_integral(self) -> bool:
        return self.x.is_integral() and self.y.is_integral()

    def in_base(self) -> bool:
        return self.y.is_zero()

    def coords_q(self) -> tuple[Fraction, ...]:
        """Coordinates over the Q-basis (1, theta, omega, theta*omega)."""
        if self.field.base.is_rational:
            return (self.x.x, self.y.x)
        return (self.x.x, self.x.y, self.y.x, self.y.y)

    def __repr__(self):
        return "(%r) + (%r)*w" % (self.x, self.y)


def trace_rel(z: CMElem) -> RingElem:
    return z.trace_rel()


def norm_rel(z: CMElem) -> RingElem:
    return z.norm_rel()


def conj(z: CMElem) -> CMElem:
    return z.conj()


# -- complex embeddings -------------------------------------------------------


def _to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / mpf(q.denominator)


def _ring_to_mpf(a: RingElem, i: int) -> mpf:
    f = a.field
    if f.is_rational:
        return _to_mpf(a.x)
    p, q = a._half_coords(i)
    return (_to_mpf(p) + _to_mpf(q) * mp.sqrt(f.m)) / 2


def omega_numeric(field: CMField, i: int) -> mpc:
    """phi_i(omega): upper-half-plane root of the conjugated quadratic."""
    b = _ring_to_mpf(field.b, i)
    d = _ring_to_mpf(field.disc, i)
    return mpc(-b / 2, mp.sqrt(-d) / 2)


def embed(z: CMElem, i: int, prec: int) -> mpc:
    """phi_i(z) to prec bits (i = 1..g, phi_1 the identity embedding)."""
    K = z.field
    if not 1 <= i <= K.g:
        raise DomainError("embedding index out of range")
    with workprec(prec + 32):
        w = omega_numeric(K, i - 1)
        val = _ring_to_mpf(z.x, i - 1) + _ring_to_mpf(z.y, i - 1) * w
        return +val


@dataclass(frozen=True)
class EmbeddingSet:
    """The normalized CM type evaluated at omega, to a fixed precision."""

    precision_bits: int
    g: int
    values: tuple[mpc, ...]


def cm_type(field: CMField, prec: int = 64) -> EmbeddingSet:
    if prec < 64:
        raise DomainError("precision must be at least 64 bits")
    vals = tuple(embed(field.omega, i, prec) for i in range(1, field.g + 1))
    return EmbeddingSet(prec, field.g, vals)


# -- regular representation ---------------------------------------------------


def coords_in_basis(mu: CMElem, xi: CMElem) -> tuple[RingElem, RingElem]:
    """(p, q) in F^2 with mu = p*xi + q; requires xi outside F."""
    if xi.in_base():
        raise DomainError("degenerate basis: xi lies in F")
    p = mu.y / xi.y
    q = mu.x - p * xi.x
    return p, q


def regular_rep(nu: CMElem, xi: CMElem) -> Mat2:
    """The matrix of multiplication by nu in the ordered F-basis {xi, 1}."""
    p1, q1 = coords_in_basis(nu * xi, xi)
    p2, q2 = coords_in_basis(nu, xi)
    return Mat2(p1, q1, p2, q2)


# -- relative integral basis verification --------------------------------------


def _solve_linear(rows: list[list[Fraction]], target: list[Fraction]):
    """Solve x * rows = target over Q by Gaussian elimination; None if unsolvable."""
    m = len(rows)
    n = len(target)
    aug = [[rows[r][c] for c in range(n)] for r in range(m)]
    # work on the transpose: columns are equations
    sol = [Fraction(0)] * m
    piv_rows: list[int] = []
    mat = [[aug[r][c] for r in range(m)] + [target[c]] for c in range(n)]
    used = [False] * m
    for eq in mat:
        piv = None
        for j in range(m):
            if not used[j] and eq[j] != 0:
                piv = j
                break
        if piv is None:
            continue
        scale = eq[piv]
        norm_eq = [v / scale for v in eq]
        for other in mat:
            if other is eq or other[piv] == 0:
                continue
            f = other[piv]
            for k in range(m + 1):
                other[k] -= f * norm_eq[k]
        for k in range(m + 1):
            eq[k] = norm_eq[k]
        used[piv] = True
        piv_rows.append(piv)
    # back-substitute: after full elimination each equation has one pivot
    for eq in mat:
        nz = [j for j in range(m) if eq[j] != 0]
        if not nz:
            if eq[m] != 0:
                return None
            continue
        if len(nz) == 1:
            sol[nz[0]] = eq[m] / eq[nz[0]]
    # verify (handles underdetermined pivots left at zero)
    for c in range(n):
        if sum(sol[r] * rows[r][c] for r in range(m)) != target[c]:
            return None
    return sol


def verify_relative_basis(field: CMField, witness: Sequence[CMElem]) -> bool:
    """True iff [omega, 1]_F equals the order spanned over Z by the witness.

    The witness is an independently supplied Z-basis of the maximal order of
    K as an absolute field.  Checks containment both ways; raises if the
    witness does not span a ring.
    """
    n = 2 * field.g
    if len(witness) != n:
        raise DomainError("witness must have %d elements" % n)
    rows = [list(w.coords_q()) for w in witness]

    def in_witness_span(z: CMElem) -> bool:
        sol = _solve_linear(rows, list(z.coords_q()))
        return sol is not None and all(s.denominator == 1 for s in sol)

    # the witness must be a ring containing 1
    if not in_witness_span(field.one):
        raise DomainError("witness does not contain 1")
    for i in range(n):
        for j in range(i, n):
            if not in_witness_span(witness[i] * witness[j]):
                raise DomainError("witness is not closed under multiplication")

    # witness inside [omega, 1]_F
    if not all(w.is_integral() for w in witness):
        return False
    # [omega, 1]_F inside the witness span
    base_gens = [field.one, field.omega]
    if not field.base.is_rational:
        th = field.base.theta
        base_gens += [field.elem(th, field.base.zero), field.elem(field.base.zero, th)]
    return all(in_witness_span(g) for g in base_gens)
