"""CM types on finite Galois data, the reflex datum, and reflex norms.

The combinatorial layer works on any finite group given by its
multiplication table.  The arithmetic layer (norm maps on elements, ideals
and ray classes) is realized when the CM-field is Galois over Q of degree
at most 4, so that every automorphism acts by an explicit coordinate map on
the relative presentation; the imaginary quadratic case is the degenerate
instance where the induced map on ray classes is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainError, UnsupportedGaloisData
from .number_ring import RingElem, sqrt_in_field
from .cm_field import CMElem, CMField
from .ideals import FracIdeal, mult_congruent_one, reduce


# -- combinatorics on multiplication tables ---------------------------------------


@dataclass(frozen=True)
class GaloisData:
    """A finite group with the subgroup fixing K, CM-type coset data and the
    conjugation element."""

    order: int
    table: tuple[tuple[int, ...], ...]
    H: frozenset[int]
    T: tuple[int, ...]
    rho: int

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.mul(a, b) == self.identity:
                return b
        raise DomainError("element has no inverse")

    @property
    def identity(self) -> int:
        for e in range(self.order):
            if all(self.mul(e, x) == x for x in range(self.order)):
                return e
        raise DomainError("table has no identity")


def build_galois_data(order, table, H, T, rho) -> GaloisData:
    """Validate the group axioms and the CM-type axiom, then freeze the data."""
    table = tuple(tuple(row) for row in table)
    data = GaloisData(order, table, frozenset(H), tuple(T), rho)
    n = order
    if len(table) != n or any(len(row) != n for row in table):
        raise DomainError("multiplication table has wrong shape")
    if any(not 0 <= v < n for row in table for v in row):
        raise DomainError("table entries out of range")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if data.mul(data.mul(a, b), c) != data.mul(a, data.mul(b, c)):
                    raise DomainError("table is not associative")
    e = data.identity
    for a in range(n):
        data.inverse(a)
    if e not in data.H or any(
        data.mul(a, b) not in data.H for a in data.H for b in data.H
    ):
        raise DomainError("H is not a subgroup")
    if data.mul(rho, rho) != e:
        raise DomainError("conjugation element is not an involution")
    # CM-type axiom: the cosets of T and of rho*T partition G/H
    T_cosets = {frozenset(data.mul(t, h) for h in data.H) for t in data.T}
    rT_cosets = {
        frozenset(data.mul(data.mul(rho, t), h) for h in data.H) for t in data.T
    }
    if len(T_cosets) != len(data.T):
        raise DomainError("not a CM type: repeated cosets in T")
    if T_cosets & rT_cosets or 2 * len(T_cosets) * len(data.H) != n:
        raise DomainError("not a CM type: T and its conjugate do not partition the embeddings")
    return data


@dataclass(frozen=True)
class ReflexData:
    T_star: frozenset[int]
    H_star: frozenset[int]
    K_star_degree: int
    psi: tuple[int, ...]  # coset representatives giving the reflex embeddings


def reflex_of(data: GaloisData) -> ReflexData:
    """The reflex datum: inverses of the type, its left stabilizer, and the
    embeddings of the fixed field obtained from the inverse set."""
    n = data.order
    T_full = {data.mul(t, h) for t in data.T for h in data.H}
    T_star = frozenset(data.inverse(s) for s in T_full)
    H_star = frozenset(
        g for g in range(n) if {data.mul(g, s) for s in T_star} == T_star
    )
    degree = n // len(H_star)
    cosets = {}
    for s in sorted(T_star):
        key = frozenset(data.mul(s, h) for h in H_star)
        if key not in cosets:
            cosets[key] = s
    psi = tuple(sorted(cosets.values()))
    # the reflex type is always primitive: its right stabilizer equals H_star
    right = frozenset(
        g for g in range(n) if {data.mul(s, g) for s in T_star} == T_star
    )
    if right != H_star:
        raise DomainError("reflex datum failed the primitivity check")
    if 2 * len(psi) != degree:
        raise DomainError("reflex embeddings do not form a CM type")
    return ReflexData(T_star, H_star, degree, psi)


# -- coordinate realization on K -----------------------------------------------


@dataclass(frozen=True)
class FieldAuto:
    """An automorphism of K: a sign on the base generator and the image of omega."""

    field: CMField
    base_sign: int  # +1 or -1
    omega_image: CMElem

    def apply_base(self, a: RingElem) -> RingElem:
        return a if self.base_sign > 0 else a.conj()

    def apply(self, z: CMElem) -> CMElem:
        x = self.apply_base(z.x)
        y = self.apply_base(z.y)
        return self.field.elem(x, self.field.base.zero) + y * self.omega_image

    def compose(self, other: "FieldAuto") -> "FieldAuto":
        """self after other."""
        img = self.apply(other.omega_image)
        return FieldAuto(self.field, self.base_sign * other.base_sign, img)


def automorphism_group(field: CMField) -> list[FieldAuto]:
    """All automorphisms of K over Q, as coordinate maps.

    Always contains the identity and complex conjugation; for a real
    quadratic base the other two exist iff conj(disc)/disc is a square in F,
    which is exactly the Galois condition for K/Q.
    """
    K = field
    ident = FieldAuto(K, 1, K.omega)
    conj = FieldAuto(K, 1, K.omega.conj())
    autos = [ident, conj]
    if K.base.is_rational:
        return autos
    d = K.disc
    ratio = d.conj() / d
    y = sqrt_in_field(ratio)
    if y is None:
        return autos
    # sigma(omega) = x + y*omega with 2x = y*b - conj(b)
    x = (y * K.b - K.b.conj()) / 2
    sigma = FieldAuto(K, -1, K.elem(x, y))
    autos += [sigma, conj.compose(sigma)]
    # sanity: images satisfy the conjugated quadratic
    for a in autos[2:]:
        w = a.omega_image
        if not (w * w + K.elem(K.b.conj()) * w + K.elem(K.c.conj())).is_zero():
            raise DomainError("automorphism image fails its minimal polynomial")
    return autos


@dataclass(frozen=True)
class GaloisRealization:
    """Galois data together with its coordinate action on K (the case L = K)."""

    field: CMField
    data: GaloisData
    autos: tuple[FieldAuto, ...]
    reflex: ReflexData


def galois_realization(field: CMField) -> GaloisRealization:
    """Build the Galois data of K/Q with the CM type induced by the field's
    normalized embeddings.  Requires K Galois over Q (degree 2 or 4)."""
    autos = automorphism_group(field)
    if len(autos) != 2 * field.g:
        raise UnsupportedGaloisData(
            "K is not Galois over Q; the reflex norm is not implementable at desk scale"
        )
    index = {a: i for i, a in enumerate(autos)}
    n = len(autos)
    table = tuple(
        tuple(index[autos[i].compose(autos[j])] for j in range(n)) for i in range(n)
    )
    # T: for each embedding, the automorphism g with phi_1 o g = phi_i
    T = []
    for i in range(field.g):
        want_sign = 1 if i == 0 else -1
        for j, a in enumerate(autos):
            if a.base_sign == want_sign and a.omega_image.y.sign_at(0) > 0:
                T.append(j)
                break
        else:
            raise DomainError("no automorphism realizes the CM-type embedding")
    rho = index[FieldAuto(field, 1, field.omega.conj())]
    data = build_galois_data(n, table, [index[autos[0]]], T, rho)
    return GaloisRealization(field, data, tuple(autos), reflex_of(data))


def _check_in_reflex_field(real: GaloisRealization, d: CMElem) -> None:
    for h in real.reflex.H_star:
        if real.autos[h].apply(d) != d:
            raise DomainError("element does not lie in the reflex field")


def reflex_norm_elem(d: CMElem, real: GaloisRealization) -> CMElem:
    """g(d): the product of the reflex-type embeddings applied to d."""
    if d.field != real.field:
        raise DomainError("element lives in a different field")
    _check_in_reflex_field(real, d)
    out = real.field.one
    for j in real.reflex.psi:
        out = out * real.autos[j].apply(d)
    return out


def apply_auto_to_ideal(auto: FieldAuto, A: FracIdeal) -> FracIdeal:
    return reduce(A.field, [auto.apply(g) for g in A.basis()])


def reflex_norm_ideal(A: FracIdeal, real: GaloisRealization) -> FracIdeal:
    """The ideal norm along the reflex type; supported when the reflex field
    equals K itself (imaginary quadratic, or Galois quartic with trivial
    reflex stabilizer)."""
    if len(real.reflex.H_star) != 1:
        raise UnsupportedGaloisData(
            "reflex field is a proper subfield; ideal norms there are not implementable at desk scale"
        )
    out = None
    for j in real.reflex.psi:
        img = apply_auto_to_ideal(real.autos[j], A)
        out = img if out is None else reduce(
            A.field, [a * b for a in out.basis() for b in img.basis()]
        )
    return out


def reflex_norm_on_ray_class(A: FracIdeal, N: int, real: GaloisRealization) -> FracIdeal:
    """Representative of the image ray class of [A] under the induced map.

    Well-definedness is the congruence-preservation property of the element
    norm, exposed separately as `norm_preserves_congruence` for testing.
    """
    from .ideals import is_coprime_to

    if not is_coprime_to(A, N):
        raise DomainError("ideal is not coprime to the level")
    return reflex_norm_ideal(A, real)


def norm_preserves_congruence(d: CMElem, N: int, real: GaloisRealization) -> bool:
    """Executable form of the congruence-preservation lemma: if d =* 1 mod N
    in the reflex field then g(d) =* 1 mod N in K."""
    if not mult_congruent_one(d, N):
        raise DomainError("input is not multiplicatively congruent to 1")
    return mult_congruent_one(reflex_norm_elem(d, real), N)
