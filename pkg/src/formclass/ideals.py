"""Fractional O_K-ideals as O_F-module pairs, in canonical Hermite-like form.

An ideal is stored as scale * <[[1, b], [0, d]]> where the matrix rows are
coordinates over the basis {omega, 1}, the integral part is primitive
(content one), b is the canonical residue modulo d*O_F, d and the scale are
canonical associates.  Euclidean O_F makes this form unique, so ideal
equality is plain equality of the stored data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .errors import DomainError, InconclusiveSearch, NotAnIdealError
from .number_ring import (
    RingElem,
    canonical_associate,
    div_exact,
    divides,
    gcd_of,
    reduce_mod_elem,
    reduce_mod_int,
    residues_mod_elem,
)
from .cm_field import CMElem, CMField


# -- O_F-module rows ---------------------------------------------------------


def _hnf_rows(rows: list[tuple[RingElem, RingElem]]):
    """Upper-triangular form ((a, b), (0, d)) of the row span over O_F.

    Works for any number of generator rows; drops zero rows.  Not yet
    content-normalized or residue-reduced.
    """
    if not rows:
        raise DomainError("empty generating set")
    field = rows[0][0].field
    work = [r for r in rows if not (r[0].is_zero() and r[1].is_zero())]
    if not work:
        raise DomainError("zero module")
    from .number_ring import bezout, divmod_nearest

    # clear the first column down to a single pivot row
    pivot = None
    rest = []
    for r in work:
        if pivot is None:
            pivot = r
            continue
        a1, b1 = pivot
        a2, b2 = r
        if a2.is_zero():
            rest.append(r)
            continue
        if a1.is_zero():
            pivot = r
            rest.append((a1, b1))
            continue
        g, u, v = bezout(a1, a2)
        new_pivot = (u * a1 + v * a2, u * b1 + v * b2)
        # unimodular complement row: (-a2/g)*r1 + (a1/g)*r2
        m1, m2 = -div_exact(a2, g), div_exact(a1, g)
        rest.append((m1 * a1 + m2 * a2, m1 * b1 + m2 * b2))
        pivot = new_pivot
    if pivot is None or pivot[0].is_zero():
        # rank < 2 in the omega coordinate: pivot among the rest rows
        raise NotAnIdealError("module has rank below two over O_F")
    # gcd the second column of the remaining rows
    second = field.zero
    for (_, b2) in rest:
        if b2.is_zero():
            continue
        second = b2 if second.is_zero() else gcd_of(second, b2)
    if second.is_zero():
        raise NotAnIdealError("module has rank below two over O_F")
    return pivot, second


def _canonical_rows(rows: list[tuple[RingElem, RingElem]]):
    """Canonical ((a, b), (0, d)): a, d canonical associates, b reduced mod d."""
    (a, b), d = _hnf_rows(rows)
    a, wa = canonical_associate(a)
    b = b * wa
    d, _ = canonical_associate(d)
    b = reduce_mod_elem(b, d)
    return a, b, d


@dataclass(frozen=True)
class FracIdeal:
    """scale * (O_F*(omega + b) + O_F*d), the canonical form of a fractional ideal."""

    field: CMField
    scale: RingElem  # in F, canonical associate
    b: RingElem      # integral, reduced mod d
    d: RingElem      # integral, canonical associate

    @property
    def xi1(self) -> CMElem:
        """First canonical basis element: scale * (omega + b)."""
        return self.field.elem(self.scale * self.b, self.scale)

    @property
    def xi2(self) -> CMElem:
        """Second canonical basis element: scale * d."""
        return self.field.elem(self.scale * self.d, self.field.base.zero)

    def basis(self) -> tuple[CMElem, CMElem]:
        return self.xi1, self.xi2

    def is_integral(self) -> bool:
        return self.scale.is_integral()

    def norm_abs(self) -> Fraction:
        """Absolute norm: index [O_K : I] for integral I, extended multiplicatively."""
        f = self.field.base
        sc = self.scale.x if f.is_rational else self.scale.norm()
        dn = self.d.x if f.is_rational else self.d.norm()
        return abs(sc * sc * dn)

    def __repr__(self):
        return "Ideal(%r * [[1, %r], [0, %r]])" % (self.scale, self.b, self.d)


def reduce(field: CMField, gens: Sequence[CMElem]) -> FracIdeal:
    """Canonical form of the fractional ideal spanned over O_F by gens.

    Raises NotAnIdealError if the span is not a rank-2 module closed under
    multiplication by omega.
    """
    if not gens:
        raise DomainError("empty generating set")
    base = field.base
    # clear denominators with a rational integer
    den = 1
    for g in gens:
        for q in g.coords_q():
            den = den * q.denominator // math.gcd(den, q.denominator)
    rows = []
    for g in gens:
        s = den * g
        rows.append((s.y, s.x))  # coordinates over {omega, 1}
    a, b, d = _canonical_rows(rows)
    # factor out the O_F-content; closure under omega forces a | b and a | d
    if not (divides(a, b) and divides(a, d)):
        raise NotAnIdealError("module is not closed under multiplication by omega")
    b, d = div_exact(b, a), div_exact(d, a)
    # closure test: omega * (omega + b) must lie in the module
    #   omega*(omega+b) = (b - bk)*omega - ck,  membership needs
    #   d | (b - bk)*b + ck - b*bk + ... reduced: d | norm(omega + b)
    nrm = b * b - field.b * b + field.c
    if not divides(d, nrm):
        raise NotAnIdealError("module is not closed under multiplication by omega")
    scale, _ = canonical_associate(base.elem(Fraction(1, den)) * a)
    b = reduce_mod_elem(b, d)
    d, _ = canonical_associate(d)
    return FracIdeal(field, scale, b, d)


def unit_ideal(field: CMField) -> FracIdeal:
    return reduce(field, [field.omega, field.one])


def principal_ideal(z: CMElem) -> FracIdeal:
    if z.is_zero():
        raise DomainError("zero generates no fractional ideal")
    return reduce(z.field, [z * z.field.omega, z])


def scale_ideal(s, ideal: FracIdeal) -> FracIdeal:
    if isinstance(s, CMElem):
        return reduce(ideal.field, [s * g for g in ideal.basis()])
    return reduce(ideal.field, [g * s for g in ideal.basis()])


def mul(A: FracIdeal, B: FracIdeal) -> FracIdeal:
    """Product ideal, generated by the four pairwise basis products."""
    if A.field != B.field:
        raise DomainError("mixed CM-fields")
    a1, a2 = A.basis()
    b1, b2 = B.basis()
    return reduce(A.field, [a1 * b1, a1 * b2, a2 * b1, a2 * b2])


def conj_ideal(A: FracIdeal) -> FracIdeal:
    return reduce(A.field, [g.conj() for g in A.basis()])


def norm_rel_ideal(A: FracIdeal) -> RingElem:
    """Generator of N_{K/F}(A), as a canonical associate in F."""
    C = mul(A, conj_ideal(A))
    if not (C.b.is_zero() and C.d == C.d.field.one):
        raise DomainError("ideal times conjugate is not an F-scalar module")
    return C.scale


def inv(A: FracIdeal) -> FracIdeal:
    """Inverse ideal via the conjugate: A * conj(A) = N_{K/F}(A) * O_K."""
    n = norm_rel_ideal(A)
    return reduce(A.field, [g.conj() / n for g in A.basis()])


def contains(A: FracIdeal, z: CMElem) -> bool:
    """Exact membership z in A."""
    w = z / A.scale
    c1 = w.y
    if not c1.is_integral():
        return False
    c2 = (w.x - c1 * A.b) / A.d
    return c2.is_integral()


def module_solve(target: CMElem, gens: Sequence[CMElem]) -> Optional[list[RingElem]]:
    """Coefficients c_i in O_F with target = sum c_i gens_i, or None.

    Tracks the unimodular row transform of the Hermite reduction so the
    triangular solution maps back to the original generators.
    """
    if not gens:
        return None
    from .number_ring import bezout

    field = gens[0].field
    base = field.base
    den = 1
    for g in list(gens) + [target]:
        for q in g.coords_q():
            den = den * q.denominator // math.gcd(den, q.denominator)
    k = len(gens)
    ext = []
    for i, g in enumerate(gens):
        s = den * g
        ext.append([s.y, s.x] + [base.one if j == i else base.zero for j in range(k)])
    t = den * target
    tvec = (t.y, t.x)

    piv = None
    others = []
    for row in ext:
        if row[0].is_zero():
            others.append(row)
        elif piv is None:
            piv = row
        else:
            g, u, v = bezout(piv[0], row[0])
            m1, m2 = -div_exact(row[0], g), div_exact(piv[0], g)
            comp = [m1 * piv[j] + m2 * row[j] for j in range(k + 2)]
            piv = [u * piv[j] + v * row[j] for j in range(k + 2)]
            others.append(comp)
    second = None
    for row in others:
        if row[1].is_zero():
            continue
        if second is None:
            second = row
        else:
            g, u, v = bezout(second[1], row[1])
            second = [u * second[j] + v * row[j] for j in range(k + 2)]

    if piv is None:
        if not tvec[0].is_zero():
            return None
        c1 = None
    else:
        c1 = tvec[0] / piv[0]
        if not c1.is_integral():
            return None
    r1 = tvec[1] if c1 is None else tvec[1] - c1 * piv[1]
    if second is None:
        if not r1.is_zero():
            return None
        if c1 is None:
            return None
        return [c1 * piv[2 + j] for j in range(k)]
    c2 = r1 / second[1]
    if not c2.is_integral():
        return None
    out = []
    for j in range(k):
        coeff = c2 * second[2 + j]
        if c1 is not None:
            coeff = coeff + c1 * piv[2 + j]
        out.append(coeff)
    return out


# -- coprimality and congruences ----------------------------------------------


def _scale_num_den(scale: RingElem) -> tuple[RingElem, RingElem]:
    """scale = p/q with p, q integral and coprime (q from the rational denominator)."""
    f = scale.field
    den = scale.x.denominator
    if not f.is_rational:
        den = den * scale.y.denominator // math.gcd(den, scale.y.denominator)
    p = scale * den
    q = f.elem(den)
    g = gcd_of(p, q)
    return div_exact(p, g), div_exact(q, g)


def _abs_norm_int(a: RingElem) -> int:
    n = a.x if a.field.is_rational else a.norm()
    return abs(int(n))


def is_coprime_to(A: FracIdeal, N: int) -> bool:
    """True iff A lies in the group of fractional ideals coprime to N*O_K."""
    if N < 1:
        raise DomainError("level must be positive")
    if N == 1:
        return True
    p, q = _scale_num_den(A.scale)
    if math.gcd(_abs_norm_int(p), N) != 1:
        return False
    if math.gcd(_abs_norm_int(q), N) != 1:
        return False
    return math.gcd(_abs_norm_int(A.d), N) == 1


def denominator_ideal(nu: CMElem) -> FracIdeal:
    """The integral ideal {x in O_K : x*nu in O_K} = (t) / ((t*nu) + (t))."""
    if nu.is_zero():
        raise DomainError("zero has no denominator ideal")
    K = nu.field
    den = 1
    for qq in nu.coords_q():
        den = den * qq.denominator // math.gcd(den, qq.denominator)
    t = K.elem(den)
    tnu = den * nu
    G = reduce(K, [tnu * K.omega, tnu, t * K.omega, t])
    return mul(principal_ideal(t), inv(G))


def _one_decomposition(D: FracIdeal, N: int) -> CMElem:
    """beta in D with beta = 1 mod N*O_K; requires D integral and coprime to N."""
    K = D.field
    d1, d2 = D.basis()
    n_om = N * K.omega
    n_one = K.elem(N)
    sol = module_solve(K.one, [d1, d2, n_om, n_one])
    if sol is None:
        raise DomainError("ideal is not coprime to the level")
    return sol[0] * d1 + sol[1] * d2


def congruent_mod_level(a: CMElem, b: CMElem, N: int) -> bool:
    """a = b mod N*O_K for integral a, b."""
    diff = a - b
    return ((diff.x / N).is_integral() and (diff.y / N).is_integral())


def mult_congruent_one(nu: CMElem, N: int) -> bool:
    """The multiplicative congruence nu =* 1 mod N*O_K.

    Implemented integrally: write nu = alpha/beta with beta = 1 mod N*O_K
    (hence coprime to N) and test alpha = beta mod N*O_K.  Equivalent to the
    valuational definition because the congruence only constrains primes over
    N and integral differences are unconstrained elsewhere.
    """
    if nu.is_zero():
        raise DomainError("congruence undefined at zero")
    if not is_coprime_to(principal_ideal(nu), N):
        raise DomainError("element is not coprime to the level")
    if N == 1:
        return True
    if nu.is_integral():
        return congruent_mod_level(nu, nu.field.one, N)
    D = denominator_ideal(nu)
    beta = _one_decomposition(D, N)
    alpha = nu * beta
    if not alpha.is_integral():
        raise DomainError("denominator ideal failed to clear nu")
    return congruent_mod_level(alpha, beta, N)


# -- residue ring O_K / N*O_K ---------------------------------------------------


class ResidueRingK:
    """O_K modulo N*O_K with canonical coordinate representatives."""

    def __init__(self, field: CMField, N: int):
        if N < 1:
            raise DomainError("level must be positive")
        self.field = field
        self.N = N

    def of(self, z: CMElem) -> CMElem:
        if not z.is_integral():
            raise DomainError("residues are defined for integral elements")
        return self.field.elem(
            reduce_mod_int(z.x, self.N), reduce_mod_int(z.y, self.N)
        )

    @property
    def one(self) -> CMElem:
        return self.of(self.field.one)

    def mul(self, a: CMElem, b: CMElem) -> CMElem:
        return self.of(a * b)

    def is_unit(self, z: CMElem) -> bool:
        return math.gcd(int(abs(z.norm_abs())), self.N) == 1

    def inv(self, z: CMElem) -> CMElem:
        """Inverse of a unit residue (finite multiplicative order)."""
        if not self.is_unit(z):
            raise DomainError("residue is not invertible")
        r = self.of(z)
        prev, cur = self.one, r
        while cur != self.one:
            prev, cur = cur, self.mul(cur, r)
        return prev

    def residue_of_fraction(self, nu: CMElem) -> CMElem:
        """Residue of nu in (O_K/N)^x for nu coprime to N (nu may be fractional)."""
        if nu.is_integral():
            return self.of(nu)
        D = denominator_ideal(nu)
        beta = _one_decomposition(D, self.N)
        alpha = nu * beta
        return self.mul(self.of(alpha), self.inv(self.of(beta)))


def fraction_residue(nu: CMElem, N: int) -> CMElem:
    return ResidueRingK(nu.field, N).residue_of_fraction(nu)


# -- bounded generator search ---------------------------------------------------


@lru_cache(maxsize=None)
def _field_box_constants(field: CMField) -> tuple:
    """Float data for candidate boxes: per embedding (Im w, |Re w|, theta floats)."""
    import cmath

    out = []
    for i in range(field.g):
        b = field.b.float_at(i)
        dd = field.disc.float_at(i)
        im = math.sqrt(-dd) / 2
        re = -b / 2
        out.append((re, im))
    return tuple(out)


def _coordinate_ranges(field: CMField, bounds: Sequence[float]):
    """Integer ranges for (x coords, y coords) of z = x*omega... solving
    |phi_i(y*omega + x)| <= bounds[i]."""
    base = field.base
    emb = _field_box_constants(field)
    Xs, Ys = [], []
    for i, B in enumerate(bounds):
        re, im = emb[i]
        Y = B / im
        X = B * (1 + abs(re) / im)
        Ys.append(Y * (1 + 1e-9))
        Xs.append(X * (1 + 1e-9))
    def rng_for(bound_pair):
        B0, B1 = bound_pair
        if base.is_rational:
            return int(B0) + 1
        t0, t1 = base.theta_float(0), base.theta_float(1)
        c2 = (B0 + B1) / abs(t0 - t1)
        c1 = (B0 + B1) / 2 + (abs(t0 + t1) / abs(t0 - t1)) * (B0 + B1) / 2
        return int(c1) + 1, int(c2) + 1
    if base.is_rational:
        return rng_for((Xs[0], Xs[0])), rng_for((Ys[0], Ys[0]))
    return rng_for((Xs[0], Xs[1])), rng_for((Ys[0], Ys[1]))


def _norm_candidates(field: CMField, n: int) -> Iterator[CMElem]:
    """Integral z with |N_{K/Q}(z)| = n, inside the balanced-representative box.

    Every unit orbit of such elements meets the box: scaling by powers of the
    fundamental unit of F balances the archimedean absolute values.
    """
    base = field.base
    if n < 1:
        return
    g = field.g
    root = n ** (1.0 / (2 * g))
    slack = 1.0
    if not base.is_rational:
        slack = base.fundamental_unit.float_at(0)
    B = root * max(slack, 1.0) * (1 + 1e-9)
    bounds = [B] * g
    xr, yr = _coordinate_ranges(field, bounds)
    if base.is_rational:
        yield from _norm_candidates_rational(field, n, xr, yr)
        return
    yield from _norm_candidates_quadratic(field, n, xr, yr)


def _norm_candidates_rational(field: CMField, n: int, xmax: int, ymax: int) -> Iterator[CMElem]:
    # exact integer arithmetic: N(x + y*omega) = x^2 - b xy + c y^2
    import numpy as np

    b = int(field.b.x)
    c = int(field.c.x)
    xs = np.arange(-xmax, xmax + 1, dtype=np.int64)
    for y in range(-ymax, ymax + 1):
        vals = xs * xs - b * y * xs + c * y * y
        for x in xs[vals == n]:
            yield field.elem(int(x), y)


def _norm_candidates_quadratic(field: CMField, n: int, xr, yr) -> Iterator[CMElem]:
    import numpy as np

    base = field.base
    (x1m, x2m), (y1m, y2m) = xr, yr
    t0, t1 = base.theta_float(0), base.theta_float(1)
    emb = _field_box_constants(field)
    x1 = np.arange(-x1m, x1m + 1)
    x2 = np.arange(-x2m, x2m + 1)
    y1 = np.arange(-y1m, y1m + 1)
    y2 = np.arange(-y2m, y2m + 1)
    # |phi_i|^2 = (sx + sy*re_i)^2 + (sy*im_i)^2 with sx, sy the real embeddings
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    for a1 in x1:
        for a2 in x2:
            tot = np.ones(Y1.shape)
            for i, (re, im) in enumerate(emb):
                th = t0 if i == 0 else t1
                sx = a1 + a2 * th
                sy = Y1 + Y2 * th
                tot = tot * ((sx + sy * re) ** 2 + (sy * im) ** 2)
            hits = np.argwhere(np.abs(tot - n) < 0.25)
            for (i1, i2) in hits:
                z = field.elem(
                    base.elem(int(a1), int(a2)), base.elem(int(y1[i1]), int(y2[i2]))
                )
                if abs(z.norm_abs()) == n:
                    yield z


_GENERATOR_CACHE: dict = {}


def generators_of(A: FracIdeal, limit: Optional[int] = None) -> list[CMElem]:
    """All box-representative generators of A (complete up to units).

    Returns [] when A is definitively non-principal.
    """
    if limit is None and A in _GENERATOR_CACHE:
        return _GENERATOR_CACHE[A]
    p, q = _scale_num_den(A.scale)
    prim = FracIdeal(A.field, A.field.base.one, A.b, A.d)
    n = int(prim.norm_abs())
    out = []
    count = 0
    for z in _norm_candidates(A.field, n):
        count += 1
        if limit is not None and count > limit:
            raise InconclusiveSearch("generator search exceeded the candidate limit")
        if z.is_zero():
            continue
        if contains(prim, z) and principal_ideal(z) == prim:
            out.append(z * p / q)
    if limit is None:
        _GENERATOR_CACHE[A] = out
    return out


@lru_cache(maxsize=None)
def unit_residue_table(field: CMField, N: int):
    """Map residue -> unit of O_K realizing it, for the image of O_K^x mod N.

    Seeded from all units in the balanced box (norm-1 candidates) plus the
    fundamental unit of F, then closed under multiplication.
    """
    ring = ResidueRingK(field, N)
    seeds = [z for z in _norm_candidates(field, 1)]
    if not field.base.is_rational:
        seeds.append(field.elem(field.base.fundamental_unit, field.base.zero))
    seeds = [u for u in seeds if not u.is_zero()]
    table = {ring.of(field.one): field.one}
    frontier = [field.one]
    while frontier:
        nxt = []
        for u in frontier:
            for s in seeds:
                w = u * s
                r = ring.of(w)
                if r not in table:
                    table[r] = w
                    nxt.append(w)
        frontier = nxt
    return table


def principal_generator_mod(
    A: FracIdeal, N: int, bound: Optional[int] = None
) -> Optional[CMElem]:
    """nu with A = nu*O_K and nu =* 1 mod N*O_K, or None if no such nu exists.

    The generator search box is provably complete, so None is a definitive
    negative; a caller-supplied candidate bound may instead raise
    InconclusiveSearch.  An ideal not coprime to N has no such generator at
    all (the congruence forces coprimality), so it yields None directly.
    """
    if not is_coprime_to(A, N):
        return None
    gens = generators_of(A, limit=bound)
    if not gens:
        return None
    mu = gens[0]
    if N == 1:
        return mu
    ring = ResidueRingK(A.field, N)
    r = ring.residue_of_fraction(mu)
    table = unit_residue_table(A.field, N)
    want = ring.inv(r)
    u = table.get(want)
    if u is None:
        return None
    nu = u * mu
    if not mult_congruent_one(nu, N):
        raise DomainError("unit adjustment failed the congruence check")
    return nu


def ray_equal(A: FracIdeal, B: FracIdeal, N: int) -> bool:
    """Equality of the classes of A and B in the ray class group mod N*O_K."""
    if A == B:
        return True
    return principal_generator_mod(mul(A, inv(B)), N) is not None


# -- the modulus N*O_K and its prime factorization (cross-check oracle) --------


@dataclass(frozen=True)
class PrimeAbove:
    ideal: FracIdeal
    residue_degree: int
    ramification: int


@dataclass(frozen=True)
class RayModulus:
    N: int
    factors: tuple[tuple[PrimeAbove, int], ...]  # (prime, exponent in N*O_K)


def _roots_mod_prime_elem(field, pi: RingElem, poly) -> list[RingElem]:
    """Roots of a monic quadratic over O_F/(pi), by enumeration (desk scale)."""
    b, c = poly
    roots = []
    for r in residues_mod_elem(pi):
        val = r * r + b * r + c
        if divides(pi, val):
            roots.append(r)
    return roots


def _primes_of_base_above(base, p: int) -> list[tuple[RingElem, int]]:
    """(generator, ramification) for primes of O_F over the rational prime p."""
    if base.is_rational:
        return [(base.elem(p), 1)]
    pe = base.elem(p)
    # minimal polynomial of theta: x^2 - m, or x^2 - x - (m-1)/4
    if base.has_half_basis:
        poly = (base.elem(-1), base.elem(-(base.m - 1) // 4))
    else:
        poly = (base.zero, base.elem(-base.m))
    roots = []
    for r in range(p):
        rr = base.elem(r)
        val = rr * rr + poly[0] * rr + poly[1]
        if all(int(q) % p == 0 for q in (val.x, val.y)):
            roots.append(rr)
    if not roots:
        return [(pe, 1)]  # inert
    gens = []
    for r in roots:
        g = gcd_of(pe, base.theta - r)
        if all(g != h for h, _ in gens):
            gens.append((g, 1))
    if len(gens) == 1 and len(roots) == 1:
        # double root: ramified
        return [(gens[0][0], 2)]
    if len(gens) == 1:
        return gens
    return gens


def factor_level(field: CMField, N: int) -> RayModulus:
    """Prime factorization of N*O_K; used as the valuation cross-check oracle."""
    from .number_ring import factor_int

    if N < 1:
        raise DomainError("level must be positive")
    factors = []
    for p, e in sorted(factor_int(N).items()):
        for pi, e_base in _primes_of_base_above(field.base, p):
            f_base = 1 if field.base.is_rational else (
                1 if abs(int(pi.norm())) == p else 2
            )
            roots = _roots_mod_prime_elem(field.base, pi, (field.b, field.c))
            if not roots:
                prime = reduce(field, [pi * field.omega, field.elem(pi)])
                factors.append((PrimeAbove(prime, 2 * f_base, 1), e * e_base))
                continue
            seen = []
            for r in roots:
                gen2 = field.omega - field.elem(r)
                prime = reduce(
                    field,
                    [field.elem(pi), pi * field.omega, gen2, gen2 * field.omega],
                )
                if prime not in seen:
                    seen.append(prime)
            # a single root of the quadratic means it is a double root: ramified
            ram = 2 if len(seen) == 1 else 1
            for prime in seen:
                factors.append((PrimeAbove(prime, f_base, ram), e * e_base * ram))
    return RayModulus(N, tuple(factors))


def valuation(prime: FracIdeal, A: FracIdeal) -> int:
    """v_p(A) for a prime ideal p, by repeated exact division."""
    K = A.field
    den = A.scale.x.denominator
    if not K.base.is_rational:
        den = den * A.scale.y.denominator // math.gcd(den, A.scale.y.denominator)
    t = K.elem(den)
    J = scale_ideal(t, A)
    pinv = inv(prime)
    v = 0
    while True:
        J2 = mul(J, pinv)
        if not J2.is_integral():
            break
        J, v = J2, v + 1
    T = principal_ideal(t)
    w = 0
    while True:
        T2 = mul(T, pinv)
        if not T2.is_integral():
            break
        T, w = T2, w + 1
    return v - w


def valuation_elem(prime: FracIdeal, z: CMElem) -> int:
    return valuation(prime, principal_ideal(z))
