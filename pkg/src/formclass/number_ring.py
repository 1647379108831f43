"""Exact arithmetic in O_F for F = Q or a norm-Euclidean real quadratic field.

Supported base fields are Q, Q(sqrt2), Q(sqrt5) and Q(sqrt13).  The quadratic
ones are norm-Euclidean and their fundamental unit has norm -1, so the class
number and the narrow class number are both one.  Everything here is exact:
elements are pairs of Fractions over the integral basis {1, theta} with
theta = sqrt(m) or (1+sqrt(m))/2, and all comparisons of real embeddings are
decided by rational sign tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError

_SUPPORTED_M = (2, 5, 13)


def _sign(q: Fraction) -> int:
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


@dataclass(frozen=True)
class BaseField:
    """Q (kind="rational") or Q(sqrt m) (kind="real_quadratic", m squarefree)."""

    kind: str
    m: int = 0

    def __post_init__(self):
        if self.kind == "rational":
            if self.m:
                raise DomainError("rational field carries no radicand")
        elif self.kind == "real_quadratic":
            if self.m not in _SUPPORTED_M:
                raise DomainError(
                    "unsupported radicand %r; supported: %s" % (self.m, list(_SUPPORTED_M))
                )
        else:
            raise DomainError("unknown field kind %r" % (self.kind,))

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    @property
    def has_half_basis(self) -> bool:
        # integral basis {1, (1+sqrt m)/2} iff m = 1 mod 4
        return not self.is_rational and self.m % 4 == 1

    def elem(self, x, y=0) -> "RingElem":
        if self.is_rational and y:
            raise DomainError("rational field element with nonzero second coordinate")
        return RingElem(self, Fraction(x), Fraction(y))

    @property
    def zero(self) -> "RingElem":
        return self.elem(0)

    @property
    def one(self) -> "RingElem":
        return self.elem(1)

    @property
    def theta(self) -> "RingElem":
        if self.is_rational:
            raise DomainError("Q has no generator theta")
        return self.elem(0, 1)

    @property
    def fundamental_unit(self) -> "RingElem":
        if self.is_rational:
            raise DomainError("Q has no fundamental unit")
        if self.m == 2:
            return self.elem(1, 1)  # 1 + sqrt2
        # golden-ratio-style units for m = 5, 13: (1+sqrt5)/2 and (3+sqrt13)/2
        return self.elem(0, 1) if self.m == 5 else self.elem(1, 1)

    def theta_float(self, i: int = 0) -> float:
        root = math.sqrt(self.m)
        if i == 1:
            root = -root
        return (1.0 + root) / 2.0 if self.has_half_basis else root

    def __repr__(self):
        return "Q" if self.is_rational else "Q(sqrt%d)" % self.m


RATIONALS = BaseField("rational")


def parse_field(text: str) -> BaseField:
    t = text.strip().replace(" ", "")
    if t in ("Q", "q"):
        return RATIONALS
    for m in _SUPPORTED_M:
        if t.lower() in ("q(sqrt%d)" % m, "qsqrt%d" % m):
            return BaseField("real_quadratic", m)
    raise DomainError("cannot parse field %r" % text)


@dataclass(frozen=True)
class RingElem:
    """x + y*theta with Fraction coordinates over the integral basis."""

    field: BaseField
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not isinstance(self.x, Fraction):
            object.__setattr__(self, "x", Fraction(self.x))
        if not isinstance(self.y, Fraction):
            object.__setattr__(self, "y", Fraction(self.y))

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.field != self.field:
                raise DomainError("mixed base fields")
            return other
        return self.field.elem(other)

    def __add__(self, other):
        if not isinstance(other, (RingElem, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return RingElem(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (RingElem, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return RingElem(self.field, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RingElem(self.field, -self.x, -self.y)

    def __mul__(self, other):
        if not isinstance(other, (RingElem, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        f = self.field
        if f.is_rational:
            return RingElem(f, self.x * o.x, Fraction(0))
        cross = self.x * o.y + self.y * o.x
        sq = self.y * o.y
        if f.has_half_basis:
            # theta^2 = theta + (m-1)/4
            return RingElem(f, self.x * o.x + sq * Fraction(f.m - 1, 4), cross + sq)
        return RingElem(f, self.x * o.x + sq * f.m, cross)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (RingElem, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        if o.is_zero():
            raise DomainError("division by zero")
        if o.field.is_rational:
            return RingElem(o.field, self.x / o.x, Fraction(0))
        n = o.norm()
        inv = RingElem(o.field, o.conj().x / n, o.conj().y / n)
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.field.one / (self ** (-k))
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- field-theoretic data ----------------------------------------------

    def conj(self) -> "RingElem":
        f = self.field
        if f.is_rational:
            return self
        if f.has_half_basis:
            # conj(theta) = 1 - theta
            return RingElem(f, self.x + self.y, -self.y)
        return RingElem(f, self.x, -self.y)

    def trace(self) -> Fraction:
        f = self.field
        if f.is_rational:
            return self.x
        return 2 * self.x + (self.y if f.has_half_basis else 0)

    def norm(self) -> Fraction:
        f = self.field
        if f.is_rational:
            return self.x
        if f.has_half_basis:
            return self.x * self.x + self.x * self.y - self.y * self.y * Fraction(f.m - 1, 4)
        return self.x * self.x - self.y * self.y * f.m

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def _half_coords(self, i: int) -> tuple[Fraction, Fraction]:
        # value at embedding i written as (p + q*sqrt(m))/2
        if self.field.has_half_basis:
            p, q = 2 * self.x + self.y, self.y
        else:
            p, q = 2 * self.x, 2 * self.y
        return (p, q) if i == 0 else (p, -q)

    def sign_at(self, i: int) -> int:
        """Exact sign of the i-th real embedding (i = 0 is the identity)."""
        f = self.field
        if f.is_rational:
            if i != 0:
                raise DomainError("Q has a single embedding")
            return _sign(self.x)
        p, q = self._half_coords(i)
        if q == 0:
            return _sign(p)
        if p == 0:
            return _sign(q)
        sp, sq = _sign(p), _sign(q)
        if sp == sq:
            return sp
        t = p * p - f.m * q * q  # sign of the norm of p + q*sqrt(m)
        if sp > 0:
            return 1 if t > 0 else -1
        return 1 if t < 0 else -1

    def embedding(self, i: int) -> "RingElem":
        """The image of self under the i-th real embedding, as a field element."""
        if i == 0:
            return self
        if self.field.is_rational:
            raise DomainError("Q has a single embedding")
        return self.conj()

    def float_at(self, i: int = 0) -> float:
        if self.field.is_rational:
            return float(self.x)
        return float(self.x) + float(self.y) * self.field.theta_float(i)

    def __repr__(self):
        if self.field.is_rational:
            return str(self.x)
        return "(%s + %s*t%d)" % (self.x, self.y, self.field.m)


def is_totally_positive(a: RingElem) -> bool:
    """True iff every real embedding of a is positive (decided exactly)."""
    if a.is_zero():
        raise DomainError("total positivity is undefined at zero")
    return all(a.sign_at(i) > 0 for i in range(a.field.degree))


def divmod_nearest(a: RingElem, b: RingElem) -> tuple[RingElem, RingElem]:
    """q, r with a = q*b + r and |N(r)| < |N(b)|.

    Nearest-integer rounding of the coordinates of a/b; the norm-Euclidean
    bound for m in {2, 5, 13} guarantees descent.
    """
    if b.is_zero():
        raise DomainError("division by zero")
    q_exact = a / b
    q = a.field.elem(round(q_exact.x), round(q_exact.y))
    return q, a - q * b


def _require_integral(a: RingElem, what: str = "argument"):
    if not a.is_integral():
        raise DomainError("%s must lie in the ring of integers" % what)


def canonical_associate(a: RingElem) -> tuple[RingElem, RingElem]:
    """(r, w) with r = w*a, w a unit and r the canonical associate of a.

    Canonical means: totally positive, with the ratio of the two embeddings
    in [1, eps1^4) where eps1 > 1 is the identity embedding of the
    fundamental unit.  Over Q this is plain sign normalization.  Idempotent.
    """
    if a.is_zero():
        raise DomainError("zero has no canonical associate")
    f = a.field
    if f.is_rational:
        if a.x < 0:
            return -a, f.elem(-1)
        return a, f.one
    eps = f.fundamental_unit
    w = f.one
    b = a
    if b.norm() < 0:
        b, w = b * eps, w * eps
    if b.sign_at(0) < 0:
        b, w = -b, -w
    # now b is totally positive; balance with the totally positive unit eps^2
    e2 = eps * eps
    e2inv = e2.conj()  # norm(e2) = 1
    e4 = e2 * e2
    while (b - b.conj()).sign_at(0) < 0:  # ratio < 1
        b, w = b * e2, w * e2
    while (b - e4 * b.conj()).sign_at(0) >= 0:  # ratio >= eps1^4
        b, w = b * e2inv, w * e2inv
    return b, w


def gcd_of(a: RingElem, b: RingElem) -> RingElem:
    """Canonical-associate gcd of two integers of O_F, by Euclidean descent."""
    _require_integral(a)
    _require_integral(b)
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    while not b.is_zero():
        _, r = divmod_nearest(a, b)
        a, b = b, r
    return canonical_associate(a)[0]


def bezout(a: RingElem, b: RingElem) -> tuple[RingElem, RingElem, RingElem]:
    """(g, u, v) with g = gcd_of(a, b) and u*a + v*b = g exactly."""
    _require_integral(a)
    _require_integral(b)
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    f = a.field
    r0, r1 = a, b
    u0, u1 = f.one, f.zero
    v0, v1 = f.zero, f.one
    while not r1.is_zero():
        q, r = divmod_nearest(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    g, w = canonical_associate(r0)
    return g, u0 * w, v0 * w


def div_exact(a: RingElem, b: RingElem) -> RingElem:
    """a/b, asserting the quotient is integral whenever a is."""
    q = a / b
    if a.is_integral() and not q.is_integral():
        raise DomainError("inexact division in O_F")
    return q


def divides(d: RingElem, a: RingElem) -> bool:
    if d.is_zero():
        return a.is_zero()
    return (a / d).is_integral()


# -- residues ---------------------------------------------------------------


def reduce_mod_int(a: RingElem, n: int) -> RingElem:
    """Canonical residue of an integral element modulo n*O_F (n >= 1)."""
    _require_integral(a)
    if n < 1:
        raise DomainError("modulus must be positive")
    return a.field.elem(a.x % n, a.y % n)


@lru_cache(maxsize=None)
def _principal_lattice(d: RingElem) -> tuple[int, int, int]:
    """Row HNF (h00, h01; 0, h11) of the Z-lattice of d*O_F in basis {1, theta}."""
    f = d.field
    gens = [d] if f.is_rational else [d, d * f.theta]
    rows = [(int(g.x), int(g.y)) for g in gens]
    if f.is_rational:
        rows.append((0, 0))
    # integer row HNF on 2x2: nearest-rounding gcd on the first column
    (a0, a1), (b0, b1) = rows
    while b0:
        q = round(Fraction(a0, b0))
        a0, a1 = a0 - q * b0, a1 - q * b1
        (a0, a1), (b0, b1) = (b0, b1), (a0, a1)
    if a0 < 0:
        a0, a1 = -a0, -a1
    if b1 < 0:
        b1 = -b1
    if f.is_rational:
        return a0, 0, 1
    if a0 == 0 or b1 == 0:
        raise DomainError("degenerate lattice")
    a1 %= b1
    return a0, a1, b1


def reduce_mod_elem(a: RingElem, d: RingElem) -> RingElem:
    """Canonical residue of integral a modulo the principal ideal d*O_F."""
    _require_integral(a)
    _require_integral(d)
    if d.is_zero():
        raise DomainError("zero modulus")
    h00, h01, h11 = _principal_lattice(d)
    u, v = int(a.x), int(a.y)
    k = u // h00
    u -= k * h00
    v -= k * h01
    v %= h11
    return a.field.elem(u, v)


def residues_mod_elem(d: RingElem) -> Iterator[RingElem]:
    """A complete residue system for O_F / d*O_F, in a fixed order."""
    _require_integral(d)
    if d.is_zero():
        raise DomainError("zero modulus")
    h00, h01, h11 = _principal_lattice(d)
    for u in range(h00):
        for v in range(h11):
            yield d.field.elem(u, v)


def residue_is_unit(a: RingElem, n: int) -> bool:
    """True iff a is invertible modulo n*O_F (n a rational integer)."""
    _require_integral(a)
    return math.gcd(int(abs(a.norm())), n) == 1


def units_mod(field: BaseField, n: int) -> list[RingElem]:
    """Residues of the unit group O_F^x modulo n*O_F.

    Closure of the residues of -1 and the fundamental unit; for n = 1 this is
    the single zero residue.
    """
    if n < 1:
        raise DomainError("modulus must be positive")
    if n == 1:
        return [field.zero]
    gens = [reduce_mod_int(field.elem(-1), n)]
    if not field.is_rational:
        gens.append(reduce_mod_int(field.fundamental_unit, n))
        gens.append(reduce_mod_int(field.fundamental_unit.conj(), n))
    seen = {reduce_mod_int(field.one, n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                s = reduce_mod_int(r * g, n)
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return sorted(seen, key=lambda e: (e.x, e.y))


# -- element enumeration ------------------------------------------------------


@lru_cache(maxsize=None)
def elements_of_norm(field: BaseField, n: int) -> tuple[RingElem, ...]:
    """All canonical associates in O_F with |norm| = n, sorted.

    The canonical-associate window bounds both embeddings by sqrt(n)*eps1^2,
    so a finite coordinate box suffices.
    """
    if n < 1:
        raise DomainError("norm bound must be positive")
    if field.is_rational:
        return (field.elem(n),)
    eps1 = field.fundamental_unit.float_at(0)
    bound = math.sqrt(n) * eps1 * eps1 * (1 + 1e-9)
    t0, t1 = field.theta_float(0), field.theta_float(1)
    # |x + y*theta_i| <= bound for both i gives linear bounds on x, y
    ybound = int(2 * bound / abs(t0 - t1)) + 2
    found = set()
    for y in range(-ybound, ybound + 1):
        lo = max(-bound - y * t0, -bound - y * t1)
        hi = min(bound - y * t0, bound - y * t1)
        for x in range(math.floor(lo) - 1, math.ceil(hi) + 2):
            e = field.elem(x, y)
            if abs(e.norm()) == n:
                found.add(canonical_associate(e)[0])
    return tuple(sorted(found, key=lambda e: (e.x, e.y)))


def _fraction_sqrt(q: Fraction):
    if q < 0:
        return None
    sn = math.isqrt(q.numerator)
    sd = math.isqrt(q.denominator)
    if sn * sn != q.numerator or sd * sd != q.denominator:
        return None
    return Fraction(sn, sd)


def sqrt_in_field(a: RingElem):
    """Some y in F with y*y = a, or None if a is not a square in F."""
    f = a.field
    if f.is_rational:
        r = _fraction_sqrt(a.x)
        return None if r is None else f.elem(r)
    # y = p + q*theta with theta^2 = t0 + t1*theta; q = 0 first
    if a.y == 0:
        r = _fraction_sqrt(a.x)
        if r is not None:
            return f.elem(r)
    if f.has_half_basis:
        t0, t1 = Fraction(f.m - 1, 4), Fraction(1)
    else:
        t0, t1 = Fraction(f.m), Fraction(0)
    A, B = a.x, a.y
    # (p^2 + q^2 t0) = A, (2pq + q^2 t1) = B; eliminate p: quadratic in w = q^2
    c2 = t1 * t1 + 4 * t0
    c1 = -(2 * B * t1 + 4 * A)
    c0 = B * B
    disc = c1 * c1 - 4 * c2 * c0
    rt = _fraction_sqrt(disc)
    if rt is None:
        return None
    for w in ((-c1 + rt) / (2 * c2), (-c1 - rt) / (2 * c2)):
        if w <= 0:
            continue
        q = _fraction_sqrt(w)
        if q is None:
            continue
        p = (B - w * t1) / (2 * q)
        y = f.elem(p, q)
        if y * y == a:
            return y
    return None


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale inputs)."""
    if n < 1:
        raise DomainError("can only factor positive integers")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- two by two matrices over F ----------------------------------------------


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix over F, row-major."""

    a: RingElem
    b: RingElem
    c: RingElem
    d: RingElem

    @staticmethod
    def identity(field: BaseField) -> "Mat2":
        return Mat2(field.one, field.zero, field.zero, field.one)

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> RingElem:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[RingElem, RingElem, RingElem, RingElem]:
        return (self.a, self.b, self.c, self.d)

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.entries())

    def scale(self, s: RingElem) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def inverse(self) -> "Mat2":
        dt = self.det()
        if dt.is_zero():
            raise DomainError("singular matrix")
        return Mat2(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def congruent_mod_int(self, other: "Mat2", n: int) -> bool:
        return all(
            reduce_mod_int(p - q, n).is_zero()
            for p, q in zip(self.entries(), other.entries())
        )
