"""Classical reduction and Dirichlet composition of integer binary quadratic
forms.  Test oracle only: independent of the package's ideal-based route."""

from math import gcd, isqrt


def reduce_form(a, b, c):
    while True:
        if -a < b <= a <= c and not (a == c and b < 0):
            return (a, b, c)
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        # normalize b into (-a, a]
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c2 = a * r * r + b * r + c
        a, b, c = a, b2, c2


def reduced_forms(D):
    """All reduced primitive positive definite forms of discriminant D < 0."""
    out = []
    b = D % 2
    while b * b <= -D // 3 + 1:
        if (b * b - D) % 4 == 0:
            m = (b * b - D) // 4
            a = max(b, 1)
            while a * a <= m:
                if m % a == 0:
                    c = m // a
                    if gcd(gcd(a, b), c) == 1 and -a < b <= a <= c:
                        if not (a == c and b < 0):
                            out.append((a, b, c))
                            if 0 < b < a < c:
                                out.append((a, -b, c))
                a += 1
        b += 2
    return sorted(set(reduce_form(*f) for f in out))


def compose(f1, f2, D):
    """Dirichlet composition, reduced output.  Brute-forces the middle
    coefficient congruences (desk-scale discriminants)."""
    a1, b1, _ = f1
    a2, b2, _ = f2
    e = gcd(gcd(a1, a2), (b1 + b2) // 2)
    A = a1 * a2 // (e * e)
    m1, m2, m4 = 2 * a1 // e, 2 * a2 // e, 4 * A
    for B in range(0, 2 * m4):
        if (B - b1) % m1 == 0 and (B - b2) % m2 == 0 and (B * B - D) % m4 == 0:
            C = (B * B - D) // (4 * A)
            return reduce_form(A, B, C)
    raise RuntimeError("no composition solution found")


def composition_table(D):
    forms = reduced_forms(D)
    index = {f: i for i, f in enumerate(forms)}
    return forms, [[index[compose(f, g, D)] for g in forms] for f in forms]
