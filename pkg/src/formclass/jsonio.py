"""JSON schemas for every value the CLI reads or writes.

Numbers travel as decimal strings ("p/q" for rationals, fixed-point decimal
strings for complex parts) so reports are byte-identical across runs and
platforms.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp, workprec

from .errors import DomainError
from .number_ring import BaseField, RATIONALS, RingElem, parse_field
from .cm_field import CMElem, CMField, build_cm_field
from .forms import QuadForm
from .ideals import FracIdeal
from .reflex import GaloisData, build_galois_data

SCHEMA_VERSION = "1"


def frac_to_str(q: Fraction) -> str:
    return str(q)


def frac_from_str(s: str) -> Fraction:
    return Fraction(s)


def ring_to_json(e: RingElem) -> dict:
    return {"x": frac_to_str(e.x), "y": frac_to_str(e.y)}


def ring_from_json(field: BaseField, obj) -> RingElem:
    if isinstance(obj, str):
        return field.elem(Fraction(obj))
    return field.elem(frac_from_str(obj["x"]), frac_from_str(obj.get("y", "0")))


def field_to_json(f: BaseField) -> dict:
    if f.is_rational:
        return {"kind": "rational"}
    return {"kind": "real_quadratic", "m": f.m}


def field_from_json(obj) -> BaseField:
    if isinstance(obj, str):
        return parse_field(obj)
    kind = obj.get("kind")
    if kind == "rational":
        return RATIONALS
    if kind == "real_quadratic":
        return BaseField("real_quadratic", int(obj["m"]))
    raise DomainError("unknown field kind %r" % kind)


def cm_field_to_json(K: CMField) -> dict:
    return {
        "field": field_to_json(K.base),
        "bK": ring_to_json(K.b),
        "cK": ring_to_json(K.c),
    }


def cm_field_from_json(obj) -> CMField:
    base = field_from_json(obj["field"])
    return build_cm_field(base, ring_from_json(base, obj["bK"]), ring_from_json(base, obj["cK"]))


def cm_elem_to_json(z: CMElem) -> dict:
    return {"x": ring_to_json(z.x), "y": ring_to_json(z.y)}


def cm_elem_from_json(K: CMField, obj) -> CMElem:
    return K.elem(ring_from_json(K.base, obj["x"]), ring_from_json(K.base, obj["y"]))


def form_to_json(Q: QuadForm) -> dict:
    return {"a": ring_to_json(Q.a), "b": ring_to_json(Q.b), "c": ring_to_json(Q.c)}


def form_from_json(base: BaseField, obj) -> QuadForm:
    return QuadForm(
        ring_from_json(base, obj["a"]),
        ring_from_json(base, obj["b"]),
        ring_from_json(base, obj["c"]),
    )


def ideal_to_json(I: FracIdeal) -> dict:
    one = I.field.base.one
    zero = I.field.base.zero
    return {
        "scale": ring_to_json(I.scale),
        "matrix": [
            [ring_to_json(one), ring_to_json(I.b)],
            [ring_to_json(zero), ring_to_json(I.d)],
        ],
    }


def ideal_from_json(K: CMField, obj) -> FracIdeal:
    from .ideals import reduce as reduce_ideal

    base = K.base
    scale = ring_from_json(base, obj["scale"])
    rows = obj["matrix"]
    gens = []
    for row in rows:
        w = ring_from_json(base, row[0])
        o = ring_from_json(base, row[1])
        gens.append(K.elem(scale * o, scale * w))
    return reduce_ideal(K, gens)


def galois_to_json(d: GaloisData) -> dict:
    return {
        "order": d.order,
        "table": [list(r) for r in d.table],
        "H": sorted(d.H),
        "T": list(d.T),
        "rho": d.rho,
    }


def galois_from_json(obj) -> GaloisData:
    return build_galois_data(
        int(obj["order"]), obj["table"], obj["H"], obj["T"], int(obj["rho"])
    )


def complex_to_json(z, prec: int) -> dict:
    dps = max(17, int(prec * 0.30103) + 2)
    with workprec(prec + 16):
        return {
            "re": mp.nstr(z.real, dps, strip_zeros=False),
            "im": mp.nstr(z.imag, dps, strip_zeros=False),
        }


def real_to_str(x, prec: int) -> str:
    dps = max(17, int(prec * 0.30103) + 2)
    with workprec(prec + 16):
        return mp.nstr(x, dps, strip_zeros=False)
