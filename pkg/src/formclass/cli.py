"""Command-line surface: class groups, form algebra, reflex data, Siegel reports.

Subcommands: classgroup, compose, form-equiv, ideal, reflex, siegel,
setup-verify.  All reports are JSON with sorted keys and numbers as decimal
strings, so identical configurations produce byte-identical output.  Exit
codes: 0 success, 1 check failure, 2 incomplete enumeration, 3 precision
insufficiency, 64 invalid configuration, 65 membership failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile

from mpmath import mpf, workprec

from . import jsonio
from .errors import DomainError, IncompleteEnumeration, NotAnIdealError, UnsupportedGaloisData
from .number_ring import Mat2, is_totally_positive
from .cm_field import CMField
from .forms import QuadForm, equivalent, membership
from .ideals import FracIdeal, inv, mul, principal_generator_mod, ray_equal, reduce as reduce_ideal
from .class_groups import (
    FormClass,
    RayClass,
    compose,
    enumerate_ray_classes,
    form_class_of,
    ray_class_of,
    verify_isomorphism,
)
from .analytic import class_polynomial, coherence_holds, invariant_setup
from .reflex import reflex_of

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INCOMPLETE = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64
EXIT_MEMBERSHIP = 65


class ConfigError(Exception):
    pass


def _load_json_arg(text: str):
    if text.strip().startswith("{"):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)


def _cm_field(args) -> CMField:
    if not getattr(args, "cm_field", None):
        raise ConfigError("--cm-field is required")
    try:
        K = jsonio.cm_field_from_json(_load_json_arg(args.cm_field))
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError("bad CM-field descriptor: %s" % exc)
    if getattr(args, "field", None):
        from .number_ring import parse_field

        if parse_field(args.field) != K.base:
            raise ConfigError("--field disagrees with the CM-field descriptor")
    return K


def _form(K: CMField, text: str) -> QuadForm:
    return jsonio.form_from_json(K.base, _load_json_arg(text))


def _emit(args, payload: dict) -> None:
    payload = dict(payload)
    payload["schema_version"] = jsonio.SCHEMA_VERSION
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "json", None)
    if out:
        # atomic write
        d = os.path.dirname(os.path.abspath(out)) or "."
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".formclass-")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    else:
        sys.stdout.write(text)


def _level(args) -> int:
    N = getattr(args, "level", None)
    if N is None or N < 1:
        raise ConfigError("-N must be a positive integer")
    return N


def cmd_classgroup(args) -> int:
    K = _cm_field(args)
    N = _level(args)
    if args.verify:
        report = verify_isomorphism(K, N, args.norm_bound)
        group = report.pop("group")
        payload = {
            "field": jsonio.field_to_json(K.base),
            "cm_field": jsonio.cm_field_to_json(K),
            "level": N,
            "order": report["order"],
            "elements": [jsonio.ideal_to_json(e) for e in group.table.elements],
            "table": group.table.table,
            "identity": group.table.identity,
            "inverse": group.table.inverse,
            "bijection": [jsonio.form_to_json(q) for q in report["forms"]],
            "checks": report["checks"],
        }
        _emit(args, payload)
        return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED
    group = enumerate_ray_classes(K, N, args.norm_bound)
    forms = [form_class_of(group.ray_class(i)).rep for i in range(group.order)]
    payload = {
        "field": jsonio.field_to_json(K.base),
        "cm_field": jsonio.cm_field_to_json(K),
        "level": N,
        "order": group.order,
        "elements": [jsonio.ideal_to_json(e) for e in group.table.elements],
        "table": group.table.table,
        "identity": group.table.identity,
        "inverse": group.table.inverse,
        "bijection": [jsonio.form_to_json(q) for q in forms],
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_compose(args) -> int:
    K = _cm_field(args)
    N = _level(args)
    try:
        q1 = _form(K, args.q1)
        q2 = _form(K, args.q2)
    except DomainError as exc:
        sys.stderr.write("invalid form: %s\n" % exc)
        return EXIT_MEMBERSHIP
    if not (membership(q1, N, K) and membership(q2, N, K)):
        sys.stderr.write("form outside the level-%d family\n" % N)
        return EXIT_MEMBERSHIP
    out = compose(FormClass(K, N, q1), FormClass(K, N, q2))
    _emit(args, {"level": N, "form": jsonio.form_to_json(out.rep)})
    return EXIT_OK


def cmd_form_equiv(args) -> int:
    K = _cm_field(args)
    N = _level(args)
    try:
        q1 = _form(K, args.q1)
        q2 = _form(K, args.q2)
    except DomainError as exc:
        sys.stderr.write("invalid form: %s\n" % exc)
        return EXIT_MEMBERSHIP
    try:
        eq = equivalent(q1, q2, N, K)
    except DomainError as exc:
        sys.stderr.write("%s\n" % exc)
        return EXIT_MEMBERSHIP
    _emit(args, {"level": N, "equivalent": eq})
    return EXIT_OK


def cmd_ideal(args) -> int:
    K = _cm_field(args)
    N = _level(args) if args.op == "class-test" else getattr(args, "level", 1) or 1
    A = jsonio.ideal_from_json(K, _load_json_arg(args.a))
    if args.op == "reduce":
        _emit(args, {"ideal": jsonio.ideal_to_json(A)})
        return EXIT_OK
    if args.op == "inv":
        _emit(args, {"ideal": jsonio.ideal_to_json(inv(A))})
        return EXIT_OK
    if not args.b:
        raise ConfigError("--b is required for op %s" % args.op)
    B = jsonio.ideal_from_json(K, _load_json_arg(args.b))
    if args.op == "mul":
        _emit(args, {"ideal": jsonio.ideal_to_json(mul(A, B))})
        return EXIT_OK
    same = ray_equal(A, B, N)
    _emit(args, {"level": N, "same_class": same})
    return EXIT_OK


def cmd_reflex(args) -> int:
    if not args.galois:
        raise ConfigError("--galois is required")
    data = jsonio.galois_from_json(_load_json_arg(args.galois))
    r = reflex_of(data)
    payload = {
        "T_star": sorted(r.T_star),
        "H_star": sorted(r.H_star),
        "K_star_degree": r.K_star_degree,
        "psi": list(r.psi),
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_siegel(args) -> int:
    K = _cm_field(args)
    N = _level(args)
    if not K.base.is_rational:
        raise ConfigError("the Siegel report needs an imaginary quadratic field")
    if N < 2:
        raise ConfigError("the Siegel report needs a level of at least 2")
    prec = args.prec
    rep = class_polynomial(K, N, prec, args.norm_bound)
    group = rep["group"]
    payload = {
        "cm_field": jsonio.cm_field_to_json(K),
        "level": N,
        "precision_bits": prec,
        "classes": [jsonio.ideal_to_json(e) for e in group.table.elements],
        "values": [
            {
                "value": jsonio.complex_to_json(v, prec),
                "error_bound": jsonio.real_to_str(e, 64),
            }
            for v, e in rep["values"]
        ],
        "polynomial": [jsonio.complex_to_json(c, prec) for c in rep["coefficients"]],
        "nearest_integers": [list(p) for p in rep["nearest"]],
        "residuals": [jsonio.real_to_str(r, 64) for r in rep["residuals"]],
    }
    _emit(args, payload)
    with workprec(prec + 64):
        tol = mpf(2) ** (32 - prec)
        if any(r > tol for r in rep["residuals"]):
            sys.stderr.write("residuals exceed 2^(32-prec): raise --prec\n")
            return EXIT_PRECISION
    return EXIT_OK


def cmd_setup_verify(args) -> int:
    K = _cm_field(args)
    N = _level(args)
    rng = random.Random(args.seed)
    group = enumerate_ray_classes(K, N, args.norm_bound)
    results = []
    ok = True
    for i in range(group.order):
        C = group.ray_class(i)
        s = invariant_setup(C, prec=96)
        checks = {
            "det_totally_positive": is_totally_positive(s.d),
            "sl2_part_unimodular": s.A1.det() == K.base.one,
            "congruence": Mat2(
                s.A1.a, s.A1.b, s.d * s.A1.c, s.d * s.A1.d
            ).congruent_mod_int(s.A, N),
        }
        # a second setup of the same class, shifted by a congruent principal
        w = K.elem(rng.randint(0, 2), rng.randint(0, 2))
        mu = K.one + N * w
        c2 = reduce_ideal(K, [mu * g for g in s.c_ideal.basis()])
        s2 = invariant_setup(RayClass(K, N, c2), prec=96)
        checks["choice_coherence"] = coherence_holds(s, s2)
        ok = ok and all(checks.values())
        results.append(checks)
    _emit(args, {"level": N, "order": group.order, "setups": results, "ok": ok})
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="base field: Q, Q(sqrt2), Q(sqrt5), Q(sqrt13)")
    common.add_argument("--cm-field", help="CM-field descriptor (JSON file or inline)")
    common.add_argument("-N", dest="level", type=int, help="level (positive integer)")
    common.add_argument("--norm-bound", type=int, default=None)
    common.add_argument("--prec", type=int, default=512)
    common.add_argument("--json", help="write the report to this file")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="formclass", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classgroup", parents=[common])
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_classgroup)

    sp = sub.add_parser("compose", parents=[common])
    sp.add_argument("--q1", required=True)
    sp.add_argument("--q2", required=True)
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("form-equiv", parents=[common])
    sp.add_argument("--q1", required=True)
    sp.add_argument("--q2", required=True)
    sp.set_defaults(func=cmd_form_equiv)

    sp = sub.add_parser("ideal", parents=[common])
    sp.add_argument("--op", choices=["mul", "inv", "reduce", "class-test"], required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b")
    sp.set_defaults(func=cmd_ideal)

    sp = sub.add_parser("reflex", parents=[common])
    sp.add_argument("--galois", help="Galois data (JSON file or inline)")
    sp.set_defaults(func=cmd_reflex)

    sp = sub.add_parser("siegel", parents=[common])
    sp.set_defaults(func=cmd_siegel)

    sp = sub.add_parser("setup-verify", parents=[common])
    sp.set_defaults(func=cmd_setup_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write("configuration error: %s\n" % exc)
        return EXIT_USAGE
    except IncompleteEnumeration as exc:
        sys.stderr.write("incomplete enumeration: %s\n" % exc)
        return EXIT_INCOMPLETE
    except (NotAnIdealError, UnsupportedGaloisData, DomainError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
