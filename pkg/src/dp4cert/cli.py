"""Command-line interface.

Subcommands:
  alpha         pick the family parameter alpha for a characteristic
  family        build one family member and print its invariants
  verify-paper  recompute the published reference data for p in {3, 7, 11}
  search-d      enumerate witnesses D up to a degree bound
  certify       evaluate the conditions for one D and emit the certificate
  check-cert    revalidate a certificate file from scratch
  table         print the per-place evaluation table for one D

Exit codes: 0 success / valid, 1 verification failure / invalid, 2 usage
errors and malformed input.  All output is deterministic for fixed flags.
"""

from __future__ import annotations

import argparse
import json
import sys

from .ff import is_prime, prime_field
from .polyring import Poly, poly_to_str, poly_from_str
from .funcfield import ratfunc_to_str, place_to_str, hilbert, Place, RatFunc
from .localfield import hensel_factor
from .quadform import pencil_to_json
from . import dp4
from .dp4 import FamilyError, CertificateFormatError


# Published reference data reproduced by verify-paper: the monic factors of
# xi for each characteristic, the fixed alpha, and the p = 3 example witness.
REFERENCE = {
    7: {
        "alpha": 3,
        "xi_factors": (
            "t^4+5*t^2+2*t+4",
            "t^10+4*t^9+t^8+3*t^7+5*t^6+2*t^5+5*t^3+t^2+4*t+6",
        ),
    },
    11: {
        "alpha": 8,
        "xi_factors": (
            "t^2+2*t+10",
            "t^6+4*t^5+6*t^4+9*t^3+2*t^2+6*t+7",
            "t^6+9*t^5+5*t^4+5*t^3+3*t^2+2*t+10",
        ),
    },
    3: {
        "alpha": None,
        "xi_factors": ("t^2+2*t+2", "t^4+2*t^3+t+1"),
        "witness": "t^3+2*t^2+t+1",
    },
}


def _err(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _odd_prime(p: int):
    if p == 2:
        raise FamilyError("characteristic 2 unsupported")
    if p < 3 or not is_prime(p):
        raise FamilyError(f"p = {p} is not an odd prime")


def _invariants_json(rep) -> dict:
    return {
        "f": str(rep.f),
        "f3": str(rep.f3),
        "c": ratfunc_to_str(rep.c),
        "disc_f": ratfunc_to_str(rep.disc_f),
        "disc_f3": ratfunc_to_str(rep.disc_f3),
        "xi": poly_to_str(rep.xi),
        "xi_factors": [poly_to_str(g) for g in rep.xi_factors],
        "eps2": ratfunc_to_str(rep.eps2),
        "eps3": str(rep.eps3),
        "bad_places": [place_to_str(pl) for pl in rep.bad_places],
        "eps_verified": rep.eps_verified,
    }


def _print_certificate(cert) -> None:
    print(f"p = {cert.p}"
          + ("" if cert.alpha is None else f", alpha = {cert.alpha}")
          + f", variant = {cert.variant}")
    print(f"D = {poly_to_str(cert.D)}")
    print(f"d = {ratfunc_to_str(cert.d)}")
    print("conditions:")
    for c in cert.conditions:
        mark = "ok  " if c.verdict else "FAIL"
        extra = "" if c.witness_place is None else f"  (at {c.witness_place})"
        print(f"  [{mark}] {c.id}: {c.statement}{extra}")
    if cert.invariant_table:
        print("invariant table:")
        width = max(len(e.place) for e in cert.invariant_table)
        for e in cert.invariant_table:
            print(f"  {e.place:<{width}}  {e.value:>3}  {e.justification}")
        print(f"  sum = {cert.table_sum()}")
    print("VALID" if cert.valid else "INVALID")


def cmd_alpha(args) -> int:
    _odd_prime(args.p)
    if args.p == 3:
        raise FamilyError("the p = 3 family takes no alpha")
    w = dp4.find_alpha(args.p)
    n, bound = dp4.count_alpha(args.p)
    if args.json:
        print(json.dumps({
            "p": args.p,
            "alpha": w.value,
            "fallback": w.fallback,
            "conditions": {
                "alpha-nonsquare": w.alpha_nonsquare,
                "alpha-plus-one-square": w.alpha_plus_one_square,
                "three-alpha-minus-one-nonzero": w.three_alpha_unit,
                "three-alpha-minus-one-nonsquare": w.three_alpha_nonsquare,
            },
            "admissible_count": n,
            "lower_bound": bound,
        }))
        return 0
    print(f"p = {args.p}")
    print(f"alpha = {w.value}" + ("  (fallback: fourth condition waived)" if w.fallback else ""))
    yn = lambda b: "yes" if b else "no"
    print(f"  alpha nonsquare:            {yn(w.alpha_nonsquare)}")
    print(f"  alpha+1 nonzero square:     {yn(w.alpha_plus_one_square)}")
    print(f"  3*alpha-1 nonzero:          {yn(w.three_alpha_unit)}")
    print(f"  3*alpha-1 nonsquare:        {yn(w.three_alpha_nonsquare)}")
    print(f"admissible count N = {n}, lower bound (p-5*sqrt(p)-12)/8 = {bound:.3f}")
    return 0


def cmd_family(args) -> int:
    _odd_prime(args.p)
    params = dp4.family_params(args.p, d=args.d, alpha=args.alpha)
    if params.d is None:
        raise FamilyError("--d is required")
    P = dp4.build_family(params)
    rep = dp4.invariants(params)
    if args.json:
        print(json.dumps({
            "p": params.p,
            "alpha": params.alpha,
            "d": ratfunc_to_str(params.d),
            "variant": params.variant,
            "pencil": pencil_to_json(P),
            "invariants": _invariants_json(rep),
        }))
        return 0
    print(f"p = {params.p}"
          + ("" if params.alpha is None else f", alpha = {params.alpha}")
          + f", d = {ratfunc_to_str(params.d)}, variant = {params.variant}")
    for name, M in (("M0", P.M0), ("Minf", P.Minf)):
        print(f"{name}:")
        for row in M.rows:
            print("  [" + ", ".join(ratfunc_to_str(x) for x in row) + "]")
    print(f"f    = {rep.f}")
    print(f"f3   = {rep.f3}")
    print(f"c    = {ratfunc_to_str(rep.c)}")
    print(f"disc(f)  = {ratfunc_to_str(rep.disc_f)}")
    print(f"disc(f3) = {ratfunc_to_str(rep.disc_f3)}")
    print(f"xi   = {poly_to_str(rep.xi)}")
    for g in rep.xi_factors:
        print(f"       factor: {poly_to_str(g)}  (degree {g.degree})")
    print(f"eps2 = {ratfunc_to_str(rep.eps2)}")
    print(f"eps3 = {rep.eps3}")
    print("bad places: " + ", ".join(place_to_str(pl) for pl in rep.bad_places))
    print(f"eps verified: {'yes' if rep.eps_verified else 'no'}")
    return 0


class _Checker:
    """Collects named pass/fail lines; remembers any failure."""

    def __init__(self):
        self.ok = True

    def check(self, label: str, got, want=True) -> None:
        good = got == want
        if good:
            print(f"ok: {label}")
        else:
            self.ok = False
            print(f"MISMATCH: {label}: expected {want!r}, got {got!r}")


def cmd_verify_paper(args) -> int:
    p = args.p
    ref = REFERENCE[p]
    F = prime_field(p)
    ck = _Checker()
    if p == 3:
        D = poly_from_str(ref["witness"], F)
        params = dp4.family_params(3, d=dp4.derive_d(dp4.family_params(3), D))
    else:
        w = dp4.find_alpha(p)
        ck.check(f"alpha for p = {p} is {ref['alpha']}", w.value, ref["alpha"])
        params = dp4.family_params(p, d=1, alpha=ref["alpha"])
    core = dp4.family_core(params)
    # closed-form checks for f, disc f, disc f3, eps2, eps3 run inside
    rep = dp4.invariants(params, verify_eps=True)
    ck.check("charpoly, discriminants and square classes match closed forms",
             rep.eps_verified)
    got = tuple(poly_to_str(g) for g in rep.xi_factors)
    ck.check("xi factors into the displayed monic irreducibles", got,
             ref["xi_factors"])
    for g in rep.xi_factors:
        pl = Place.finite(g)
        ck.check(f"eps3 is a local square at {poly_to_str(g)}",
                 core.eps3_square_at(pl))
    if p == 7:
        lfs = hensel_factor(core.f3, Place.finite(rep.xi_factors[0]))
        shape = tuple(sorted((lf.f * lf.e, lf.e) for lf in lfs))
        ck.check("f3 at the degree-4 factor splits as (deg 1, e=1) x (deg 2, e=2)",
                 shape, ((1, 1), (2, 2)))
    if p == 3:
        t = RatFunc(Poly.gen(F))
        w1 = poly_from_str(ref["xi_factors"][0], F)
        w2 = poly_from_str(ref["xi_factors"][1], F)
        ww = RatFunc(w1) * RatFunc(w2)
        d = params.d
        ck.check("xi equals 2*omega1*omega2 exactly",
                 RatFunc(rep.xi), 2 * ww)
        ck.check("disc(f) equals 2*d^16*t^20*(t+1)^4*omega1*omega2 exactly",
                 rep.disc_f, 2 * d ** 16 * t ** 20 * (t + 1) ** 4 * ww)
        ck.check("disc(f3) equals t^3*omega1*omega2 exactly",
                 rep.disc_f3, t ** 3 * ww)
        ck.check("eps2 class is d*t*(t+1) [the variant d*t*(t-1) is refuted "
                 "by the pencil]", rep.eps2, d * t * (t + 1))
        ck.check("eps3 is (t+1)*theta", str(rep.eps3), "(t+1)*theta")
        ck.check("the symbol (2, t) at t is -1",
                 hilbert(RatFunc.from_int(F, 2), t, core.place_t), -1)
        cert = dp4.check_conditions(dp4.family_params(3), D)
        ck.check(f"D = {ref['witness']} certifies VALID", cert.valid)
        ck.check("invariant table sums to 1/2", str(cert.table_sum()), "1/2")
    print("all checks passed" if ck.ok else "verification FAILED")
    return 0 if ck.ok else 1


def cmd_search_d(args) -> int:
    _odd_prime(args.p)
    params = dp4.family_params(args.p, alpha=args.alpha)
    found = 0
    for D, cert in dp4.search_D(params, args.max_degree, jobs=args.jobs):
        found += 1
        if args.json:
            print(json.dumps(cert.to_json()))
        else:
            print(f"D = {poly_to_str(D)}  VALID  (table sum {cert.table_sum()})")
    if not args.json:
        print(f"{found} witness(es) of degree <= {args.max_degree}")
    return 0


def cmd_certify(args) -> int:
    _odd_prime(args.p)
    params = dp4.family_params(args.p, alpha=args.alpha)
    cert = dp4.check_conditions(params, args.D)
    blob = json.dumps(cert.to_json(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(blob + "\n")
    if args.json:
        print(blob)
    else:
        _print_certificate(cert)
        if args.out:
            print(f"certificate written to {args.out}")
    return 0 if cert.valid else 1


def cmd_check_cert(args) -> int:
    try:
        with open(args.file) as fh:
            raw = fh.read()
    except OSError as e:
        return _err(f"cannot read {args.file}: {e}")
    cert = dp4.certificate_from_json(raw)
    try:
        params = dp4.family_params(cert.p, alpha=cert.alpha)
        fresh = dp4.check_conditions(params, cert.D)
    except FamilyError as e:
        raise CertificateFormatError(f"cannot recompute certificate: {e}") from None
    if fresh.to_json() != cert.to_json():
        print("certificate does not match recomputation", file=sys.stderr)
        _print_certificate(fresh)
        return 1
    _print_certificate(fresh)
    print("revalidated from scratch: verdicts identical")
    return 0 if fresh.valid else 1


def cmd_table(args) -> int:
    _odd_prime(args.p)
    params = dp4.family_params(args.p, alpha=args.alpha)
    cert = dp4.check_conditions(params, args.D)
    _print_certificate(cert)
    return 0 if cert.valid else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dp4cert",
        description="quartic del Pezzo families over F_p(t): invariants, "
                    "witness search and obstruction certificates")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("alpha", cmd_alpha, help="pick the family parameter alpha")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("family", cmd_family, help="build a family member and print invariants")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--d", required=True, help="twist, a rational function in t")
    sp.add_argument("--json", action="store_true")

    sp = add("verify-paper", cmd_verify_paper,
             help="recompute the published reference data")
    sp.add_argument("--p", type=int, required=True, choices=(3, 7, 11))

    sp = add("search-d", cmd_search_d, help="enumerate valid witnesses D")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true")

    sp = add("certify", cmd_certify, help="emit the certificate for one D")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--D", required=True, help="irreducible polynomial in t")
    sp.add_argument("--out", help="write certificate JSON to this file")
    sp.add_argument("--json", action="store_true")

    sp = add("check-cert", cmd_check_cert, help="revalidate a certificate file")
    sp.add_argument("file")

    sp = add("table", cmd_table, help="print the per-place evaluation table")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--D", required=True)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CertificateFormatError as e:
        return _err(str(e))
    except FamilyError as e:
        return _err(str(e))
    except ValueError as e:
        return _err(str(e))


if __name__ == "__main__":
    sys.exit(main())
