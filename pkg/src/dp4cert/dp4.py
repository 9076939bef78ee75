"""Quartic del Pezzo families over F_p(t) and their obstruction certificates.

Two families of pencils of 5 x 5 symmetric matrices are built here: one for
odd characteristic p > 3, parametrized by a unit alpha with prescribed
square classes, and a fixed one for p = 3.  Both take a twisting parameter
d in F_p(t)^x.  The base locus of such a pencil is a quartic del Pezzo
surface over k = F_p(t).

invariants() computes the attached data: the characteristic polynomial and
its forced splitting c * (x^2 + t) * f3, both discriminants, the
bad-reduction polynomial xi, the square classes eps2 and eps3 of the
singular members at the roots of the two factors, and the bad place set.

check_conditions() evaluates, for a prime D of k, the local conditions
under which the twisted surface carries a 2-torsion Brauer class whose
local evaluations sum to 1/2, so that the surface has no points in any
quadratic extension of k.  The result is a certificate: per-condition
verdicts, and, when all hold, the per-place evaluation table.  search_D()
enumerates witnesses D, and generic_design_check() validates the shape
both families instantiate.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ff import prime_field, is_prime, is_square_raw
from . import polyring
from .polyring import Poly, poly_to_str, poly_from_str, discriminant
from .funcfield import (
    RatFunc,
    func_field,
    Place,
    place_to_str,
    finite_support,
    is_local_square,
    is_global_square,
    hilbert,
    as_ratfunc,
    ratfunc_to_str,
    ratfunc_from_str,
)
from .etale import (
    SimpleExtension,
    AlgebraElem,
    cubic_is_irreducible,
    local_square_in_algebra,
    mod_squares_equal,
    default_sample_places,
    factor_over_funcfield,
)
from .quadform import QuadForm, Pencil, diagonalize, epsilon_at_factor


SCHEMA_VERSION = 1

VARIANT_GT3 = "p-gt-3"
VARIANT_EQ3 = "p-eq-3"

# Characteristics where no alpha satisfies all four square-class conditions;
# the family still works with these fixed choices, at the cost of checking
# the eps3 squareness along xi computationally instead of deducing it.
FALLBACK_ALPHA = {7: 3, 11: 8}


class FamilyError(ValueError):
    pass


class CertificateFormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Choice of alpha
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaWitness:
    """A candidate alpha together with its four square-class verdicts.

    The conditions: alpha is a nonsquare unit, alpha + 1 is a nonzero
    square, 3*alpha - 1 is nonzero, and 3*alpha - 1 is a nonsquare.  When
    fallback is set (p in {7, 11}) the last condition is waived.
    """

    p: int
    value: int
    alpha_nonsquare: bool
    alpha_plus_one_square: bool
    three_alpha_unit: bool
    three_alpha_nonsquare: bool
    fallback: bool

    @property
    def flags(self):
        return (
            self.alpha_nonsquare,
            self.alpha_plus_one_square,
            self.three_alpha_unit,
            self.three_alpha_nonsquare,
        )


def _alpha_flags(F, a: int):
    aa = F.from_int(a)
    if F.is_zero(aa):
        return (False, False, False, False)
    c1 = not is_square_raw(F, aa)
    s = F.add(aa, F.ONE)
    c2 = (not F.is_zero(s)) and is_square_raw(F, s)
    u = F.sub(F.mul(F.from_int(3), aa), F.ONE)
    c3 = not F.is_zero(u)
    c4 = c3 and not is_square_raw(F, u)
    return (c1, c2, c3, c4)


def find_alpha(p: int) -> AlphaWitness:
    """The smallest admissible alpha for the p > 3 family.

    Scans 1..p-1 for an alpha passing all four conditions.  For p in
    {7, 11} there is none; the fixed values 3 and 8 are returned with the
    fallback flag set.
    """
    if p <= 3 or not is_prime(p):
        raise FamilyError("the alpha-based family needs a prime p > 3")
    F = prime_field(p)
    for a in range(1, p):
        fl = _alpha_flags(F, a)
        if all(fl):
            return AlphaWitness(p, a, *fl, fallback=False)
    if p in FALLBACK_ALPHA:
        a = FALLBACK_ALPHA[p]
        return AlphaWitness(p, a, *_alpha_flags(F, a), fallback=True)
    raise FamilyError(f"no admissible alpha for p = {p}")


def count_alpha(p: int):
    """(exact count of admissible alpha, the lower bound (p - 5*sqrt(p) - 12)/8).

    Use weil_bound_holds for an exact comparison; the bound value itself is
    a float for display only.
    """
    if p <= 3 or not is_prime(p):
        raise FamilyError("the alpha-based family needs a prime p > 3")
    F = prime_field(p)
    n = sum(1 for a in range(1, p) if all(_alpha_flags(F, a)))
    return n, (p - 5 * math.sqrt(p) - 12) / 8


def weil_bound_holds(p: int, n: int) -> bool:
    """n >= (p - 5*sqrt(p) - 12)/8, decided in integer arithmetic."""
    lhs = 8 * n - p + 12  # want lhs >= -5*sqrt(p)
    return lhs >= 0 or lhs * lhs <= 25 * p


def weil_bound_positive(p: int) -> bool:
    """(p - 5*sqrt(p) - 12)/8 > 0, decided in integer arithmetic."""
    # p - 12 > 5*sqrt(p): both sides positive requires p > 12 first.
    return p > 12 and (p - 12) ** 2 > 25 * p


# ---------------------------------------------------------------------------
# Family parameters and the pencil
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyParams:
    p: int
    alpha: int | None
    d: RatFunc | None
    variant: str


def family_params(p: int, d=None, alpha=None) -> FamilyParams:
    """Validated family parameters.

    p = 3 takes no alpha.  For p > 3, alpha defaults to find_alpha(p) and
    an explicit alpha must pass the first three square-class conditions,
    plus the fourth unless p is in {7, 11}.  d may be an int, str, Poly or
    RatFunc; it is optional here but required to build the pencil.
    """
    if p < 3 or not is_prime(p):
        raise FamilyError("p must be an odd prime, at least 3")
    F = prime_field(p)
    if d is not None:
        if isinstance(d, str):
            d = ratfunc_from_str(d, F)
        else:
            d = as_ratfunc(d, F)
        if d.is_zero():
            raise FamilyError("d must be a nonzero rational function")
    if p == 3:
        if alpha is not None:
            raise FamilyError("the p = 3 family takes no alpha")
        return FamilyParams(3, None, d, VARIANT_EQ3)
    if alpha is None:
        alpha = find_alpha(p).value
    else:
        alpha = int(alpha) % p
        fl = _alpha_flags(F, alpha)
        need4 = p not in FALLBACK_ALPHA
        if not (fl[0] and fl[1] and fl[2] and (fl[3] or not need4)):
            raise FamilyError(f"alpha = {alpha} fails the square-class conditions for p = {p}")
    return FamilyParams(p, alpha, d, VARIANT_GT3)


def build_family(params: FamilyParams) -> Pencil:
    """The pencil of the two defining quadrics, as symmetric matrices."""
    if params.d is None:
        raise FamilyError("building the pencil needs d")
    p = params.p
    F = prime_field(p)
    K = func_field(p)
    t = RatFunc(Poly.gen(F))
    z = K.ZERO
    one = K.ONE
    d = params.d
    if params.variant == VARIANT_EQ3:
        h = K.inv(K.from_int(2))  # one half
        M0 = QuadForm(K, [
            [d, z, z, z, z],
            [z, -(d * t), z, z, z],
            [z, z, t + t * t, h * t, z],
            [z, z, h * t, z, -(h * t)],
            [z, z, z, -(h * t), z],
        ])
        Minf = QuadForm(K, [
            [z, h * d, z, z, z],
            [h * d, z, z, z, z],
            [z, z, -one, z, -h],
            [z, z, z, t, z],
            [z, z, -h, z, one],
        ])
        return Pencil(M0, Minf)
    A = K.from_int(params.alpha)
    M0 = QuadForm(K, [
        [d, z, z, z, z],
        [z, -(d * t), z, z, z],
        [z, z, t * t + t * t * t, A * t, z],
        [z, z, A * t, z, t * t],
        [z, z, z, t * t, z],
    ])
    Minf = QuadForm(K, [
        [z, -d, z, z, z],
        [-d, z, z, z, z],
        [z, z, A / t, z, A],
        [z, z, z, t * t, z],
        [z, z, A, z, (K.from_int(3) * A - one) * t / (A + one)],
    ])
    return Pencil(M0, Minf)


# ---------------------------------------------------------------------------
# d-independent family data (cached per (p, alpha))
# ---------------------------------------------------------------------------


class _FamilyCore:
    """Closed forms shared by every twist of one family.

    f3 is the cubic factor of the characteristic polynomial, xi the
    polynomial carrying its bad reduction (disc f3 = unit * t^3 * xi up to
    squares), eps3 the square class of the singular members at the roots
    of f3, inside the cubic algebra k[x]/(f3).
    """

    def __init__(self, p: int, alpha: int | None):
        F = prime_field(p)
        K = func_field(p)
        t = RatFunc(Poly.gen(F))
        one = K.ONE
        tp1 = t + one
        self.p = p
        self.alpha = alpha
        self.F = F
        self.K = K
        self.t = t
        if p == 3:
            two = K.from_int(2)
            self.f3 = Poly(K, [two * t ** 3 + two * t ** 2, t, t ** 2 + t, one])
            self.c_base = two * t  # c = d^2 * c_base
            # disc f3 = t^3 * w with w squarefree; xi := 2 * w
            disc3 = discriminant(self.f3)
            w = disc3 / t ** 3
            if not w.is_polynomial():
                raise FamilyError("cubic discriminant is not t^3 times a polynomial")
            self.disc_f3 = disc3
            self.xi = w.num.scale(F.from_int(2))
            self.delta_base = two * t ** 20 * tp1 ** 4 * w  # Delta = d^16 * delta_base
            self.eps2_base = t * tp1  # eps2 = d * eps2_base
            self.eps3_coeff = tp1  # eps3 = eps3_coeff * theta
        else:
            A = K.from_int(alpha)
            am1 = A - one
            ap1 = A + one
            th1 = K.from_int(3) * A - one
            den = A * am1 * am1
            self.f3 = Poly(K, [
                t ** 4 * tp1 * ap1 / den,
                t,
                -(t ** 3 * tp1 * th1 / den),
                one,
            ])
            self.c_base = A * am1 * am1 * t * t / ap1
            self.disc_f3 = discriminant(self.f3)
            xi_rf = (
                t ** 10 * ap1 * th1 ** 3 * tp1 ** 4
                - K.from_int(2) * A * A * t ** 5 * am1 ** 4
                  * (K.from_int(9) * A * A + K.from_int(12) * A + one) * tp1 ** 2
                - A ** 4 * am1 ** 8
            )
            if not xi_rf.is_polynomial():
                raise FamilyError("xi is not a polynomial")
            # disc f3 = 4 t^3 xi / (alpha^4 (alpha-1)^8), an identity of the family
            if self.disc_f3 != K.from_int(4) * t ** 3 * xi_rf / (A ** 4 * am1 ** 8):
                raise FamilyError("cubic discriminant deviates from its closed form")
            self.xi = xi_rf.num
            self.delta_base = (
                -(K.from_int(2) ** 12) * A ** 4 * t ** 36 * tp1 ** 4 * xi_rf / ap1 ** 8
            )
            self.eps2_base = A * t * tp1
            self.eps3_coeff = -(A * tp1)
        if self.xi.is_zero():
            raise FamilyError("degenerate family: xi vanishes")
        self.xi_factors = tuple(g for g, _ in polyring.factor(self.xi))
        self.xi_places = tuple(Place.finite(g) for g in self.xi_factors)
        self.ext3 = SimpleExtension(self.f3)
        self.eps3 = self.ext3.gen() * self.ext3.from_poly(Poly.const(K, self.eps3_coeff))
        self.place_t = Place.finite(Poly.gen(F))
        self.place_t1 = Place.finite(Poly.gen(F) + Poly.one(F))
        self.place_inf = Place.infinity(p)
        self._eps3_square = {}

    def eps3_square_at(self, place: Place) -> bool:
        got = self._eps3_square.get(place)
        if got is None:
            got = local_square_in_algebra(self.eps3, place)
            self._eps3_square[place] = got
        return got


@lru_cache(maxsize=None)
def _family_core(p: int, alpha) -> _FamilyCore:
    return _FamilyCore(p, alpha)


def family_core(params: FamilyParams) -> _FamilyCore:
    return _family_core(params.p, params.alpha)


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantsReport:
    """Computed data of one twisted family member.

    f = c * (x^2 + t) * f3 exactly; disc_f and disc_f3 are the two
    discriminants; xi the bad-reduction polynomial with its monic
    irreducible factors; eps2 and eps3 the square classes of the singular
    members over the quadratic and cubic factor algebras; bad_places the
    places where anything above degenerates, plus t, t + 1 and infinity.
    """

    f: Poly
    f3: Poly
    c: RatFunc
    disc_f: RatFunc
    disc_f3: RatFunc
    xi: Poly
    xi_factors: tuple
    eps2: RatFunc
    eps3: AlgebraElem
    bad_places: tuple
    eps_verified: bool


def invariants(params: FamilyParams, verify_eps: bool = True) -> InvariantsReport:
    """Invariants of the pencil, each checked against its closed form.

    The characteristic polynomial, its discriminant, and the cubic
    discriminant are compared exactly; a mismatch raises, since it would
    mean the pencil and the closed forms describe different surfaces.
    With verify_eps, the square classes computed from the singular members
    are compared with the closed forms modulo squares (sampling places of
    degree up to 2; disagreement raises, agreement is a sound verdict for
    every sampled place).
    """
    if params.d is None:
        raise FamilyError("invariants need d")
    core = family_core(params)
    K, t = core.K, core.t
    d = params.d
    P = build_family(params)
    c = d * d * core.c_base
    quad = Poly(K, [t, K.ZERO, K.ONE])
    if P.f != (quad * core.f3).scale(c):
        raise FamilyError("characteristic polynomial deviates from c * (x^2+t) * f3")
    disc_f = discriminant(P.f)
    if disc_f != d ** 16 * core.delta_base:
        raise FamilyError("pencil discriminant deviates from its closed form")
    eps2 = d * core.eps2_base
    eps_verified = False
    if verify_eps:
        e2 = epsilon_at_factor(P, quad)
        want2 = e2.ext.from_poly(Poly.const(K, eps2))
        v2 = mod_squares_equal(
            e2.value, want2, places=default_sample_places(e2.ext, max_degree=2))
        if not v2.equal:
            raise FamilyError(
                f"quadratic-factor square class deviates from d*eps2_base "
                f"(refuted at {place_to_str(v2.witness)})")
        fac3 = [core.f3] if cubic_is_irreducible(core.f3) else factor_over_funcfield(core.f3)
        for g in fac3:
            e3 = epsilon_at_factor(P, g)
            want3 = e3.ext.gen() * e3.ext.from_poly(Poly.const(K, core.eps3_coeff))
            v3 = mod_squares_equal(
                e3.value, want3, places=default_sample_places(e3.ext, max_degree=2))
            if not v3.equal:
                raise FamilyError(
                    f"cubic-factor square class deviates from eps3_coeff*theta "
                    f"(refuted at {place_to_str(v3.witness)})")
        eps_verified = True
    bad = {core.place_t, core.place_t1}
    bad.update(core.xi_places)
    bad.update(pl for pl, _ in finite_support(d))
    bad_places = tuple(sorted(bad, key=lambda pl: pl.sort_key())) + (core.place_inf,)
    return InvariantsReport(
        f=P.f,
        f3=core.f3,
        c=c,
        disc_f=disc_f,
        disc_f3=core.disc_f3,
        xi=core.xi,
        xi_factors=core.xi_factors,
        eps2=eps2,
        eps3=core.eps3,
        bad_places=bad_places,
        eps_verified=eps_verified,
    )


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionVerdict:
    id: str
    statement: str
    verdict: bool
    witness_place: str | None = None


@dataclass(frozen=True)
class TableEntry:
    place: str
    value: str  # "0" or "1/2"
    justification: str


@dataclass(frozen=True)
class Certificate:
    schema: int
    p: int
    alpha: int | None
    variant: str
    D: Poly
    d: RatFunc
    conditions: tuple
    invariant_table: tuple
    valid: bool

    def table_sum(self) -> Fraction:
        return sum((Fraction(e.value) for e in self.invariant_table), Fraction(0))

    def to_json(self) -> dict:
        conds = []
        for c in self.conditions:
            obj = {"id": c.id, "statement": c.statement, "verdict": c.verdict}
            if c.witness_place is not None:
                obj["witness_place"] = c.witness_place
            conds.append(obj)
        return {
            "schema": self.schema,
            "p": self.p,
            "alpha": self.alpha,
            "variant": self.variant,
            "D": poly_to_str(self.D),
            "d": ratfunc_to_str(self.d),
            "conditions": conds,
            "invariant_table": [
                {"place": e.place, "value": e.value, "justification": e.justification}
                for e in self.invariant_table
            ],
            "valid": self.valid,
        }


def _coerce_D(p: int, D) -> Poly:
    F = prime_field(p)
    if isinstance(D, str):
        D = poly_from_str(D, F)
    if not isinstance(D, Poly) or D.field != F:
        raise FamilyError("D must be a polynomial over F_p")
    return D


def derive_d(params: FamilyParams, D: Poly) -> RatFunc:
    """The twist attached to a witness D: D/(alpha*t*(t+1)) for p > 3, D*t
    for p = 3."""
    K = func_field(params.p)
    t = RatFunc(Poly.gen(prime_field(params.p)))
    if params.variant == VARIANT_EQ3:
        return RatFunc(D) * t
    A = K.from_int(params.alpha)
    return RatFunc(D) / (A * t * (t + K.ONE))


def check_conditions(params: FamilyParams, D) -> Certificate:
    """Certificate for one prime D: all condition verdicts, and the invariant
    table when every condition holds.

    Preconditions on D (violations raise FamilyError): irreducible, not
    constant, its monic associate is neither t nor t + 1 and does not
    divide xi.  For p > 3, D is expected with leading coefficient -1 (the
    sign is part of condition 3, not a precondition).  For p = 3, D must
    be monic.  Any d already present in params must agree with the derived
    twist.

    The invariant table is the transcript of the per-place evaluation of
    the obstruction class: value 1/2 exactly at t and 0 elsewhere, each row
    tagged with the condition or reduction argument that justifies it.
    """
    core = family_core(params)
    p, F, K, t = params.p, core.F, core.K, core.t
    D = _coerce_D(p, D)
    if D.degree < 1 or not polyring.is_irreducible(D):
        raise FamilyError("D must be a nonconstant irreducible polynomial")
    Dm = D.monic()
    if Dm == Poly.gen(F) or Dm == Poly.gen(F) + Poly.one(F):
        raise FamilyError("D must differ from t and t + 1")
    if (core.xi % Dm).is_zero():
        raise FamilyError("D must not divide xi")
    if params.variant == VARIANT_EQ3 and not D.is_monic():
        raise FamilyError("the p = 3 family takes a monic D")
    d = derive_d(params, D)
    if params.d is not None and params.d != d:
        raise FamilyError("params.d disagrees with the twist derived from D")
    place_D = Place.finite(Dm)
    Dr = RatFunc(D)
    Dstr = poly_to_str(D)
    conds = []
    if params.variant == VARIANT_EQ3:
        dt = d * t
        conds.append(ConditionVerdict(
            "d-square-at-inf",
            f"d = ({Dstr})*t is a square in the completion at infinity",
            is_local_square(d, core.place_inf)))
        conds.append(ConditionVerdict(
            "dt-square-at-t1",
            "d*t is a square in the completion at t+1",
            is_local_square(dt, core.place_t1)))
        conds.append(ConditionVerdict(
            "dt-square-at-t",
            "d*t is a square in the completion at t",
            is_local_square(dt, core.place_t)))
        ok4 = core.eps3_square_at(place_D)
        conds.append(ConditionVerdict(
            "eps3-square-at-D",
            f"eps3 is a local square in the cubic algebra at {Dstr}",
            ok4,
            None if ok4 else place_to_str(place_D)))
    else:
        ok1 = core.eps3_square_at(place_D)
        conds.append(ConditionVerdict(
            "eps3-square-at-D",
            f"eps3 is a local square in the cubic algebra at the prime dividing {Dstr}",
            ok1,
            None if ok1 else place_to_str(place_D)))
        A = K.from_int(params.alpha)
        conds.append(ConditionVerdict(
            "alphaD-square-at-t",
            f"alpha*D = {params.alpha}*({Dstr}) is a square in the completion at t",
            is_local_square(A * Dr, core.place_t)))
        conds.append(ConditionVerdict(
            "D-odd-negative-lead",
            f"{Dstr} has odd degree and leading coefficient -1",
            D.degree % 2 == 1 and D.lc() == F.neg(F.ONE)))
        if p in FALLBACK_ALPHA:
            ok4, wit = True, None
            for pl in core.xi_places:
                if not core.eps3_square_at(pl):
                    ok4, wit = False, place_to_str(pl)
                    break
            conds.append(ConditionVerdict(
                "eps3-square-at-xi",
                "eps3 is a local square in the cubic algebra at every prime dividing xi",
                ok4, wit))
            conds.append(ConditionVerdict(
                "D-square-at-t1",
                f"{Dstr} is a square in the completion at t+1",
                is_local_square(Dr, core.place_t1)))
        else:
            ok4, wit = True, None
            for pl in core.xi_places + (core.place_t1,):
                if not (is_local_square(Dr, pl) or core.eps3_square_at(pl)):
                    ok4, wit = False, place_to_str(pl)
                    break
            conds.append(ConditionVerdict(
                "xi-t1-covered",
                f"at every prime dividing xi*(t+1), {Dstr} is a local square or "
                "eps3 is a local square in the cubic algebra",
                ok4, wit))
    valid = all(c.verdict for c in conds)
    table = _invariant_table(core, params, place_D) if valid else ()
    return Certificate(
        schema=SCHEMA_VERSION,
        p=p,
        alpha=params.alpha,
        variant=params.variant,
        D=D,
        d=d,
        conditions=tuple(conds),
        invariant_table=table,
        valid=valid,
    )


def _invariant_table(core: _FamilyCore, params: FamilyParams, place_D: Place) -> tuple:
    """Per-place evaluations of the obstruction class for a valid witness.

    Every bad place gets a row; a final catch-all row covers the places of
    good reduction.  The p = 3 rows along xi rest on the eps3 squareness
    there, a fact of the family rather than of D, checked here once."""
    if params.variant == VARIANT_EQ3:
        for pl in core.xi_places:
            if not core.eps3_square_at(pl):
                raise FamilyError(
                    f"family fact failed: eps3 not square at {place_to_str(pl)}")
        tags = {
            core.place_t: ("1/2", "no-local-lines+cond:dt-square-at-t"),
            core.place_t1: ("0", "cond:dt-square-at-t1"),
            place_D: ("0", "cond:eps3-square-at-D"),
            core.place_inf: ("0", "cond:d-square-at-inf"),
        }
        for pl in core.xi_places:
            tags[pl] = ("0", "family:eps3-square-at-xi")
    else:
        fallback = params.p in FALLBACK_ALPHA
        cover = "cond:eps3-square-at-xi" if fallback else "cond:xi-t1-covered"
        tags = {
            core.place_t: ("1/2", "no-local-lines+cond:alphaD-square-at-t"),
            core.place_t1: ("0", "cond:D-square-at-t1" if fallback else "cond:xi-t1-covered"),
            place_D: ("0", "cond:eps3-square-at-D"),
            core.place_inf: ("0", "cond:D-odd-negative-lead"),
        }
        for pl in core.xi_places:
            tags[pl] = ("0", cover)
    finite = sorted((pl for pl in tags if not pl.is_infinite),
                    key=lambda pl: pl.sort_key())
    rows = [TableEntry(place_to_str(pl), *tags[pl]) for pl in finite]
    rows.append(TableEntry("inf", *tags[core.place_inf]))
    rows.append(TableEntry("other", "0", "good-reduction"))
    return tuple(rows)


def certificate_from_json(obj) -> Certificate:
    """Parse a certificate object; raises CertificateFormatError on any
    structural problem.  No conditions are re-evaluated here."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise CertificateFormatError(f"not JSON: {e}") from None
    if not isinstance(obj, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    try:
        if obj["schema"] != SCHEMA_VERSION:
            raise CertificateFormatError(f"unsupported schema {obj['schema']!r}")
        p = obj["p"]
        alpha = obj["alpha"]
        variant = obj["variant"]
        if variant not in (VARIANT_GT3, VARIANT_EQ3):
            raise CertificateFormatError(f"unknown variant {variant!r}")
        if not isinstance(p, int) or p < 3 or not is_prime(p):
            raise CertificateFormatError("p must be an odd prime")
        if variant == VARIANT_EQ3:
            if p != 3 or alpha is not None:
                raise CertificateFormatError("p-eq-3 variant needs p = 3 and no alpha")
        elif p == 3 or not isinstance(alpha, int):
            raise CertificateFormatError("p-gt-3 variant needs p > 3 and an integer alpha")
        F = prime_field(p)
        D = poly_from_str(obj["D"], F)
        d = ratfunc_from_str(obj["d"], F)
        conds = tuple(
            ConditionVerdict(c["id"], c["statement"], bool(c["verdict"]),
                             c.get("witness_place"))
            for c in obj["conditions"])
        table = tuple(
            TableEntry(e["place"], e["value"], e["justification"])
            for e in obj["invariant_table"])
        for e in table:
            if e.value not in ("0", "1/2"):
                raise CertificateFormatError(f"bad table value {e.value!r}")
        valid = bool(obj["valid"])
    except CertificateFormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateFormatError(f"malformed certificate: {e}") from None
    return Certificate(SCHEMA_VERSION, p, alpha, variant, D, d, conds, table, valid)


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------


def _monic_by_index(F, degree: int, idx: int) -> Poly:
    """The idx-th monic polynomial of the given degree, coefficients being
    the base-p digits of idx, constant digit first."""
    coeffs = []
    for _ in range(degree):
        coeffs.append(F.from_int(idx % F.char))
        idx //= F.char
    coeffs.append(F.ONE)
    return Poly(F, coeffs)


def _candidate_D(params: FamilyParams, core: _FamilyCore, q: Poly):
    """The witness candidate attached to a monic irreducible q, or None when
    q violates a precondition."""
    F = core.F
    if q == Poly.gen(F) or q == Poly.gen(F) + Poly.one(F):
        return None
    if (core.xi % q).is_zero():
        return None
    if params.variant == VARIANT_EQ3:
        return q
    return q.scale(F.neg(F.ONE))


def _scan_degree_range(p: int, alpha, degree: int, start: int, stop: int) -> list:
    """Indices in [start, stop) whose monic polynomial is an irreducible,
    precondition-passing witness with a fully valid certificate."""
    params = family_params(p, alpha=alpha)
    core = family_core(params)
    F = core.F
    out = []
    for idx in range(start, stop):
        q = _monic_by_index(F, degree, idx)
        if not polyring.is_irreducible(q):
            continue
        D = _candidate_D(params, core, q)
        if D is None:
            continue
        if check_conditions(params, D).valid:
            out.append(idx)
    return out


def search_D(params: FamilyParams, max_degree: int, jobs: int = 1):
    """Yield (D, certificate) for every valid witness of degree <= max_degree.

    Candidates are monic irreducibles scanned degree by degree in a fixed
    order (coefficients as base-p digits, constant digit fastest); for
    p > 3 only odd degrees occur and the candidate is the negated monic,
    honoring the leading-coefficient condition.  The order of results does
    not depend on jobs."""
    if max_degree < 1:
        return
    core = family_core(params)
    F = core.F
    p = params.p
    for degree in range(1, max_degree + 1):
        if params.variant == VARIANT_GT3 and degree % 2 == 0:
            continue
        total = p ** degree
        if jobs > 1:
            bounds = [(k * total) // jobs for k in range(jobs + 1)]
            tasks = [(p, params.alpha, degree, bounds[k], bounds[k + 1])
                     for k in range(jobs) if bounds[k] < bounds[k + 1]]
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                hits = sorted(
                    idx for chunk in ex.map(_scan_task, tasks) for idx in chunk)
            for idx in hits:
                D = _candidate_D(params, core, _monic_by_index(F, degree, idx))
                yield D, check_conditions(params, D)
        else:
            for idx in range(total):
                q = _monic_by_index(F, degree, idx)
                if not polyring.is_irreducible(q):
                    continue
                D = _candidate_D(params, core, q)
                if D is None:
                    continue
                cert = check_conditions(params, D)
                if cert.valid:
                    yield D, cert


def _scan_task(args):
    return _scan_degree_range(*args)


def distinct_check(D1, D2, p: int | None = None) -> bool:
    """Whether two witnesses give non-isomorphic surfaces: true when neither
    D1*D2 nor -t*D1*D2 is a global square.

    Both arguments must be irreducible and not associates of each other."""
    if isinstance(D1, str) or isinstance(D2, str):
        if p is None:
            raise FamilyError("string witnesses need p")
        D1, D2 = _coerce_D(p, D1), _coerce_D(p, D2)
    F = D1.field
    if not (polyring.is_irreducible(D1) and polyring.is_irreducible(D2)):
        raise FamilyError("distinct_check needs irreducible witnesses")
    if D1.monic() == D2.monic():
        raise FamilyError("distinct_check needs distinct primes")
    t = RatFunc(Poly.gen(F))
    r = RatFunc(D1) * RatFunc(D2)
    return (not is_global_square(r)) and (not is_global_square(-(t * r)))


# ---------------------------------------------------------------------------
# The generic shape behind both families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenericDesignReport:
    """Checks of the template the two families instantiate.

    charpoly_ok: the characteristic polynomial equals scale * (x^2+t) * f3
    with scale = -d^2 * b2 * (b1*b4 - b3^2) and the displayed cubic.
    eps2_scaled_ok: the quadratic-factor square class equals
    d * b2 * (b1*b4 - b3^2) * f3(theta).  eps2_plain_ok: the same without
    the b-scalar (true only when that scalar is a square in the quadratic
    algebra).  conic_checks: per sampled B, whether solvability of the
    diagonalized rank-3 block of B*M0 + Minf at t matches the symbol
    (-b1*b2, -b1*b4 + b3^2) at t; None marks a degenerate sample."""

    charpoly_ok: bool
    f3: Poly
    scale: RatFunc
    eps2_scaled_ok: bool
    eps2_plain_ok: bool
    conic_checks: tuple


def generic_design_check(p: int, a2, a3, a4, b1, b2, b3, b4, d,
                         B_samples=(0, 1, -1)) -> GenericDesignReport:
    """Validate the generic two-block design over F_p(t).

    M0 carries the twist block diag(d, -d*t) and the symmetric block
    [[a2, a3, 0], [a3, 0, a4], [0, a4, 0]]; Minf carries [[0, -d], [-d, 0]]
    and [[b1, 0, b3], [0, b2, 0], [b3, 0, b4]].  Degenerate parameters
    (vanishing b2*(b1*b4 - b3^2), inseparable characteristic polynomial,
    or x^2 + t dividing f3) raise."""
    if p < 3 or not is_prime(p):
        raise FamilyError("p must be an odd prime, at least 3")
    F = prime_field(p)
    K = func_field(p)
    t = RatFunc(Poly.gen(F))
    z, one = K.ZERO, K.ONE
    a2, a3, a4 = (as_ratfunc(x, F) for x in (a2, a3, a4))
    b1, b2, b3, b4 = (as_ratfunc(x, F) for x in (b1, b2, b3, b4))
    d = as_ratfunc(d, F)
    if d.is_zero():
        raise FamilyError("d must be nonzero")
    s = b2 * (b1 * b4 - b3 * b3)
    if s.is_zero():
        raise FamilyError("degenerate design: b2*(b1*b4 - b3^2) vanishes")
    M0 = QuadForm(K, [
        [d, z, z, z, z],
        [z, -(d * t), z, z, z],
        [z, z, a2, a3, z],
        [z, z, a3, z, a4],
        [z, z, z, a4, z],
    ])
    Minf = QuadForm(K, [
        [z, -d, z, z, z],
        [-d, z, z, z, z],
        [z, z, b1, z, b3],
        [z, z, z, b2, z],
        [z, z, b3, z, b4],
    ])
    P = Pencil(M0, Minf)
    bb = b1 * b4 - b3 * b3
    f3 = Poly(K, [
        -(a2 * a4 * a4) / s,
        (K.from_int(2) * a3 * a4 * b3 - a4 * a4 * b1 - a3 * a3 * b4) / s,
        a2 * b4 / bb,
        one,
    ])
    quad = Poly(K, [t, z, one])
    scale = -(d * d) * s
    charpoly_ok = P.f == (quad * f3).scale(scale)
    e2 = epsilon_at_factor(P, quad)
    f3_theta = e2.ext.from_poly(f3)  # evaluation of f3 at theta
    const = lambda x: e2.ext.from_poly(Poly.const(K, x))
    places2 = default_sample_places(e2.ext, max_degree=2)
    eps2_scaled_ok = bool(mod_squares_equal(
        e2.value, const(d * s) * f3_theta, places=places2))
    eps2_plain_ok = bool(mod_squares_equal(
        e2.value, const(d) * f3_theta, places=places2))
    place_t = Place.finite(Poly.gen(F))
    rhs = hilbert(-(b1 * b2), -(b1 * b4) + b3 * b3, place_t) == 1
    checks = []
    for B in B_samples:
        B = as_ratfunc(B, F)
        QB = M0.scale(B) + Minf
        block = QB.block([2, 3, 4])
        diag, _ = diagonalize(block)
        if any(x.is_zero() for x in diag):
            checks.append((ratfunc_to_str(B), None))
            continue
        lhs = hilbert(-(diag[0] * diag[2]), -(diag[1] * diag[2]), place_t) == 1
        checks.append((ratfunc_to_str(B), lhs == rhs))
    return GenericDesignReport(
        charpoly_ok=charpoly_ok,
        f3=f3,
        scale=scale,
        eps2_scaled_ok=eps2_scaled_ok,
        eps2_plain_ok=eps2_plain_ok,
        conic_checks=tuple(checks),
    )
