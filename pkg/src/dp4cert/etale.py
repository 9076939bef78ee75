"""Cubic etale algebras k[x]/(f) over a rational function field.

Elements are polynomials in a root theta, reduced mod the defining cubic.
Provides norms, an exact irreducibility test for cubics, local squareness
of an element in the algebra at a place, and a refutation-exact equality
test modulo squares.
"""

from __future__ import annotations

import itertools
from typing import Iterable, NamedTuple

from . import polyring
from .polyring import Poly
from .funcfield import (
    FuncField,
    Place,
    RatFunc,
    as_ratfunc,
    finite_support,
    is_global_square,
)
from . import localfield
from .ff import is_square_raw, ExtField


class EtaleError(Exception):
    pass


class SimpleExtension:
    """k[x]/(f) for a monic squarefree polynomial f over a function field."""

    __slots__ = ("poly", "field", "degree", "name")

    def __init__(self, poly: Poly, name: str = "theta"):
        if not isinstance(poly.field, FuncField):
            raise EtaleError("defining polynomial must live over a function field")
        if poly.degree < 1:
            raise EtaleError("defining polynomial must be nonconstant")
        if not poly.is_monic():
            raise EtaleError("defining polynomial must be monic")
        if poly.field.is_zero(polyring.discriminant(poly)):
            raise EtaleError("defining polynomial must be squarefree")
        self.poly = poly
        self.field = poly.field
        self.degree = poly.degree
        self.name = name

    def element(self, coords: Iterable) -> "AlgebraElem":
        K = self.field
        cs = [as_ratfunc(c, K) for c in coords]
        if len(cs) > self.degree:
            raise EtaleError("too many coordinates")
        cs += [K.ZERO] * (self.degree - len(cs))
        return AlgebraElem(self, tuple(cs))

    def from_poly(self, g: Poly) -> "AlgebraElem":
        return self.element((g % self.poly).coeffs)

    def zero(self) -> "AlgebraElem":
        return self.element([])

    def one(self) -> "AlgebraElem":
        return self.element([1])

    def gen(self) -> "AlgebraElem":
        return self.from_poly(Poly.gen(self.field))

    def __eq__(self, other):
        return isinstance(other, SimpleExtension) and self.poly == other.poly

    def __hash__(self):
        return hash(("SimpleExtension", self.poly))

    def __repr__(self):
        return f"SimpleExtension({self.poly!r})"


class AlgebraElem:
    """c0 + c1*theta + ... reduced mod the defining polynomial."""

    __slots__ = ("ext", "coords")

    def __init__(self, ext: SimpleExtension, coords: tuple):
        self.ext = ext
        self.coords = coords

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def as_poly(self) -> Poly:
        return Poly(self.ext.field, list(self.coords))

    def _coerce(self, other):
        if isinstance(other, AlgebraElem):
            if other.ext != self.ext:
                raise EtaleError("elements of different algebras")
            return other
        return self.ext.element([as_ratfunc(other, self.ext.field)])

    def __add__(self, other):
        other = self._coerce(other)
        return self.ext.element([a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return self.ext.element([-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        prod = (self.as_poly() * other.as_poly()) % self.ext.poly
        return self.ext.from_poly(prod)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraElem":
        g, s, _ = polyring.xgcd(self.as_poly(), self.ext.poly)
        if g.degree != 0:
            raise EtaleError("element is not invertible")
        return self.ext.from_poly(s.scale(self.ext.field.inv(g.coeffs[0])))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ext.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElem):
            return NotImplemented
        return self.ext == other.ext and self.coords == other.coords

    def __hash__(self):
        return hash((self.ext, self.coords))

    def __repr__(self):
        name = self.ext.name
        parts = []
        for i, c in enumerate(self.coords):
            if c.is_zero():
                continue
            cs = str(c)
            if any(op in cs for op in "+-/") and not (i == 0 and "/" not in cs):
                cs = f"({cs})"
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else f"{cs}*"
                parts.append(f"{head}{name}" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts) if parts else "0"


def cubic_is_irreducible(f: Poly) -> bool:
    """Exact irreducibility of a squarefree cubic over F_p(t).

    A cubic is reducible iff it has a root in the base field; candidate
    roots u/w of the cleared primitive model must satisfy u | constant
    and w | leading coefficient, up to scalars.
    """
    if f.degree != 3:
        raise EtaleError("expected a cubic")
    K = f.field
    base = K.base

    # clear denominators to A3 x^3 + ... + A0 with Ai in F_p[t]
    den = Poly.one(base)
    for c in f.coeffs:
        den = (den * c.den) // polyring.gcd(den, c.den)
    A = [(c * RatFunc(den)).num for c in f.coeffs]
    if A[0].is_zero():
        return False  # root 0

    units = [u for u in base.elements() if not base.is_zero(u)]
    for u in _monic_divisors(A[0]):
        for w in _monic_divisors(A[3]):
            if polyring.gcd(u, w).degree != 0:
                continue
            for lam in units:
                r = RatFunc(u.scale(lam), w)
                acc = K.ZERO
                for c in reversed(f.coeffs):
                    acc = acc * r + c
                if acc.is_zero():
                    return False
    return True


def _monic_divisors(g: Poly):
    fac = polyring.factor(g)
    divs = [Poly.one(g.field)]
    for q, m in fac:
        divs = [d * q**i for d in divs for i in range(m + 1)]
    return divs


def norm(z: AlgebraElem) -> RatFunc:
    """Field norm down to the base, as a resultant against the defining poly."""
    if z.is_zero():
        return z.ext.field.ZERO
    return polyring.resultant(z.ext.poly, z.as_poly())


def mult_matrix_row(z: AlgebraElem, j: int) -> list:
    """Coordinates of z * theta^j; rows of the multiplication-by-z matrix."""
    shifted = z.as_poly().shift_up(j) % z.ext.poly
    cs = list(shifted.coeffs)
    cs += [z.ext.field.ZERO] * (z.ext.degree - len(cs))
    return cs


def local_square_in_algebra(z: AlgebraElem, place: Place) -> bool:
    """Whether z is a square in k_nu tensor K, i.e. in every completion factor."""
    if z.is_zero():
        raise EtaleError("zero has no square class")
    fast = _good_reduction_square(z, place)
    if fast is not None:
        return fast
    # the square test may need more digits than the factorization default,
    # e.g. for elements with deep pole or zero at the place
    n = localfield.default_precision(z.ext.poly, place)
    while True:
        try:
            factors = localfield.hensel_factor(z.ext.poly, place, precision=n)
            return all(localfield.ext_is_square(lf, list(z.coords)) for lf in factors)
        except localfield.PrecisionError:
            if n >= localfield.PRECISION_CAP:
                raise
            n = min(2 * n, localfield.PRECISION_CAP)


def _good_reduction_square(z: AlgebraElem, place: Place):
    """Residue-only verdict when the place is unramified and z is a unit.

    Requires integral defining coefficients with squarefree reduction and
    integral coordinates with unit norm; returns None when these fail.
    """
    if place.is_infinite:
        return None
    f = z.ext.poly
    if any(place.valuation(c) < 0 for c in f.coeffs):
        return None
    if any(place.valuation(c) < 0 for c in z.coords if not c.is_zero()):
        return None
    nz = norm(z)
    if place.valuation(nz) != 0:
        return None
    R = place.residue_field()
    fbar = Poly(R, [_reduce_ratfunc(place, c) for c in f.coeffs])
    if fbar.degree != f.degree:
        return None
    if R.is_zero(polyring.discriminant(fbar)):
        return None
    zbar = Poly(R, [_reduce_ratfunc(place, c) for c in z.coords])
    for g, _ in polyring.factor(fbar):
        w = zbar % g
        if g.degree == 1:
            ok = is_square_raw(R, w.evaluate(R.ZERO))
        else:
            E = ExtField(R, tuple(g.coeffs), gen_name="b", check=False)
            raw = tuple(w.coeffs) + (R.ZERO,) * (g.degree - len(w.coeffs))
            ok = is_square_raw(E, raw)
        if not ok:
            return False
    return True


def _reduce_ratfunc(place: Place, c: RatFunc):
    R = place.residue_field()
    num = place.reduce_poly(c.num)
    den = place.reduce_poly(c.den)
    return R.div(num, den)


class SquareClassVerdict(NamedTuple):
    equal: bool
    witness: Place | None

    def __bool__(self):
        return self.equal


def default_sample_places(ext: SimpleExtension, extra=(), max_degree: int = 3) -> list:
    """Finite places of small degree avoiding bad reduction and poles."""
    K = ext.field
    base = K.base
    avoid = set()
    disc = polyring.discriminant(ext.poly)
    cands = [disc.num, disc.den]
    for c in ext.poly.coeffs:
        cands.append(c.den)
    for z in extra:
        for c in z.coords:
            cands.append(c.den)
    for g in cands:
        if g.is_zero():
            continue
        for q, _ in polyring.factor(g):
            avoid.add(q)
    out = []
    for d in range(1, max_degree + 1):
        for q in polyring.irreducibles(base, d):
            if q not in avoid:
                out.append(Place.finite(q))
    return out


def mod_squares_equal(z1: AlgebraElem, z2: AlgebraElem, places=None) -> SquareClassVerdict:
    """Refutation-exact test of z1 = z2 in K^x / squares.

    Returns not-equal with a witness place when the ratio has global
    nonsquare norm or fails a local squareness check; equal-likely
    otherwise.  A positive answer is probabilistic, a negative one exact.
    """
    if z1.is_zero() or z2.is_zero():
        raise EtaleError("zero has no square class")
    r = z1 / z2
    nr = norm(r)
    if not is_global_square(nr):
        return SquareClassVerdict(False, _odd_place(nr))
    if places is None:
        places = default_sample_places(z1.ext, extra=(r,))
    for nu in places:
        if not local_square_in_algebra(r, nu):
            return SquareClassVerdict(False, nu)
    return SquareClassVerdict(True, None)


def _odd_place(x: RatFunc) -> Place:
    for nu, m in finite_support(x):
        if m % 2 == 1:
            return nu
    return Place.infinity(x.field.p)


def factor_over_funcfield(f: Poly) -> list:
    """Monic irreducible factors of a squarefree polynomial over F_p(t).

    Lifts a factorization at a place of good reduction to enough digits to
    read off polynomial coefficients, then recombines subsets of the local
    factors and certifies each candidate by exact trial division.  Returns
    the monic factors of the monicized input, sorted.
    """
    K = f.field
    if not isinstance(K, FuncField):
        raise EtaleError("expected a polynomial over a function field")
    if f.degree < 1:
        raise EtaleError("nothing to factor")
    f = f.scale(K.inv(f.lc()))
    if K.is_zero(polyring.discriminant(f)):
        raise EtaleError("polynomial must be squarefree")

    # substitute x -> y/D to clear denominators while staying monic
    base = K.base
    D = Poly.one(base)
    for c in f.coeffs:
        D = (D * c.den) // polyring.gcd(D, c.den)
    n = f.degree
    g = Poly(K, [f.coeff(i) * RatFunc(D) ** (n - i) for i in range(n + 1)])

    coeff_deg = max((c.num.degree for c in g.coeffs if not c.is_zero()), default=0)
    bound = n * max(coeff_deg, 1) + 1
    disc = polyring.discriminant(g)
    place = _good_reduction_place(disc, base)
    digits = bound // place.degree + 2
    local = localfield.hensel_factor(g, place, precision=digits)
    reps = [lf.poly for lf in local]

    found = []
    remaining = list(range(len(reps)))
    shim = reps[0].field
    while remaining:
        hit = None
        for size in range(1, len(remaining) + 1):
            for combo in itertools.combinations(remaining, size):
                prod = Poly.one(shim)
                for i in combo:
                    prod = prod * reps[i]
                cand = Poly(K, [RatFunc(c) for c in prod.coeffs])
                if any(c.num.degree > bound for c in cand.coeffs if not c.is_zero()):
                    continue
                q, r = divmod(g, cand)
                if r.is_zero():
                    hit = (set(combo), cand)
                    break
            if hit:
                break
        if hit is None:
            raise EtaleError("factor recombination failed")
        combo, cand = hit
        found.append(cand)
        remaining = [i for i in remaining if i not in combo]

    out = []
    for h in found:
        m = h.degree
        back = Poly(K, [h.coeff(i) / RatFunc(D) ** (m - i) for i in range(m + 1)])
        out.append(back)
    out.sort(key=lambda q: q.sort_key())
    return out


def _good_reduction_place(disc: RatFunc, base) -> Place:
    for d in range(1, 4):
        for q in polyring.irreducibles(base, d):
            nu = Place.finite(q)
            if nu.valuation(disc) == 0:
                return nu
    raise EtaleError("no small place of good reduction")
