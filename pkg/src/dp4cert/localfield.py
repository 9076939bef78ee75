"""Completions k_nu of F_p(t) and Hensel factorization over them.

Working representation: for a finite place nu of degree d and a precision
of N digits, nu-integral elements are tracked in the quotient ring
F_p[t]/(nu^N), where the place polynomial itself is the uniformizer.  This
keeps all lifting steps inside exact polynomial arithmetic; Laurent-series
digits over the residue field are extracted from the quotient
representative on demand.  The infinite place is reduced to this case by
the substitution t -> 1/u, which turns it into the finite place (u).

hensel_factor splits a squarefree polynomial over k into its irreducible
factors over k_nu, labelled with ramification index e and residue degree f.
Repeated-root reductions (clusters) are resolved by Newton-polygon descent:
integer slopes are removed by rescaling the variable, a fractional minimal
slope in a mixed cubic cluster is isolated by passing to the reciprocal
polynomial and Newton-lifting its unit root.  Wild ramification (p | e) is
rejected, never approximated.

Precision discipline: results are verified by remultiplying factors and
comparing against the input modulo nu^(N//2); any mismatch or mid-flight
divisibility surprise raises PrecisionError, and the driver retries with
doubled precision up to a hard cap.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .ff import ExtField, is_square_raw, prime_field
from . import polyring
from .polyring import Poly
from .funcfield import (FuncFieldError, Place, RatFunc, as_ratfunc,
                        substitute_inverse)

PRECISION_CAP = 512


class LocalFieldError(ValueError):
    pass


class PrecisionError(LocalFieldError):
    """Working precision was insufficient; retry with more digits."""


class WildRamificationError(LocalFieldError):
    """Ramification index divisible by p: outside the tame scope."""


class UnsupportedFactorError(LocalFieldError):
    """Cluster configuration beyond the supported (degree <= 3) cases."""


# ---------------------------------------------------------------------------
# Quotient-ring context at one place and precision
# ---------------------------------------------------------------------------


class PlaceData:
    """Arithmetic context O_nu / pi^N as F_p[t]/(nu(t)^N).

    For the infinite place the context is built at the place (u) after
    t -> 1/u; callers must route elements through to_ring, which applies
    the substitution.
    """

    def __init__(self, place: Place, n_digits: int):
        self.place = place
        self.N = n_digits
        base = prime_field(place.p)
        self.F = base
        if place.is_infinite:
            self.work_place = Place.finite(Poly.gen(base))
            self.transform = True
        else:
            self.work_place = place
            self.transform = False
        self.pi = self.work_place.poly
        self.d = self.pi.degree
        self.modulus = self.pi ** n_digits
        self.R = self.work_place.residue_field()
        self._pi_pows = [Poly.one(base)]

    def pi_pow(self, j: int) -> Poly:
        while len(self._pi_pows) <= j:
            self._pi_pows.append((self._pi_pows[-1] * self.pi) % self.modulus)
        return self._pi_pows[j]

    # -- ring element plumbing (representatives are Poly over F_p, deg < d*N)

    def to_ring(self, x) -> Poly:
        """Image of a nu-integral rational function in the quotient ring."""
        x = as_ratfunc(x, self.F)
        if self.transform:
            x = substitute_inverse(x)
        return self.work_to_ring(x)

    def work_to_ring(self, x: RatFunc) -> Poly:
        """Like to_ring, but x is already in work coordinates."""
        num = x.num % self.modulus
        den = x.den % self.modulus
        g, s, _ = polyring.xgcd(den, self.modulus)
        if g.degree != 0:
            raise LocalFieldError("element is not integral at this place")
        return (num * s) % self.modulus

    def val(self, rep: Poly) -> int:
        """pi-adic valuation of a representative, capped at N for zero."""
        if rep.is_zero():
            return self.N
        v = 0
        while v < self.N:
            q, r = divmod(rep, self.pi)
            if not r.is_zero():
                return v
            rep = q
            v += 1
        return self.N

    def exact_divide(self, rep: Poly, j: int) -> Poly:
        if j == 0:
            return rep
        q, r = divmod(rep, self.pi_pow(j) if j < self.N else self.pi ** j)
        if not r.is_zero():
            raise PrecisionError("expected divisibility failed (valuation drift)")
        return q % self.modulus

    def inv(self, rep: Poly) -> Poly:
        g, s, _ = polyring.xgcd(rep % self.modulus, self.modulus)
        if g.degree != 0:
            raise PrecisionError("attempted to invert a non-unit")
        return s % self.modulus

    def residue(self, rep: Poly):
        """Image of a representative in the residue field, as a raw value."""
        r = rep % self.pi
        if self.d == 1:
            return r.constant()
        return tuple(r.coeff(i) for i in range(self.d))

    def lift_residue(self, raw) -> Poly:
        if self.d == 1:
            return Poly.const(self.F, raw)
        return Poly(self.F, raw)

    def digits(self, rep: Poly, count: int) -> tuple:
        out = []
        for _ in range(count):
            c = self.residue(rep)
            out.append(c)
            rep = (rep - self.lift_residue(c)) // self.pi
        return tuple(out)

    def congruent(self, a: Poly, b: Poly, digits: int) -> bool:
        m = self.pi ** digits
        return ((a - b) % m).is_zero()

    def key(self, rep: Poly):
        return rep.sort_key()

    def __eq__(self, other):
        return (isinstance(other, PlaceData)
                and other.place == self.place and other.N == self.N)

    def __hash__(self):
        return hash((self.place, self.N))


class _RingCoeffs:
    """Field-protocol shim so Poly can hold quotient-ring coefficients.

    Not a field: inv raises on non-units.  Poly division is only ever used
    against monic divisors here, which needs no general inversion.
    """

    def __init__(self, pdata: PlaceData):
        self.pdata = pdata
        self.char = pdata.F.p
        self.order = None
        self.ZERO = Poly.zero(pdata.F)
        self.ONE = Poly.one(pdata.F)

    def from_int(self, n: int) -> Poly:
        return Poly.const(self.pdata.F, self.pdata.F.from_int(n))

    def add(self, a, b):
        return (a + b) % self.pdata.modulus

    def sub(self, a, b):
        return (a - b) % self.pdata.modulus

    def neg(self, a):
        return (-a) % self.pdata.modulus

    def mul(self, a, b):
        return (a * b) % self.pdata.modulus

    def inv(self, a):
        return self.pdata.inv(a)

    def div(self, a, b):
        return self.mul(a, self.pdata.inv(b))

    def pow_(self, a, n):
        if n < 0:
            return self.pow_(self.pdata.inv(a), -n)
        return polyring.powmod(a, n, self.pdata.modulus)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def key(self, a):
        return a.sort_key()

    def repr_raw(self, a, parens: bool = False) -> str:
        s = polyring.poly_to_str(a)
        return f"({s})" if parens and "+" in s else s

    def __eq__(self, other):
        return isinstance(other, _RingCoeffs) and other.pdata == self.pdata

    def __hash__(self):
        return hash(("_RingCoeffs", self.pdata))


# ---------------------------------------------------------------------------
# Laurent series (public view of completions)
# ---------------------------------------------------------------------------


class LaurentSeries:
    """pi^offset * (unit tracked in the quotient ring), to `prec` digits.

    Digits live in the residue field of the place; the first digit is
    nonzero unless the value is zero to the stated precision.
    """

    __slots__ = ("pdata", "offset", "rep", "prec")

    def __init__(self, pdata: PlaceData, offset: int, rep: Poly, prec: int, normalize: bool = True):
        if normalize and not rep.is_zero():
            v = pdata.val(rep)
            if v >= prec:
                rep = Poly.zero(pdata.F)
                prec = max(prec, 0)
            elif v > 0:
                rep = pdata.exact_divide(rep, v)
                offset += v
                prec -= v
        if rep.is_zero():
            prec = max(prec, 0)
        self.pdata = pdata
        self.offset = offset
        self.rep = rep
        self.prec = prec

    @property
    def place(self) -> Place:
        return self.pdata.place

    def is_zero_to_precision(self) -> bool:
        return self.rep.is_zero()

    def valuation(self) -> int:
        if self.is_zero_to_precision():
            raise PrecisionError("no nonzero digit within precision")
        return self.offset

    def coeffs(self) -> tuple:
        return self.pdata.digits(self.rep, self.prec)

    def residue(self):
        """First digit (the residue of the unit part)."""
        if self.is_zero_to_precision():
            raise PrecisionError("no nonzero digit within precision")
        return self.pdata.residue(self.rep)

    def _aligned(self, other):
        if self.pdata.place != other.pdata.place:
            raise LocalFieldError("series at different places")
        if self.pdata.N != other.pdata.N:
            raise LocalFieldError("series at different working precisions")
        return other

    def __add__(self, other):
        other = self._aligned(other)
        pd = self.pdata
        if self.is_zero_to_precision():
            return other
        if other.is_zero_to_precision():
            return self
        o = min(self.offset, other.offset)
        abs_prec = min(self.offset + self.prec, other.offset + other.prec)
        a = (self.rep * pd.pi_pow(self.offset - o)) % pd.modulus
        b = (other.rep * pd.pi_pow(other.offset - o)) % pd.modulus
        return LaurentSeries(pd, o, (a + b) % pd.modulus, abs_prec - o)

    def __neg__(self):
        return LaurentSeries(self.pdata, self.offset, (-self.rep) % self.pdata.modulus,
                             self.prec, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._aligned(other)
        pd = self.pdata
        if self.is_zero_to_precision() or other.is_zero_to_precision():
            return LaurentSeries(pd, self.offset + other.offset, Poly.zero(pd.F),
                                 min(self.prec, other.prec))
        return LaurentSeries(pd, self.offset + other.offset,
                             (self.rep * other.rep) % pd.modulus,
                             min(self.prec, other.prec))

    def __pow__(self, n: int):
        if n < 0:
            raise LocalFieldError("negative series powers are not needed")
        pd = self.pdata
        result = LaurentSeries(pd, 0, Poly.one(pd.F), self.prec, normalize=False)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        if self.is_zero_to_precision():
            return f"O(pi^{self.offset + self.prec})"
        R = self.pdata.R
        parts = []
        for i, c in enumerate(self.coeffs()):
            if R.is_zero(c):
                continue
            k = self.offset + i
            cs = R.repr_raw(c, parens=True)
            if k == 0:
                parts.append(cs)
            elif k == 1:
                parts.append(f"{cs}*pi" if cs != "1" else "pi")
            else:
                parts.append(f"{cs}*pi^{k}" if cs != "1" else f"pi^{k}")
        tail = f"O(pi^{self.offset + self.prec})"
        return " + ".join(parts + [tail]) if parts else tail


def complete(x, place: Place, precision: int = 16) -> LaurentSeries:
    """Expand x in the completion at the place, to `precision` digits."""
    pd = PlaceData(place, precision)
    x = as_ratfunc(x, pd.F)
    if x.is_zero():
        return LaurentSeries(pd, 0, Poly.zero(pd.F), precision)
    v = place.valuation(x)
    unit = x / place.uniformizer() ** v
    return LaurentSeries(pd, v, pd.to_ring(unit), precision)


def is_square_local(w: LaurentSeries) -> bool:
    """w in k_nu^x2: even valuation and square leading digit."""
    v = w.valuation()
    if v % 2:
        return False
    return is_square_raw(w.pdata.R, w.residue())


# ---------------------------------------------------------------------------
# Hensel factorization
# ---------------------------------------------------------------------------


class LocalFactor:
    """One irreducible factor of f over k_nu.

    poly holds the factor in the internal integral model (ring-coefficient
    Poly in the original variable when xscale == 0; in the rescaled
    variable y = pi^xscale * x otherwise).  e is the ramification index,
    f the residue degree; e*f = poly.degree.
    """

    __slots__ = ("pdata", "poly", "e", "f", "xscale")

    def __init__(self, pdata: PlaceData, poly: Poly, e: int, f: int, xscale: int = 0):
        self.pdata = pdata
        self.poly = poly
        self.e = e
        self.f = f
        self.xscale = xscale

    @property
    def place(self) -> Place:
        return self.pdata.place

    @property
    def degree(self) -> int:
        return self.poly.degree

    def coeff_series(self) -> list:
        """Factor coefficients as Laurent series (constant term first)."""
        pd = self.pdata
        n = pd.N
        return [LaurentSeries(pd, 0, c % pd.modulus, n) for c in self.poly.coeffs]

    def __repr__(self):
        return f"LocalFactor(deg={self.degree}, e={self.e}, f={self.f})"


def default_precision(f: Poly, place: Place) -> int:
    """max(2 * v_nu(disc f) + 8, 16); disc computed over the global field."""
    disc = polyring.discriminant(f)
    if f.field.is_zero(disc):
        raise LocalFieldError("polynomial is not separable over k")
    v = place.valuation(disc)
    return max(2 * v + 8, 16)


def hensel_factor(f: Poly, place: Place, precision: int | None = None) -> list:
    """Irreducible factors of f over k_nu with (e, f) labels.

    f is a squarefree polynomial in an auxiliary variable with RatFunc
    coefficients.  Raises WildRamificationError for p | e configurations
    and UnsupportedFactorError for cluster shapes beyond degree 3.
    """
    if f.degree < 1:
        raise LocalFieldError("nothing to factor")
    K = f.field
    f = f.scale(K.inv(f.lc()))
    n = precision if precision is not None else default_precision(f, place)
    while True:
        try:
            return _hensel_factor_at(f, place, n)
        except PrecisionError:
            if precision is not None or n >= PRECISION_CAP:
                raise
            n = min(2 * n, PRECISION_CAP)


def _hensel_factor_at(f: Poly, place: Place, n_digits: int) -> list:
    pd = PlaceData(place, n_digits)
    K = f.field
    n = f.degree

    wp = pd.work_place

    def coeff_val(a):
        x = as_ratfunc(a, pd.F)
        if pd.transform:
            x = substitute_inverse(x)
        return wp.valuation(x)

    # integral model: substitute x = y / pi^s if any coefficient is deep
    s = 0
    for i in range(n):
        a = f.coeff(i)
        if not K.is_zero(a):
            v = coeff_val(a)
            if v < 0:
                s = max(s, math.ceil(-v / (n - i)))
    ring = _RingCoeffs(pd)
    unif = wp.uniformizer() if not pd.transform else RatFunc(Poly.gen(pd.F))
    coeffs = []
    for i in range(n + 1):
        a = as_ratfunc(f.coeff(i), pd.F)
        if pd.transform:
            a = substitute_inverse(a)
        if s:
            a = a * unif ** (s * (n - i))
        coeffs.append(pd.work_to_ring(a) if not a.is_zero() else Poly.zero(pd.F))
    g = Poly(ring, coeffs)
    if g.degree != n:
        raise PrecisionError("leading coefficient vanished in the ring")

    parts = _analyze(g, pd, ring, depth=0)

    # verify the product against g to half precision, then order factors
    prod = Poly.one(ring)
    for h, _, _ in parts:
        prod = prod * h
    half = max(n_digits // 2, 1)
    for i in range(n + 1):
        if not pd.congruent(prod.coeff(i), g.coeff(i), half):
            raise PrecisionError("factor product check failed")
    if sum(h.degree for h, _, _ in parts) != n:
        raise PrecisionError("factor degrees do not add up")
    out = [LocalFactor(pd, h, e, fdeg, xscale=s) for h, e, fdeg in parts]
    out.sort(key=lambda lf: (lf.degree, lf.e,
                             tuple(c.sort_key() for c in lf.poly.coeffs)))
    return out


def _reduce_poly(g: Poly, pd: PlaceData) -> Poly:
    return Poly(pd.R, [pd.residue(c) for c in g.coeffs])


def _lift_poly(gbar: Poly, pd: PlaceData, ring) -> Poly:
    return Poly(ring, [pd.lift_residue(c) for c in gbar.coeffs])


def _hensel_split(g: Poly, gbar_parts: list, pd: PlaceData, ring) -> list:
    """Lift the coprime factorization gbar = prod(parts) to the ring.

    Each part is a monic Poly over the residue field; parts are pairwise
    coprime.  Returns monic ring factors congruent to the parts mod pi
    whose product is g mod pi^N.
    """
    if len(gbar_parts) == 1:
        return [g]
    hbar = gbar_parts[0]
    rest_bar = Poly.one(pd.R)
    for q in gbar_parts[1:]:
        rest_bar = rest_bar * q
    # Bezout start: sb*rest + tb*hbar = 1 with deg sb < deg hbar
    one, sb, tb = polyring.xgcd(rest_bar, hbar)
    if not one.is_one():
        raise LocalFieldError("parts are not coprime")
    sb = sb % hbar
    tb = (Poly.one(pd.R) - sb * rest_bar) // hbar

    G = _lift_poly(rest_bar, pd, ring)
    H = _lift_poly(hbar, pd, ring)
    S = _lift_poly(sb, pd, ring)
    T = _lift_poly(tb, pd, ring)
    one_ring = Poly.one(ring)

    steps = max(1, math.ceil(math.log2(pd.N))) + 1
    for _ in range(steps):
        e = g - G * H
        q, r = divmod(S * e, H)
        G = G + T * e + q * G
        H = H + r
        b = S * G + T * H - one_ring
        c, dd = divmod(S * b, H)
        S = S - dd
        T = T - T * b - c * G
    e = g - G * H
    for co in e.coeffs:
        if not pd.congruent(co, Poly.zero(pd.F), pd.N):
            raise PrecisionError("Hensel pair lifting did not converge")
    return [H] + _hensel_split(G, gbar_parts[1:], pd, ring)


def _taylor_shift(g: Poly, r: Poly, ring) -> Poly:
    """g(x + r) for a ring element r."""
    xr = Poly(ring, [r, ring.ONE])
    out = Poly.zero(ring)
    for c in reversed(g.coeffs):
        out = out * xr + Poly.const(ring, c)
    return out


def _newton_segments(points: list) -> list:
    """Lower convex hull of (j, v_j); returns (slope: Fraction, length) list."""
    segs = []
    j, v = points[0]
    idx = 0
    while j < points[-1][0]:
        best = None
        best_slope = None
        for j2, v2 in points[idx + 1:]:
            slope = Fraction(v2 - v, j2 - j)
            if best_slope is None or slope < best_slope or (slope == best_slope and j2 > best):
                best_slope = slope
                best = j2
                best_v = v2
        segs.append((best_slope, best - j))
        while points[idx][0] != best:
            idx += 1
        j, v = best, best_v
    return segs


def _analyze(g: Poly, pd: PlaceData, ring, depth: int) -> list:
    """Factor a monic ring polynomial; returns (factor, e, f) triples."""
    if depth > 64:
        raise PrecisionError("cluster recursion exceeded its depth bound")
    n = g.degree
    if n == 1:
        return [(g, 1, 1)]
    gbar = _reduce_poly(g, pd)
    fac = polyring.factor(gbar)
    groups = [(q, m) for q, m in fac]

    if len(groups) > 1:
        parts_bar = [q ** m for q, m in groups]
        lifted = _hensel_split(g, parts_bar, pd, ring)
        out = []
        for piece in lifted:
            out.extend(_analyze(piece, pd, ring, depth + 1))
        return out

    q, m = groups[0]
    if m == 1:
        return [(g, 1, q.degree)]
    if q.degree > 1 or n > 3:
        raise UnsupportedFactorError(
            f"cluster of degree {n} with residue degree {q.degree} is out of scope")

    # single repeated linear factor: a degree-2 or -3 cluster
    p = pd.F.p
    c = n
    if c % p != 0:
        r = ring.neg(ring.div(g.coeff(c - 1), ring.from_int(c)))
    else:
        rbar = pd.R.neg(q.coeff(0))
        r = pd.lift_residue(rbar)
    Q = _taylor_shift(g, r, ring)

    def shift_back(parts):
        return [(_taylor_shift(h, ring.neg(r), ring), e, fd) for h, e, fd in parts]

    vals = [pd.val(Q.coeff(j)) for j in range(c)]
    if vals[0] >= pd.N:
        # center is a root to working precision: peel off the linear factor
        rest = Poly(ring, Q.coeffs[1:])
        z = Poly(ring, [Poly.zero(pd.F), Poly.one(pd.F)])
        return shift_back([(z, 1, 1)] + _analyze(rest, pd, ring, depth + 1))

    points = [(j, v) for j, v in enumerate(vals) if v < pd.N]
    points.append((c, 0))
    if points[0][0] != 0:
        raise PrecisionError("Newton polygon lost its left endpoint")
    segs = _newton_segments(points)

    def scale_down(lam: int) -> Poly:
        cs = [pd.exact_divide(Q.coeff(j), lam * (c - j)) for j in range(c)]
        cs.append(Q.coeff(c))
        return Poly(ring, cs)

    def scale_up(parts, lam: int):
        out = []
        for h, e, fd in parts:
            mdeg = h.degree
            cs = [ring.mul(h.coeff(j), pd.pi_pow(lam * (mdeg - j))) for j in range(mdeg + 1)]
            out.append((Poly(ring, cs), e, fd))
        return out

    if len(segs) == 1:
        lam = -segs[0][0]
        if lam <= 0:
            raise PrecisionError("cluster slope is not positive")
        if lam.denominator == 1:
            sub = _analyze(scale_down(int(lam)), pd, ring, depth + 1)
            return shift_back(scale_up(sub, int(lam)))
        e0 = lam.denominator
        if e0 % p == 0:
            raise WildRamificationError(
                f"totally ramified degree {e0} at residue characteristic {p}")
        if e0 != c:
            raise PrecisionError("fractional slope does not match the cluster size")
        return [(g, c, 1)]

    lam_min = -segs[-1][0]
    if lam_min.denominator == 1:
        sub = _analyze(scale_down(int(lam_min)), pd, ring, depth + 1)
        return shift_back(scale_up(sub, int(lam_min)))

    # mixed cubic cluster with one deep root and a ramified pair:
    # pass to the reciprocal polynomial, whose unit root is simple,
    # Newton-lift it, and split off the corresponding deep root.
    if c != 3 or lam_min.denominator != 2:
        raise UnsupportedFactorError("unexpected fractional slope configuration")
    if lam_min.denominator % p == 0:
        raise WildRamificationError("wild quadratic subcluster")
    b0, b1, b2 = Q.coeff(0), Q.coeff(1), Q.coeff(2)
    v0, v1 = vals[0], vals[1]
    if Fraction(v1, 2) != lam_min:
        raise PrecisionError("polygon vertex does not match the coefficient valuation")
    b = v0 - v1
    if b <= 0:
        raise PrecisionError("reciprocal shift is not positive")
    u0_inv = pd.inv(pd.exact_divide(b0, v0))
    c2 = ring.mul(pd.exact_divide((b1 * pd.pi_pow(b)) % pd.modulus, v0), u0_inv)
    c1 = ring.mul(pd.exact_divide((b2 * pd.pi_pow(2 * b)) % pd.modulus, v0), u0_inv)
    c0 = ring.mul(pd.exact_divide(pd.pi_pow(3 * b), v0), u0_inv)
    D = Poly(ring, [c0, c1, c2, ring.ONE])
    Dp = D.derivative()
    y = ring.neg(c2)
    if pd.R.is_zero(pd.residue(y)):
        raise PrecisionError("reciprocal unit root collapsed")
    steps = max(1, math.ceil(math.log2(pd.N))) + 2
    for _ in range(steps):
        y = ring.sub(y, ring.mul(D.evaluate(y), pd.inv(Dp.evaluate(y))))
    if pd.val(D.evaluate(y)) < pd.N:
        raise PrecisionError("Newton iteration for the unit root stalled")
    rho = ring.mul(pd.pi_pow(b), pd.inv(y))
    s1 = ring.add(b2, rho)
    u1 = ring.add(b1, ring.mul(s1, rho))
    lin = Poly(ring, [ring.neg(rho), ring.ONE])
    quad = Poly(ring, [u1, s1, ring.ONE])
    return shift_back([(lin, 1, 1)] + _analyze(quad, pd, ring, depth + 1))


# ---------------------------------------------------------------------------
# Squares in k_nu[x]/g
# ---------------------------------------------------------------------------


def _ring_square_class(rep: Poly, pd: PlaceData):
    """(valuation, residue-is-square) for a ring element, with guards."""
    v = pd.val(rep)
    if v >= max(pd.N // 2, 1):
        raise PrecisionError("element is zero to half precision")
    if v % 2:
        return v, False
    return v, is_square_raw(pd.R, pd.residue(pd.exact_divide(rep, v)))


def ext_is_square(factor: LocalFactor, coords) -> bool:
    """Decide whether the element with the given k-coordinates is a square
    in L = k_nu[x]/factor.

    coords are RatFunc coefficients of the element on the power basis of
    the original variable; they may have denominators at nu (cleared by an
    even uniformizer power, which does not change the square class).
    """
    pd = factor.pdata
    ring = _RingCoeffs(pd)
    n = factor.degree
    F = pd.F
    xs = [as_ratfunc(c, F) for c in coords]
    if all(x.is_zero() for x in xs):
        raise LocalFieldError("zero element has no square class")
    if pd.transform:
        xs = [substitute_inverse(x) for x in xs]
    wp = pd.work_place
    unif = RatFunc(pd.pi)
    # move into the integral model's variable, then clear denominators
    if factor.xscale:
        xs = [x / unif ** (factor.xscale * i) for i, x in enumerate(xs)]
    shift = 0
    for x in xs:
        if not x.is_zero():
            v = wp.valuation(x)
            if v < 0:
                shift = max(shift, -v)
    shift = (shift + 1) // 2 * 2
    if shift:
        xs = [x * unif ** shift for x in xs]
    reps = [pd.work_to_ring(x) if not x.is_zero() else Poly.zero(F) for x in xs]
    w = Poly(ring, reps) % factor.poly

    if n == 1:
        root = ring.neg(factor.poly.coeff(0))
        val = Poly.zero(F)
        for c in reversed(w.coeffs):
            val = ring.add(ring.mul(val, root), c)
        return _ring_square_class(val, pd)[1]
    if n % 2 == 1:
        # odd degree: the norm is a square-class isomorphism onto k_nu
        nw = _mult_matrix_det(w, factor.poly, ring)
        return _ring_square_class(nw, pd)[1]
    if factor.e == 1:
        return _unramified_square(w, factor, pd, ring)
    if factor.e == 2 and n == 2:
        return _ramified_quadratic_square(w, factor, pd, ring)
    raise UnsupportedFactorError(f"square test for (e={factor.e}, f={factor.f}) not supported")


def _unramified_square(w: Poly, factor: LocalFactor, pd: PlaceData, ring) -> bool:
    n = factor.degree
    vals = [pd.val(w.coeff(i)) for i in range(n)]
    vmin = min(vals)
    if vmin >= max(pd.N // 2, 1):
        raise PrecisionError("element is zero to half precision")
    if vmin % 2:
        return False
    gbar = _reduce_poly(factor.poly, pd)
    big = ExtField(pd.R, tuple(gbar.coeffs), gen_name="b", check=False)
    res = tuple(pd.residue(pd.exact_divide(w.coeff(i), vmin)) if vals[i] < pd.N
                else pd.R.ZERO for i in range(n))
    return is_square_raw(big, res)


def _ramified_quadratic_square(w: Poly, factor: LocalFactor, pd: PlaceData, ring) -> bool:
    # write w = A + B*eta with eta = x + b/2, eta^2 = disc/4 of odd valuation;
    # valuations of the two parts have distinct parities, so the square class
    # is read off the A-part whenever v_L(w) is even
    bco = factor.poly.coeff(1)
    cco = factor.poly.coeff(0)
    inv2 = ring.from_int(pow(2, pd.F.p - 2, pd.F.p))
    half_b = ring.mul(bco, inv2)
    delta = ring.sub(ring.mul(half_b, half_b), cco)
    vdelta = pd.val(delta)
    if vdelta % 2 == 0:
        raise LocalFieldError("factor is not ramified quadratic")
    A = ring.sub(w.coeff(0), ring.mul(w.coeff(1), half_b))
    B = w.coeff(1)
    vA = pd.val(A)
    vB = pd.val(B)
    vL = min(2 * vA, 2 * vB + vdelta)
    if vL >= pd.N:
        raise PrecisionError("element is zero to working precision")
    if vL % 2:
        return False
    # pi itself is u_delta times a square in L, so odd pi-powers of A
    # contribute the unit part of delta to the square class
    uA = pd.residue(pd.exact_divide(A, vA))
    if vA % 2:
        ud = pd.residue(pd.exact_divide(delta, vdelta))
        uA = pd.R.mul(uA, ud)
    return is_square_raw(pd.R, uA)


def _mult_matrix_det(w: Poly, g: Poly, ring) -> Poly:
    """det of multiplication-by-w on the power basis of k_nu[x]/g = N(w)."""
    n = g.degree
    cols = []
    basis = Poly(ring, [ring.ZERO, ring.ONE])
    cur = w % g
    for j in range(n):
        cols.append([cur.coeff(i) for i in range(n)])
        cur = (cur * basis) % g
    if n == 1:
        return cols[0][0]
    if n == 2:
        return ring.sub(ring.mul(cols[0][0], cols[1][1]), ring.mul(cols[0][1], cols[1][0]))
    if n == 3:
        a, b, c = cols[0]
        d, e, f = cols[1]
        gg, h, i = cols[2]
        t1 = ring.mul(a, ring.sub(ring.mul(e, i), ring.mul(f, h)))
        t2 = ring.mul(d, ring.sub(ring.mul(b, i), ring.mul(c, h)))
        t3 = ring.mul(gg, ring.sub(ring.mul(b, f), ring.mul(c, e)))
        return ring.add(ring.sub(t1, t2), t3)
    raise UnsupportedFactorError("norms only needed up to degree 3")
