"""The rational function field k = F_p(t) and its places.

A place is a monic irreducible polynomial in t or the degree valuation at
infinity (uniformizer 1/t).  This module provides valuations, residue
fields, Legendre symbols at places, the polynomial quadratic reciprocity
right-hand side, tame Hilbert symbols, and global/local square tests.

RatFunc is the element type: a reduced fraction of Poly with monic
denominator.  FuncField wraps RatFunc values in the same field protocol
that ff exposes, so Poly can be instantiated with rational-function
coefficients (needed for characteristic polynomials of pencils).
"""

from __future__ import annotations

import functools
import math

from .ff import PrimeField, ExtField, prime_field, chi, is_square_raw
from . import polyring
from .polyring import Poly, poly_to_str, poly_from_str


INF_VAL = math.inf  # valuation of the zero element


class FuncFieldError(ValueError):
    pass


class RatFunc:
    """Reduced fraction num/den of polynomials over one F_p, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.field)
        if num.field != den.field:
            raise FuncFieldError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.one(num.field)
        else:
            g = polyring.gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
            if not den.is_monic():
                F = num.field
                inv = F.inv(den.lc())
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_int(cls, field, n: int) -> "RatFunc":
        return cls(Poly.const(field, field.from_int(n)))

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc.from_int(self.field, 1) / self) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (Poly, int)):
            other = self._coerce(other)
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def key(self):
        return (self.num.sort_key(), self.den.sort_key())

    def __str__(self):
        return ratfunc_to_str(self)

    def __repr__(self):
        return ratfunc_to_str(self)


def as_ratfunc(x, field) -> RatFunc:
    """Coerce int, Poly, or RatFunc into a RatFunc; field may be F_p or F_p(t)."""
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    if isinstance(x, int):
        return RatFunc.from_int(getattr(field, "base", field), x)
    raise FuncFieldError(f"cannot interpret {x!r} as a rational function")


def ratfunc_to_str(x: RatFunc, var: str = "t") -> str:
    num = poly_to_str(x.num, var)
    if x.den.is_one():
        return num
    den = poly_to_str(x.den, var)
    if "+" in num or num.startswith("-"):
        num = f"({num})"
    if "+" in den or "*" in den or "^" in den:
        den = f"({den})"
    return f"{num}/{den}"


def ratfunc_from_str(s: str, field, var: str = "t") -> RatFunc:
    """Parse `num/den`; each side may be wrapped in parentheses."""
    s = s.strip()

    def strip_parens(part: str) -> str:
        part = part.strip()
        if part.startswith("(") and part.endswith(")"):
            depth = 0
            for i, ch in enumerate(part):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                    if depth == 0 and i != len(part) - 1:
                        return part
            return part[1:-1]
        return part

    depth = 0
    split_at = None
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split_at is not None:
                raise FuncFieldError(f"multiple top-level '/' in {s!r}")
            split_at = i
    if split_at is None:
        return RatFunc(poly_from_str(strip_parens(s), field, var))
    num = poly_from_str(strip_parens(s[:split_at]), field, var)
    den = poly_from_str(strip_parens(s[split_at + 1:]), field, var)
    return RatFunc(num, den)


class FuncField:
    """Field-protocol wrapper so Poly can take RatFunc coefficients."""

    def __init__(self, p: int):
        base = prime_field(p)
        self.p = p
        self.char = p
        self.order = None
        self.base = base
        self.poly_field = base
        self.ZERO = RatFunc(Poly.zero(base))
        self.ONE = RatFunc(Poly.one(base))

    def from_int(self, n: int) -> RatFunc:
        return RatFunc.from_int(self.base, n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def pow_(self, a, n):
        return a ** n

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def key(self, a):
        return a.key()

    def repr_raw(self, a, parens: bool = False) -> str:
        s = ratfunc_to_str(a)
        if parens and ("+" in s or "/" in s or "*" in s):
            return f"({s})"
        return s

    def random(self, rng) -> RatFunc:
        num = polyring.random_poly(self.base, rng.randrange(0, 4), rng)
        den = polyring.random_poly(self.base, rng.randrange(0, 3), rng, monic=True)
        return RatFunc(num, den)

    def __eq__(self, other):
        return isinstance(other, FuncField) and other.p == self.p

    def __hash__(self):
        return hash(("FuncField", self.p))

    def __repr__(self):
        return f"F_{self.p}(t)"


@functools.lru_cache(maxsize=None)
def func_field(p: int) -> FuncField:
    return FuncField(p)


# ---------------------------------------------------------------------------
# Places
# ---------------------------------------------------------------------------


class Place:
    """A place of F_p(t): a monic irreducible polynomial or infinity."""

    __slots__ = ("p", "poly", "_rf")

    def __init__(self, p: int, poly: Poly | None, check: bool = True):
        self.p = p
        self.poly = poly
        self._rf = None
        if poly is not None and check:
            if poly.field != prime_field(p):
                raise FuncFieldError("place polynomial over the wrong field")
            if not poly.is_monic() or poly.degree < 1:
                raise FuncFieldError("a finite place needs a monic polynomial of degree >= 1")
            if not polyring.is_irreducible(poly):
                raise FuncFieldError(f"{poly_to_str(poly)} is reducible: not a place")

    @classmethod
    def infinity(cls, p: int) -> "Place":
        return cls(p, None)

    @classmethod
    def finite(cls, poly: Poly) -> "Place":
        return cls(poly.field.p, poly)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def residue_field(self):
        """F_p for infinity and degree-1 places; otherwise F_p[t]/(place),
        with generator `a` the image of t."""
        if self._rf is None:
            base = prime_field(self.p)
            if self.poly is None or self.poly.degree == 1:
                self._rf = base
            else:
                self._rf = ExtField(base, self.poly.coeffs, gen_name="a", check=False)
        return self._rf

    def _root(self):
        # degree-1 place t + c0 has residue map t -> -c0
        base = prime_field(self.p)
        return base.neg(self.poly.coeff(0))

    def reduce_poly(self, f: Poly):
        """Image of a polynomial in the residue field, as a raw value."""
        if self.is_infinite:
            raise FuncFieldError("polynomial reduction is for finite places")
        R = self.residue_field()
        if self.poly.degree == 1:
            return f.evaluate(self._root())
        r = f % self.poly
        return tuple(r.coeff(i) for i in range(self.poly.degree))

    def valuation(self, x) -> int | float:
        x = as_ratfunc(x, prime_field(self.p))
        if x.is_zero():
            return INF_VAL
        if self.is_infinite:
            return x.den.degree - x.num.degree
        return self._poly_val(x.num) - self._poly_val(x.den)

    def _poly_val(self, f: Poly) -> int:
        v = 0
        while True:
            q, r = divmod(f, self.poly)
            if not r.is_zero():
                return v
            v += 1
            f = q

    def unit_residue(self, x):
        """Residue of x / pi^v(x) in the residue field, as a raw value."""
        x = as_ratfunc(x, prime_field(self.p))
        if x.is_zero():
            raise FuncFieldError("zero has no unit residue")
        base = prime_field(self.p)
        if self.is_infinite:
            return base.div(x.num.lc(), x.den.lc())
        num, den = x.num, x.den
        while (num % self.poly).is_zero():
            num = num // self.poly
        while (den % self.poly).is_zero():
            den = den // self.poly
        R = self.residue_field()
        return R.div(self.reduce_poly(num), self.reduce_poly(den))

    def residue(self, x):
        """Residue of a nu-unit; errors when v(x) != 0."""
        if self.valuation(x) != 0:
            raise FuncFieldError("residue requires valuation 0")
        return self.unit_residue(x)

    def uniformizer(self) -> RatFunc:
        base = prime_field(self.p)
        t = Poly.gen(base)
        if self.is_infinite:
            return RatFunc(Poly.one(base), t)
        return RatFunc(self.poly)

    def sort_key(self):
        if self.is_infinite:
            return (1, 0, ())
        return (0,) + self.poly.sort_key()

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.p == other.p and self.poly == other.poly

    def __hash__(self):
        return hash((self.p, self.poly))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return place_to_str(self)

    def __repr__(self):
        return f"Place({self.p}, {place_to_str(self)})"


def place_to_str(place: Place) -> str:
    return "inf" if place.is_infinite else poly_to_str(place.poly)


def place_from_str(s: str, p: int) -> Place:
    s = s.strip()
    if s in ("inf", "infinity", "oo"):
        return Place.infinity(p)
    return Place.finite(poly_from_str(s, prime_field(p)))


def finite_support(x, p: int | None = None) -> list:
    """Sorted (Place, exponent) pairs with nonzero valuation, finite only."""
    if isinstance(x, (Poly, int)):
        x = as_ratfunc(x, prime_field(p) if p is not None else x.field)
    if x.is_zero():
        raise FuncFieldError("zero has no finite support")
    out = {}
    for f, m in polyring.factor(x.num):
        out[Place.finite(f)] = m
    for f, m in polyring.factor(x.den):
        out[Place.finite(f)] = out.get(Place.finite(f), 0) - m
    return sorted(((pl, e) for pl, e in out.items() if e != 0), key=lambda pe: pe[0].sort_key())


# ---------------------------------------------------------------------------
# Symbols and square tests
# ---------------------------------------------------------------------------


def valuation(x, place: Place):
    return place.valuation(x)


def legendre(a, place: Place) -> int:
    """+1 iff a is a square modulo the (finite) place; requires v(a) = 0."""
    if place.is_infinite:
        raise FuncFieldError("the Legendre symbol is defined at finite places")
    a = as_ratfunc(a, prime_field(place.p))
    if place.valuation(a) != 0:
        raise FuncFieldError("Legendre symbol needs a place-unit argument")
    return chi(place.residue_field(), place.unit_residue(a))


def reciprocity_rhs(a: Poly, b: Poly) -> int:
    """(-1/p)^(deg a * deg b) * (lead a/p)^(deg b) * (lead b/p)^(deg a) * (b/a)
    for distinct irreducible a, b; equals legendre(a, place of monic b)."""
    F = a.field
    if not (polyring.is_irreducible(a) and polyring.is_irreducible(b)):
        raise FuncFieldError("reciprocity needs irreducible arguments")
    if a.monic() == b.monic():
        raise FuncFieldError("reciprocity needs distinct irreducibles")
    s = 1
    if (a.degree * b.degree) % 2 == 1:
        s *= chi(F, F.from_int(-1))
    if b.degree % 2 == 1:
        s *= chi(F, a.lc())
    if a.degree % 2 == 1:
        s *= chi(F, b.lc())
    s *= legendre(RatFunc(b), Place.finite(a.monic()))
    return s


def hilbert(a, b, place: Place) -> int:
    """Tame Hilbert symbol (a,b) at the place: +1 iff a*x^2 + b*y^2 = z^2
    has a nontrivial local solution."""
    F = prime_field(place.p)
    a = as_ratfunc(a, F)
    b = as_ratfunc(b, F)
    if a.is_zero() or b.is_zero():
        raise FuncFieldError("Hilbert symbol needs nonzero arguments")
    m = place.valuation(a)
    n = place.valuation(b)
    R = place.residue_field()
    s = 1
    if m % 2 and n % 2:
        s *= chi(R, R.from_int(-1))
    if n % 2:
        s *= chi(R, place.unit_residue(a))
    if m % 2:
        s *= chi(R, place.unit_residue(b))
    return s


def is_local_square(x, place: Place) -> bool:
    """x in k_nu^x2: even valuation and square unit residue."""
    x = as_ratfunc(x, prime_field(place.p))
    if x.is_zero():
        raise FuncFieldError("local square test needs a nonzero argument")
    if place.valuation(x) % 2:
        return False
    return is_square_raw(place.residue_field(), place.unit_residue(x))


def is_global_square(x) -> bool:
    """x in k^x2: every place-multiplicity even and square leading coefficient."""
    if isinstance(x, Poly):
        x = RatFunc(x)
    if x.is_zero():
        return True
    F = x.field
    if not is_square_raw(F, x.num.lc()):
        return False
    for f, m in polyring.factor(x.num):
        if m % 2:
            return False
    for f, m in polyring.factor(x.den):
        if m % 2:
            return False
    return True


def substitute_inverse(x: RatFunc) -> RatFunc:
    """Image of x(t) under t -> 1/t, over the same prime field.

    Sends the infinite place to the finite place (t), so completions at
    infinity reduce to the finite-place machinery.
    """
    n, d = x.num, x.den
    if n.is_zero():
        return x
    rn = n.reversed_coeffs()
    rd = d.reversed_coeffs()
    shift = d.degree - n.degree
    if shift >= 0:
        return RatFunc(rn.shift_up(shift), rd)
    return RatFunc(rn, rd.shift_up(-shift))
