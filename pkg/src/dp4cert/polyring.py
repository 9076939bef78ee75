"""Dense univariate polynomials over a coefficient field.

The coefficient field is any object following the field protocol from ff
(PrimeField, ExtField, or the rational function field from funcfield), so
the same class serves F_p[t], residue-field polynomials, and polynomials
in an auxiliary variable with rational-function coefficients.

Coefficients are stored as raw field values, lowest degree first, with no
trailing zeros; the zero polynomial has an empty coefficient tuple and
degree -1.  Factorization (squarefree split, distinct degree, equal degree)
requires a finite coefficient field and uses a PRNG seeded deterministically
from the field and the input so results are reproducible.
"""

from __future__ import annotations

import itertools
import random

from .ff import PrimeField


class PolyError(ValueError):
    pass


# Schoolbook products and long division are fine for the small polynomials
# that dominate typical use, but completions work with polynomials of degree
# a few hundred over F_p.  Over a prime field the coefficients are machine
# ints, so past these cutoffs multiplication packs them into bit slots of a
# single Python integer (Kronecker substitution) and division goes through
# the reversed-series Newton inverse, both exact.
_PACKED_MUL_MIN = 16
_FAST_DIV_MIN_DEG = 16
_FAST_DIV_MIN_QUOT = 8


def _packed_mul(p: int, a, b):
    """Convolution of int sequences mod p via one big-integer product.

    The slot width k is chosen so every coefficient of the product, at most
    min(len(a), len(b)) * (p-1)^2, fits in its slot without carrying.
    """
    k = (min(len(a), len(b)) * (p - 1) * (p - 1) + 1).bit_length()
    ia = 0
    for c in reversed(a):
        ia = (ia << k) | (c % p)
    if b is a:
        ib = ia
    else:
        ib = 0
        for c in reversed(b):
            ib = (ib << k) | (c % p)
    prod = ia * ib
    mask = (1 << k) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i in range(len(out)):
        out[i] = (prod & mask) % p
        prod >>= k
    return out


def _packed_mul_trunc(p: int, a, b, n: int):
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return []
    out = _packed_mul(p, a, b)
    del out[n:]
    return out


def _series_inverse(p: int, g, n: int):
    """Inverse of g mod x^n over F_p; g must have constant term 1.

    Newton iteration doubles the working precision each step, so the cost is
    a few packed products of length about n.
    """
    h = [1]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        gh = _packed_mul_trunc(p, g, h, prec)
        corr = [(-c) % p for c in gh]
        corr[0] = (corr[0] + 2) % p
        h = _packed_mul_trunc(p, h, corr, prec)
    return h


# Reductions hit the same modulus many times (power series arithmetic keeps
# one modulus per precision), so the Newton inverse of the reversed divisor
# is memoized.  Entries only ever extend in precision; the table is cleared
# when it grows past a small bound.
_SERIES_INV_CACHE: dict = {}


def _cached_series_inverse(p: int, g: tuple, n: int):
    key = (p, g)
    hit = _SERIES_INV_CACHE.get(key)
    if hit is not None and len(hit) >= n:
        return hit[:n]
    if len(_SERIES_INV_CACHE) >= 64:
        _SERIES_INV_CACHE.clear()
    h = _series_inverse(p, list(g), n)
    _SERIES_INV_CACHE[key] = h
    return h


def _fast_divmod(f: "Poly", g: "Poly"):
    """divmod over a prime field via reversal and the cached Newton inverse."""
    F = f.field
    p = F.p
    a = list(f.coeffs)
    b = list(g.coeffs)
    lead = b[-1]
    inv_lead = F.inv(lead) if lead != 1 else 1
    if lead != 1:
        b = [(c * inv_lead) % p for c in b]
    db = len(b) - 1
    dq = len(a) - 1 - db
    rev_f = a[::-1]
    rev_g = tuple(b[::-1])
    h = _cached_series_inverse(p, rev_g, dq + 1)
    rev_q = _packed_mul_trunc(p, rev_f, h, dq + 1)
    q = rev_q[::-1]
    prod_low = _packed_mul_trunc(p, q, b, db) if db else []
    rem = [(a[i] - c) % p for i, c in enumerate(prod_low)]
    rem += a[len(prod_low):db]
    if lead != 1:
        q = [(c * inv_lead) % p for c in q]
    return Poly(F, q), Poly(F, rem)


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        """coeffs: iterable of raw field values, constant term first."""
        c = list(coeffs)
        while c and field.is_zero(c[-1]):
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.ONE,))

    @classmethod
    def const(cls, field, a):
        return cls(field, (a,))

    @classmethod
    def gen(cls, field):
        return cls(field, (field.ZERO, field.ONE))

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(n) for n in ints])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.ONE

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        if not self.coeffs:
            raise PolyError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def constant(self):
        return self.coeffs[0] if self.coeffs else self.field.ZERO

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.ONE

    def monic(self) -> "Poly":
        if self.is_zero():
            raise PolyError("monic of zero polynomial")
        F = self.field
        if self.is_monic():
            return self
        inv = F.inv(self.coeffs[-1])
        return Poly(F, [F.mul(c, inv) for c in self.coeffs])

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __sub__(self, other):
        other = self._coerce(other)
        F = self.field
        out = [F.ZERO] * max(len(self.coeffs), len(other.coeffs))
        for i, c in enumerate(self.coeffs):
            out[i] = c
        for i, c in enumerate(other.coeffs):
            out[i] = F.sub(out[i], c)
        return Poly(F, out)

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(F)
        if len(a) + len(b) >= _PACKED_MUL_MIN and isinstance(F, PrimeField):
            return Poly(F, _packed_mul(F.p, a, b))
        out = [F.ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if F.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return Poly(F, out)

    def __radd__(self, other):
        return self._coerce(other) + self

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __rmul__(self, other):
        return self._coerce(other) * self

    def scale(self, a) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(c, a) for c in self.coeffs])

    def shift_up(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.ZERO,) * k + self.coeffs)

    def __divmod__(self, other):
        other = self._coerce(other)
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree
        if self.degree < db:
            return Poly.zero(F), self
        if (db >= _FAST_DIV_MIN_DEG and self.degree - db >= _FAST_DIV_MIN_QUOT
                and isinstance(F, PrimeField)):
            return _fast_divmod(self, other)
        inv_lead = F.inv(other.coeffs[-1])
        rem = list(self.coeffs)
        q = [F.ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            lead = rem[k + db]
            if F.is_zero(lead):
                continue
            c = F.mul(lead, inv_lead)
            q[k] = c
            for i in range(db + 1):
                rem[k + i] = F.sub(rem[k + i], F.mul(c, other.coeffs[i]))
        return Poly(F, q), Poly(F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative power of a polynomial")
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise PolyError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly(self.field, (self.field.from_int(other),))
        return Poly.const(self.field, other)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def evaluate(self, a):
        """Horner evaluation at a raw field value."""
        F = self.field
        acc = F.ZERO
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def derivative(self) -> "Poly":
        F = self.field
        out = [F.mul(self.coeffs[i], F.from_int(i)) for i in range(1, len(self.coeffs))]
        return Poly(F, out)

    def reversed_coeffs(self) -> "Poly":
        """x^deg * f(1/x); assumes nothing about the constant term."""
        return Poly(self.field, tuple(reversed(self.coeffs)))

    def map_coeffs(self, func, new_field) -> "Poly":
        return Poly(new_field, [func(c) for c in self.coeffs])

    def sort_key(self):
        F = self.field
        return (self.degree, tuple(F.key(c) for c in self.coeffs))

    def __repr__(self):
        return poly_to_str(self, "x")


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv(r0.lc())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def powmod(a: Poly, e: int, m: Poly) -> Poly:
    result = Poly.one(a.field)
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


def resultant(f: Poly, g: Poly):
    """Resultant of f and g as a raw coefficient-field value."""
    F = f.field
    if f.is_zero() or g.is_zero():
        return F.ZERO
    sign = False
    acc = F.ONE
    while True:
        n, m = f.degree, g.degree
        if m == 0:
            out = F.mul(acc, F.pow_(g.coeffs[0], n))
            return F.neg(out) if sign else out
        r = f % g
        if r.is_zero():
            return F.ZERO
        if (n * m) % 2 == 1:
            sign = not sign
        acc = F.mul(acc, F.pow_(g.lc(), n - r.degree))
        f, g = g, r


def discriminant(f: Poly):
    """disc(f) = (-1)^(n(n-1)/2) * lc(f)^(n-2-deg f') * Res(f, f').

    The exponent reduces to -1 when f' keeps degree n-1, but in
    characteristic p the derivative of a degree-p term vanishes, and for a
    non-monic f the plain Res/lc formula would then be off by a power of
    the leading coefficient.  f' = 0 means every root is repeated.
    """
    F = f.field
    n = f.degree
    if n < 1:
        raise PolyError("discriminant needs degree >= 1")
    df = f.derivative()
    if df.is_zero():
        return F.ZERO
    res = resultant(f, df)
    e = n - 2 - df.degree
    if e >= 0:
        d = F.mul(res, F.pow_(f.lc(), e))
    else:
        d = F.div(res, F.pow_(f.lc(), -e))
    if (n * (n - 1) // 2) % 2 == 1:
        d = F.neg(d)
    return d


# ---------------------------------------------------------------------------
# Factorization over finite fields
# ---------------------------------------------------------------------------


class Factorization:
    """Leading coefficient and a list of (monic irreducible, multiplicity),
    sorted by degree then by coefficient order."""

    def __init__(self, field, lead, factors):
        self.field = field
        self.lead = lead
        self.factors = sorted(factors, key=lambda fm: fm[0].sort_key())

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def remultiply(self) -> Poly:
        out = Poly.const(self.field, self.lead)
        for g, m in self.factors:
            out = out * g ** m
        return out

    def __repr__(self):
        parts = [self.field.repr_raw(self.lead)]
        parts += [f"({g!r})^{m}" if m > 1 else f"({g!r})" for g, m in self.factors]
        return " * ".join(parts)


def _stable_seed(*values) -> int:
    acc = 0x9E3779B97F4A7C15
    for v in values:
        acc = (acc * 0x100000001B3 + (v & 0xFFFFFFFFFFFF) + 1) % (1 << 64)
    return acc


def _flatten_raw(raw, out):
    if isinstance(raw, int):
        out.append(raw)
    else:
        for part in raw:
            _flatten_raw(part, out)


def _seed_for(field, f: Poly) -> int:
    ints = [field.char, field.order % (1 << 48), f.degree]
    flat = []
    for c in f.coeffs:
        _flatten_raw(c, flat)
    return _stable_seed(*ints, *flat)


def squarefree_decomposition(f: Poly):
    """List of (squarefree monic g_i, multiplicity e_i), pairwise coprime,
    with f = lc * prod g_i^e_i.  Handles the char-p collapse f'(x) = 0."""
    F = f.field
    if f.is_zero():
        raise PolyError("squarefree decomposition of zero")
    f = f.monic()
    out = []
    _sqfree_rec(f, 1, out)
    out.sort(key=lambda gm: (gm[1], gm[0].sort_key()))
    return out


def _sqfree_rec(f: Poly, mult: int, out):
    F = f.field
    if f.is_one():
        return
    df = f.derivative()
    if df.is_zero():
        # f = g(x^p); take the p-th root of each coefficient
        p = F.char
        root = [F.pow_(f.coeffs[i], F.order // p) for i in range(0, len(f.coeffs), p)]
        _sqfree_rec(Poly(F, root), mult * p, out)
        return
    c = gcd(f, df)
    w = f // c
    i = 1
    while not w.is_one():
        y = gcd(w, c)
        z = w // y
        if not z.is_one():
            out.append((z, mult * i))
        w = y
        c = c // y
        i += 1
    if not c.is_one():
        _sqfree_rec(c, mult, out)


def _distinct_degree(f: Poly):
    """For squarefree monic f: list of (product of irreducibles of degree d, d)."""
    F = f.field
    q = F.order
    out = []
    h = Poly.gen(F)
    x = Poly.gen(F)
    g = f
    d = 0
    while g.degree > 0:
        d += 1
        if 2 * d > g.degree:
            out.append((g, g.degree))
            break
        h = powmod(h, q, g)
        sub = gcd(h - x, g)
        if not sub.is_one():
            out.append((sub, d))
            g = g // sub
            h = h % g
    return out


def _equal_degree(f: Poly, d: int, rng) -> list:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles, odd q."""
    if f.degree == d:
        return [f]
    F = f.field
    e = (F.order ** d - 1) // 2
    while True:
        r = Poly(F, [F.random(rng) for _ in range(f.degree)])
        if r.is_constant():
            continue
        g = gcd(r, f)
        if not g.is_one():
            pass
        else:
            h = powmod(r, e, f)
            g = gcd(h - Poly.one(F), f)
        if g.is_one() or g.degree == f.degree:
            continue
        return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor(f: Poly) -> Factorization:
    """Full factorization over a finite field into monic irreducibles."""
    F = f.field
    if F.order is None:
        raise PolyError("factorization requires a finite coefficient field")
    if f.is_zero():
        raise PolyError("cannot factor the zero polynomial")
    lead = f.lc()
    if f.degree == 0:
        return Factorization(F, lead, [])
    rng = random.Random(_seed_for(F, f))
    factors = []
    for g, mult in squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                factors.append((irr, mult))
    return Factorization(F, lead, factors)


def is_irreducible(f: Poly) -> bool:
    """Rabin test: x^(q^n) = x mod f and gcd(x^(q^(n/l)) - x, f) = 1 for primes l | n."""
    F = f.field
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    q = F.order
    x = Poly.gen(F)
    f = f.monic()
    h = x
    steps = {}
    for i in range(1, n + 1):
        h = powmod(h, q, f)
        steps[i] = h
    if steps[n] != x % f:
        return False
    for ell in _prime_divisors_int(n):
        if not gcd(steps[n // ell] - x, f).is_one():
            return False
    return True


def _prime_divisors_int(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _mobius(n: int) -> int:
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def count_irreducibles(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q (necklace formula)."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * q ** (n // d)
    return total // n


def monic_polys(field, degree: int):
    """All monic polynomials of the given degree, in lexicographic order of
    the coefficient vector read from the constant term up."""
    elems = list(field.elements())
    for combo in itertools.product(elems, repeat=degree):
        yield Poly(field, list(combo) + [field.ONE])


def irreducibles(field, degree: int):
    """Monic irreducibles of the given degree in deterministic lex order."""
    for f in monic_polys(field, degree):
        if is_irreducible(f):
            yield f


def random_poly(field, degree: int, rng, monic: bool = False) -> Poly:
    c = [field.random(rng) for _ in range(degree + 1)]
    if monic:
        c[-1] = field.ONE
    elif field.is_zero(c[-1]):
        c[-1] = field.ONE
    return Poly(field, c)


# ---------------------------------------------------------------------------
# Text format: t^4+5*t^2+2*t+4  (prime-field coefficients in [0, p))
# ---------------------------------------------------------------------------


def poly_to_str(f: Poly, var: str = "t") -> str:
    F = f.field
    if f.is_zero():
        return "0"
    terms = []
    for i in range(f.degree, -1, -1):
        c = f.coeff(i)
        if F.is_zero(c):
            continue
        cs = F.repr_raw(c, parens=True)
        if i == 0:
            terms.append(cs)
        else:
            v = var if i == 1 else f"{var}^{i}"
            terms.append(v if cs == "1" else f"{cs}*{v}")
    return "+".join(terms)


def poly_from_str(s: str, field, var: str = "t") -> Poly:
    """Parse the sparse text format; accepts +, binary -, and optional spaces."""
    s = s.replace(" ", "")
    if not s:
        raise PolyError("empty polynomial string")
    if s == "0":
        return Poly.zero(field)
    # split into signed terms
    terms = []
    cur = ""
    sign = 1
    first = True
    i = 0
    if s[0] == "-":
        sign = -1
        i = 1
    elif s[0] == "+":
        i = 1
    while i <= len(s):
        if i == len(s) or s[i] in "+-":
            if not cur:
                raise PolyError(f"malformed polynomial string: {s!r}")
            terms.append((sign, cur))
            if i < len(s):
                sign = 1 if s[i] == "+" else -1
            cur = ""
        else:
            cur += s[i]
        i += 1
    coeffs = {}
    for sg, term in terms:
        coeff_txt, exp = None, None
        if "*" in term:
            cpart, vpart = term.split("*", 1)
            coeff_txt = cpart
        else:
            vpart = term
            coeff_txt = None
        if vpart.startswith(var):
            rest = vpart[len(var):]
            if rest == "":
                exp = 1
            elif rest.startswith("^"):
                exp = int(rest[1:])
            else:
                raise PolyError(f"bad term {term!r}")
            c = int(coeff_txt) if coeff_txt is not None else 1
        else:
            if coeff_txt is not None:
                raise PolyError(f"bad term {term!r}")
            exp = 0
            c = int(vpart)
        raw = field.from_int(sg * c)
        if exp in coeffs:
            raw = field.add(coeffs[exp], raw)
        coeffs[exp] = raw
    if not coeffs:
        return Poly.zero(field)
    top = max(coeffs)
    return Poly(field, [coeffs.get(i, field.ZERO) for i in range(top + 1)])
