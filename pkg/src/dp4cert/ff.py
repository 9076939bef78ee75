"""Finite fields of odd characteristic: F_p and extensions F_{p^d}.

Field objects carry the arithmetic and operate on lightweight raw values:
an element of F_p is an int in [0, p); an element of a degree-d extension
is a tuple of d raw base-field values (coefficients of the residue class
representative, constant term first).  Extensions may be stacked, so a
residue field of a place and a further quadratic extension of it use the
same code path.  Thin wrapper classes give operator syntax on top of the
raw layer for callers that prefer elements over (field, raw) pairs.
"""

from __future__ import annotations

import functools
import itertools


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The prime field F_p, p an odd prime.  Raw elements are ints in [0, p)."""

    def __init__(self, p: int):
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1
        self.ZERO = 0
        self.ONE = 1

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        c = a + b
        p = self.p
        return c - p if c >= p else c

    def sub(self, a, b):
        c = a - b
        return c + self.p if c < 0 else c

    def neg(self, a):
        return (self.p - a) if a else 0

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def key(self, a):
        return a

    def repr_raw(self, a, parens: bool = False) -> str:
        return str(a)

    def elements(self):
        return iter(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def elem(self, n: int) -> "PrimeFieldElem":
        return PrimeFieldElem(self, self.from_int(n))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


# ---------------------------------------------------------------------------
# Minimal dense polynomial helpers over an arbitrary field object, used only
# for extension-field construction (modular inverse, irreducibility of the
# modulus).  The full public polynomial type lives in polyring.
# ---------------------------------------------------------------------------


def _lp_normalize(F, c):
    c = list(c)
    while c and F.is_zero(c[-1]):
        c.pop()
    return c


def _lp_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if F.is_zero(ai):
            continue
        for j, bj in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _lp_normalize(F, out)


def _lp_rem(F, a, m):
    """Remainder of a modulo m (m monic)."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        if not F.is_zero(lead):
            shift = len(a) - 1 - dm
            for i in range(dm):
                a[shift + i] = F.sub(a[shift + i], F.mul(lead, m[i]))
        a.pop()
    return _lp_normalize(F, a)


def _lp_mulmod(F, a, b, m):
    return _lp_rem(F, _lp_mul(F, a, b), m)


def _lp_powmod(F, a, e: int, m):
    result = [F.ONE]
    base = _lp_rem(F, a, m)
    while e:
        if e & 1:
            result = _lp_mulmod(F, result, base, m)
        base = _lp_mulmod(F, base, base, m)
        e >>= 1
    return result


def _lp_gcd(F, a, b):
    a, b = _lp_normalize(F, a), _lp_normalize(F, b)
    while b:
        dm = len(b) - 1
        binv = F.inv(b[-1])
        r = list(a)
        while len(r) - 1 >= dm and r:
            lead = r[-1]
            if not F.is_zero(lead):
                q = F.mul(lead, binv)
                shift = len(r) - 1 - dm
                for i in range(dm):
                    r[shift + i] = F.sub(r[shift + i], F.mul(q, b[i]))
            r.pop()
            r = _lp_normalize(F, r)
            if not r:
                break
        a, b = b, _lp_normalize(F, r)
    return a


def _lp_invmod(F, a, m):
    """Inverse of a modulo monic m via extended Euclid."""
    r0, r1 = list(m), _lp_rem(F, a, m)
    s0, s1 = [], [F.ONE]
    while r1:
        # divide r0 by r1
        q = []
        r = list(r0)
        d1 = len(r1) - 1
        inv_lead = F.inv(r1[-1])
        qc = [F.ZERO] * max(len(r) - d1, 0)
        while len(r) - 1 >= d1 and r:
            lead = r[-1]
            k = len(r) - 1 - d1
            if not F.is_zero(lead):
                c = F.mul(lead, inv_lead)
                qc[k] = c
                for i in range(d1):
                    r[k + i] = F.sub(r[k + i], F.mul(c, r1[i]))
            r.pop()
            r = _lp_normalize(F, r)
            if not r:
                break
        q = _lp_normalize(F, qc)
        r0, r1 = r1, _lp_normalize(F, r)
        qs1 = _lp_mul(F, q, s1)
        ns = [F.ZERO] * max(len(s0), len(qs1))
        for i, c in enumerate(s0):
            ns[i] = c
        for i, c in enumerate(qs1):
            ns[i] = F.sub(ns[i], c)
        s0, s1 = s1, _lp_normalize(F, ns)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo the given modulus")
    c = F.inv(r0[0])
    return _lp_normalize(F, [F.mul(c, x) for x in s0])


def _lp_is_irreducible(F, m) -> bool:
    """Rabin irreducibility test for monic m over the finite field F."""
    n = len(m) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    q = F.order
    x = [F.ZERO, F.ONE]
    # x^(q^n) == x mod m
    h = x
    for _ in range(n):
        h = _lp_powmod(F, h, q, m)
    hm = list(h)
    # h - x
    while len(hm) < 2:
        hm.append(F.ZERO)
    hm[1] = F.sub(hm[1], F.ONE)
    if _lp_normalize(F, hm):
        return False
    for ell in _prime_divisors(n):
        h = x
        for _ in range(n // ell):
            h = _lp_powmod(F, h, q, m)
        hm = list(h)
        while len(hm) < 2:
            hm.append(F.ZERO)
        hm[1] = F.sub(hm[1], F.ONE)
        g = _lp_gcd(F, hm, m)
        if len(g) - 1 != 0:
            return False
    return True


def _prime_divisors(n: int):
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


class ExtField:
    """An extension of a finite field by a monic irreducible modulus.

    ``modulus`` is a tuple of base-field raws of length deg+1 with leading
    coefficient one.  Raw elements are tuples of base raws of length deg.
    The base may itself be an extension, giving towers.
    """

    def __init__(self, base, modulus, gen_name: str = "a", check: bool = True):
        modulus = tuple(modulus)
        if len(modulus) < 3:
            raise FieldError("extension degree must be at least 2")
        if modulus[-1] != base.ONE:
            raise FieldError("modulus must be monic")
        if check and not _lp_is_irreducible(base, list(modulus)):
            raise FieldError("modulus is not irreducible over the base field")
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.char = base.char
        self.order = base.order ** self.deg
        self.degree = getattr(base, "degree", 1) * self.deg
        self.gen_name = gen_name
        d = self.deg
        self.ZERO = tuple(base.ZERO for _ in range(d))
        self.ONE = tuple(base.ONE if i == 0 else base.ZERO for i in range(d))
        # reduction table: x^(d+i) mod modulus for i = 0 .. d-2
        red = []
        cur = [base.neg(c) for c in modulus[:d]]
        red.append(tuple(cur))
        for _ in range(d - 2):
            nxt = [base.ZERO] + cur[: d - 1]
            top = cur[d - 1]
            if not base.is_zero(top):
                for i in range(d):
                    nxt[i] = base.add(nxt[i], base.mul(top, red[0][i]))
            red.append(tuple(nxt))
            cur = nxt
        self._red = red
        self._prime_base = isinstance(base, PrimeField)

    def gen(self):
        """Raw value of the residue class of the variable."""
        d = self.deg
        return tuple(self.base.ONE if i == 1 else self.base.ZERO for i in range(d))

    def from_int(self, n: int):
        d = self.deg
        return tuple(self.base.from_int(n) if i == 0 else self.base.ZERO for i in range(d))

    def from_base(self, a):
        d = self.deg
        return tuple(a if i == 0 else self.base.ZERO for i in range(d))

    def from_coeffs(self, coeffs):
        """Raw value from an iterable of at most deg base raws, constant first."""
        c = list(coeffs)
        if len(c) > self.deg:
            raise FieldError("too many coefficients")
        while len(c) < self.deg:
            c.append(self.base.ZERO)
        return tuple(c)

    def add(self, a, b):
        base = self.base
        return tuple(base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        base = self.base
        return tuple(base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        base = self.base
        return tuple(base.neg(x) for x in a)

    def mul(self, a, b):
        d = self.deg
        base = self.base
        if self._prime_base:
            p = base.p
            conv = [0] * (2 * d - 1)
            for i in range(d):
                ai = a[i]
                if ai:
                    for j in range(d):
                        conv[i + j] += ai * b[j]
            out = [c % p for c in conv[:d]]
            for i in range(d - 1):
                top = conv[d + i] % p
                if top:
                    row = self._red[i]
                    for j in range(d):
                        out[j] = (out[j] + top * row[j]) % p
            return tuple(out)
        conv = [base.ZERO] * (2 * d - 1)
        for i in range(d):
            ai = a[i]
            if base.is_zero(ai):
                continue
            for j in range(d):
                conv[i + j] = base.add(conv[i + j], base.mul(ai, b[j]))
        out = conv[:d]
        for i in range(d - 1):
            top = conv[d + i]
            if not base.is_zero(top):
                row = self._red[i]
                for j in range(d):
                    out[j] = base.add(out[j], base.mul(top, row[j]))
        return tuple(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        inv_list = _lp_invmod(self.base, _lp_normalize(self.base, list(a)), list(self.modulus))
        return self.from_coeffs(inv_list)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_(self, a, n: int):
        if n < 0:
            a = self.inv(a)
            n = -n
        result = self.ONE
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def is_zero(self, a) -> bool:
        base = self.base
        return all(base.is_zero(x) for x in a)

    def key(self, a):
        base = self.base
        return tuple(base.key(x) for x in a)

    def repr_raw(self, a, parens: bool = False) -> str:
        base = self.base
        terms = []
        for i in range(self.deg - 1, -1, -1):
            c = a[i]
            if base.is_zero(c):
                continue
            cs = base.repr_raw(c, parens=True)
            if i == 0:
                terms.append(cs)
            else:
                v = self.gen_name if i == 1 else f"{self.gen_name}^{i}"
                terms.append(v if cs == "1" else f"{cs}*{v}")
        if not terms:
            return "0"
        s = "+".join(terms)
        if parens and len(terms) > 1:
            return f"({s})"
        return s

    def elements(self):
        base_elems = list(self.base.elements())
        for combo in itertools.product(base_elems, repeat=self.deg):
            # constant-term-up lexicographic order
            yield tuple(combo)

    def random(self, rng):
        base = self.base
        return tuple(base.random(rng) for _ in range(self.deg))

    def elem(self, coeffs) -> "ExtFieldElem":
        if isinstance(coeffs, int):
            return ExtFieldElem(self, self.from_int(coeffs))
        return ExtFieldElem(self, self.from_coeffs(coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.base, self.modulus))

    def __repr__(self):
        mstr = "+".join(
            f"{self.base.repr_raw(c, parens=True)}*{self.gen_name}^{i}" if i else self.base.repr_raw(c)
            for i, c in enumerate(self.modulus)
            if not self.base.is_zero(c)
        )
        return f"GF({self.base.order}^{self.deg}; {self.gen_name}: {mstr})"


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@functools.lru_cache(maxsize=None)
def ext_field(p: int, d: int) -> ExtField:
    """F_{p^d} with the deterministic modulus: the lexicographically least
    monic irreducible of degree d, coefficients compared constant term first."""
    base = prime_field(p)
    if d == 1:
        raise FieldError("use prime_field for degree 1")
    for combo in itertools.product(range(p), repeat=d):
        m = list(combo) + [1]
        if _lp_is_irreducible(base, m):
            return ExtField(base, tuple(m), check=False)
    raise FieldError("unreachable: no irreducible found")


# ---------------------------------------------------------------------------
# Squares and square roots
# ---------------------------------------------------------------------------


def is_square_raw(F, a) -> bool:
    """Euler criterion in the finite field F; zero counts as a square."""
    if F.is_zero(a):
        return True
    return F.pow_(a, (F.order - 1) // 2) == F.ONE


def chi(F, a) -> int:
    """Quadratic character of a nonzero element: +1 or -1."""
    if F.is_zero(a):
        raise FieldError("quadratic character of zero is undefined")
    return 1 if F.pow_(a, (F.order - 1) // 2) == F.ONE else -1


def sqrt_raw(F, a):
    """A square root of a in F, or None if a is not a square.

    The returned root is canonical: the lexicographically smaller of the
    two roots +/-y under the field's coefficient ordering.
    """
    if F.is_zero(a):
        return a
    q = F.order
    if F.pow_(a, (q - 1) // 2) != F.ONE:
        return None
    if q % 4 == 3:
        y = F.pow_(a, (q + 1) // 4)
    else:
        # Tonelli-Shanks with a deterministic non-square scan
        s, e = q - 1, 0
        while s % 2 == 0:
            s //= 2
            e += 1
        n = None
        for cand in F.elements():
            if not F.is_zero(cand) and F.pow_(cand, (q - 1) // 2) != F.ONE:
                n = cand
                break
        z = F.pow_(n, s)
        y = F.pow_(a, (s + 1) // 2)
        b = F.pow_(a, s)
        r = e
        while b != F.ONE:
            m, t = 0, b
            while t != F.ONE:
                t = F.mul(t, t)
                m += 1
            c = F.pow_(z, 1 << (r - m - 1))
            y = F.mul(y, c)
            z = F.mul(c, c)
            b = F.mul(b, z)
            r = m
    ny = F.neg(y)
    return y if F.key(y) <= F.key(ny) else ny


# ---------------------------------------------------------------------------
# Element wrappers
# ---------------------------------------------------------------------------


class FieldElem:
    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return type(self)(self.field, self.field.add(self.raw, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return type(self)(self.field, self.field.sub(self.raw, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return type(self)(self.field, self.field.sub(r, self.raw))

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return type(self)(self.field, self.field.mul(self.raw, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return type(self)(self.field, self.field.div(self.raw, r))

    def __rtruediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return type(self)(self.field, self.field.div(r, self.raw))

    def __neg__(self):
        return type(self)(self.field, self.field.neg(self.raw))

    def __pow__(self, n):
        return type(self)(self.field, self.field.pow_(self.raw, n))

    def __eq__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return self.raw == r

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def __repr__(self):
        return self.field.repr_raw(self.raw)


class PrimeFieldElem(FieldElem):
    @property
    def value(self) -> int:
        return self.raw


class ExtFieldElem(FieldElem):
    @property
    def coeffs(self):
        return self.raw


def is_square(x: FieldElem) -> bool:
    return is_square_raw(x.field, x.raw)


def sqrt(x: FieldElem):
    r = sqrt_raw(x.field, x.raw)
    if r is None:
        return None
    return type(x)(x.field, r)
