import random

import pytest

from dp4cert.ff import prime_field, ext_field
from dp4cert import polyring as PR
from dp4cert.polyring import (
    Poly,
    PolyError,
    gcd,
    xgcd,
    powmod,
    resultant,
    discriminant,
    factor,
    is_irreducible,
    count_irreducibles,
    irreducibles,
    monic_polys,
    random_poly,
    squarefree_decomposition,
    poly_to_str,
    poly_from_str,
)
import oracles as O


F5 = prime_field(5)
F3 = prime_field(3)


def ints(f):
    return list(f.coeffs)


def test_construction_and_accessors():
    f = Poly.from_ints(F5, [2, 0, 1])  # t^2 + 2
    assert f.degree == 2
    assert f.lc() == 1
    assert f.coeff(0) == 2 and f.coeff(1) == 0
    assert f.is_monic()
    g = f.scale(3)
    assert not g.is_monic()
    assert g.monic() == f
    assert f.shift_up(2).degree == 4
    assert Poly.zero(F5).is_zero()
    assert Poly.one(F5).degree == 0
    assert Poly.gen(F5).degree == 1


def test_arithmetic_matches_oracle():
    rng = random.Random(11)
    for p in (3, 5, 13):
        F = prime_field(p)
        for _ in range(100):
            f = random_poly(F, rng.randrange(0, 6), rng)
            g = random_poly(F, rng.randrange(0, 6), rng)
            assert ints(f * g) == O.pmul(ints(f), ints(g), p)
            assert ints(f + g) == O.padd(ints(f), ints(g), p)
            assert ints(f - g) == O.psub(ints(f), ints(g), p)


def test_divmod_identity():
    rng = random.Random(12)
    for _ in range(150):
        f = random_poly(F5, rng.randrange(0, 8), rng)
        g = random_poly(F5, rng.randrange(0, 5), rng)
        if g.is_zero():
            continue
        q, r = divmod(f, g)
        assert q * g + r == f
        assert r.is_zero() or r.degree < g.degree


def test_gcd_and_xgcd():
    rng = random.Random(13)
    for _ in range(100):
        h = random_poly(F5, rng.randrange(0, 3), rng)
        f = random_poly(F5, rng.randrange(0, 4), rng) * h
        g = random_poly(F5, rng.randrange(0, 4), rng) * h
        d = gcd(f, g)
        if f.is_zero() and g.is_zero():
            assert d.is_zero()
            continue
        assert (f % d).is_zero() and (g % d).is_zero()
        if not h.is_zero():
            assert (d % h.monic()).is_zero() or h.degree == 0
        dd, u, v = xgcd(f, g)
        assert u * f + v * g == dd
        assert dd == d


def test_powmod_matches_naive():
    rng = random.Random(14)
    for _ in range(30):
        a = random_poly(F3, rng.randrange(0, 4), rng)
        m = random_poly(F3, rng.randrange(1, 4), rng, monic=True)
        e = rng.randrange(0, 40)
        naive = Poly.one(F3)
        for _ in range(e):
            naive = (naive * a) % m
        assert powmod(a, e, m) == naive


def test_resultant_matches_sylvester():
    rng = random.Random(15)
    for p in (3, 5, 13):
        F = prime_field(p)
        for _ in range(60):
            f = random_poly(F, rng.randrange(1, 5), rng)
            g = random_poly(F, rng.randrange(1, 5), rng)
            if f.is_zero() or g.is_zero():
                continue
            assert resultant(f, g) == O.sylvester_resultant(ints(f), ints(g), p)


def test_resultant_detects_common_root():
    t = Poly.gen(F5)
    shared = t + Poly.one(F5).scale(2)
    f = shared * (t + Poly.one(F5))
    g = shared * (t + Poly.one(F5).scale(3))
    assert resultant(f, g) == 0


def test_discriminant_closed_forms():
    rng = random.Random(16)
    for p in (5, 7, 13):
        F = prime_field(p)
        for _ in range(40):
            a = rng.randrange(1, p)
            b, c = rng.randrange(p), rng.randrange(p)
            quad = Poly.from_ints(F, [c, b, a])
            assert discriminant(quad) == F.from_int(b * b - 4 * a * c)
            u, v = rng.randrange(p), rng.randrange(p)
            cub = Poly.from_ints(F, [v, u, 0, 1])  # x^3 + u x + v
            assert discriminant(cub) == F.from_int(-4 * u ** 3 - 27 * v ** 2)


def test_discriminant_scaling_with_derivative_degree_drop():
    # disc(a*f) = a^(2n-2) disc(f) must survive the derivative losing its
    # top term, which happens for degree-p polynomials in characteristic p
    rng = random.Random(21)
    for p in (3, 5, 7):
        F = prime_field(p)
        for _ in range(60):
            n = rng.randrange(2, 8)
            f = Poly(F, [rng.randrange(p) for _ in range(n)] + [1])
            a = rng.randrange(1, p)
            scaled = f.scale(F.from_int(a))
            assert discriminant(scaled) == F.mul(
                discriminant(f), F.pow_(F.from_int(a), 2 * n - 2))
    # x^5 - x splits over F_5; its discriminant is the product of squared
    # root differences, and the derivative is the constant -1
    F = prime_field(5)
    split = Poly.from_ints(F, [0, -1, 0, 0, 0, 1])
    want = 1
    for i in range(5):
        for j in range(i + 1, 5):
            want = want * (i - j) ** 2 % 5
    assert discriminant(split) == F.from_int(want)
    for a in (2, 3, 4):
        assert discriminant(split.scale(F.from_int(a))) == F.from_int(want * a ** 8)


def test_factor_remultiply_and_irreducibility():
    rng = random.Random(17)
    for p in (3, 5, 13):
        F = prime_field(p)
        for _ in range(40):
            f = random_poly(F, rng.randrange(1, 9), rng)
            if f.is_zero():
                continue
            fac = factor(f)
            assert fac.remultiply() == f
            degs = []
            for g, m in fac:
                assert g.is_monic()
                assert is_irreducible(g)
                assert m >= 1
                degs.append(g.degree)
            assert degs == sorted(degs)


def test_is_irreducible_vs_trial_division():
    for p in (3, 5):
        F = prime_field(p)
        for deg in (1, 2, 3, 4):
            for f in monic_polys(F, deg):
                has_factor = False
                for d in range(1, deg // 2 + 1):
                    for g in monic_polys(F, d):
                        if (f % g).is_zero():
                            has_factor = True
                            break
                    if has_factor:
                        break
                assert is_irreducible(f) == (not has_factor), poly_to_str(f)


def test_factor_over_extension_field():
    Fq = ext_field(3, 2)
    rng = random.Random(18)
    for _ in range(20):
        f = random_poly(Fq, rng.randrange(1, 6), rng)
        if f.is_zero():
            continue
        fac = factor(f)
        assert fac.remultiply() == f
        for g, _ in fac:
            assert is_irreducible(g)


def test_irreducible_counts():
    for p in (3, 5):
        F = prime_field(p)
        for n in (1, 2, 3, 4):
            got = sum(1 for _ in irreducibles(F, n))
            assert got == count_irreducibles(p, n), (p, n)
    assert count_irreducibles(9, 2) == (81 - 9) // 2


def test_squarefree_decomposition():
    rng = random.Random(19)
    for p in (3, 5):
        F = prime_field(p)
        for _ in range(40):
            f = random_poly(F, rng.randrange(1, 5), rng, monic=True)
            g = random_poly(F, rng.randrange(1, 3), rng, monic=True)
            h = f * g * g
            parts = squarefree_decomposition(h)
            rebuilt = Poly.one(F)
            for base, mult in parts:
                for bb, _ in parts:
                    if bb is not base:
                        assert gcd(base, bb).degree == 0
                rebuilt = rebuilt * base ** mult
            assert rebuilt == h.monic()


def test_str_roundtrip():
    rng = random.Random(20)
    for s in ("t", "1", "t^2+2*t+2", "2*t^5+t"):
        f = poly_from_str(s, F3)
        assert poly_to_str(f) == s
    for _ in range(60):
        f = random_poly(F5, rng.randrange(0, 6), rng)
        assert poly_from_str(poly_to_str(f), F5) == f


def test_mismatched_fields_rejected():
    with pytest.raises(PolyError):
        Poly.gen(F3) + Poly.gen(F5)
