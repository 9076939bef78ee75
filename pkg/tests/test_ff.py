import random

import pytest

from dp4cert.ff import (
    FieldError,
    prime_field,
    ext_field,
    is_prime,
    is_square_raw,
    chi,
    sqrt_raw,
)
import oracles as O


def test_is_prime():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43}
    for n in range(2, 45):
        assert is_prime(n) == (n in primes), n
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(2 ** 31 - 1)
    assert not is_prime(2 ** 32 + 1)


def test_prime_field_matches_int_arithmetic():
    rng = random.Random(1)
    for p in (3, 5, 13, 101):
        F = prime_field(p)
        for _ in range(100):
            a, b = rng.randrange(p), rng.randrange(p)
            assert F.add(a, b) == (a + b) % p
            assert F.sub(a, b) == (a - b) % p
            assert F.mul(a, b) == (a * b) % p
            assert F.neg(a) == (-a) % p
            if b:
                assert F.mul(F.inv(b), b) == 1
                assert F.div(a, b) == (a * pow(b, -1, p)) % p
            assert F.pow_(a, 5) == pow(a, 5, p)


def test_prime_field_rejects_nonprime():
    with pytest.raises(FieldError):
        prime_field(9)
    with pytest.raises(FieldError):
        prime_field(1)


def test_is_square_matches_euler_criterion():
    for p in (3, 5, 7, 13, 29):
        F = prime_field(p)
        for a in range(1, p):
            assert is_square_raw(F, a) == O.euler_is_square_int(a, p), (p, a)


def test_sqrt_prime_field_roundtrip():
    rng = random.Random(2)
    for p in (3, 5, 13, 10007):
        F = prime_field(p)
        for _ in range(50):
            x = rng.randrange(1, p)
            sq = F.mul(x, x)
            r = sqrt_raw(F, sq)
            assert F.mul(r, r) == sq


def test_chi_values():
    F = prime_field(7)
    with pytest.raises(FieldError):
        chi(F, 0)
    squares = {pow(x, 2, 7) for x in range(1, 7)}
    for a in range(1, 7):
        assert chi(F, a) == (1 if a in squares else -1)


def test_ext_field_axioms_and_frobenius():
    rng = random.Random(3)
    for p, d in ((3, 2), (5, 2), (7, 3)):
        Fq = ext_field(p, d)
        q = p ** d
        assert Fq.order == q
        for _ in range(40):
            a, b, c = (Fq.random(rng) for _ in range(3))
            assert Fq.add(a, b) == Fq.add(b, a)
            assert Fq.mul(a, b) == Fq.mul(b, a)
            assert Fq.mul(a, Fq.add(b, c)) == Fq.add(Fq.mul(a, b), Fq.mul(a, c))
            if not Fq.is_zero(a):
                assert Fq.mul(a, Fq.inv(a)) == Fq.ONE
            # x^q = x for every element of F_q
            assert Fq.pow_(a, q) == a


def test_ext_field_squares_brute_force():
    for p, d in ((3, 2), (5, 2), (7, 2)):
        Fq = ext_field(p, d)
        squares = set()
        for x in Fq.elements():
            squares.add(Fq.key(Fq.mul(x, x)))
        for x in Fq.elements():
            if Fq.is_zero(x):
                continue
            want = Fq.key(x) in squares
            assert is_square_raw(Fq, x) == want
            if want:
                r = sqrt_raw(Fq, x)
                assert Fq.mul(r, r) == x
    # the square classes split the units in half
    Fq = ext_field(3, 2)
    units = [x for x in Fq.elements() if not Fq.is_zero(x)]
    assert sum(1 for x in units if is_square_raw(Fq, x)) == len(units) // 2


def test_sqrt_raw_none_for_nonsquare():
    F = prime_field(7)
    assert sqrt_raw(F, 3) is None
    assert sqrt_raw(F, 0) == 0
