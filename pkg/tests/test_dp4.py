import json
import random
from fractions import Fraction

import pytest

from dp4cert.ff import prime_field
from dp4cert import polyring as PR
from dp4cert.polyring import Poly, poly_from_str, poly_to_str
from dp4cert.funcfield import (
    RatFunc,
    Place,
    func_field,
    ratfunc_from_str,
    is_global_square,
)
from dp4cert.etale import mod_squares_equal
from dp4cert.quadform import epsilon_at_factor
from dp4cert import dp4
from dp4cert.dp4 import (
    FamilyError,
    CertificateFormatError,
    find_alpha,
    count_alpha,
    weil_bound_holds,
    weil_bound_positive,
    family_params,
    build_family,
    invariants,
    check_conditions,
    derive_d,
    search_D,
    distinct_check,
    certificate_from_json,
    generic_design_check,
)
import oracles as O


def rf(p, s):
    return ratfunc_from_str(s, prime_field(p))


# ---------------------------------------------------------------------------
# alpha
# ---------------------------------------------------------------------------


def test_find_alpha_known_values():
    assert find_alpha(5).value == 3
    assert find_alpha(13).value == 2
    a7 = find_alpha(7)
    assert a7.value == 3 and a7.fallback
    a11 = find_alpha(11)
    assert a11.value == 8 and a11.fallback
    assert not find_alpha(5).fallback
    assert not find_alpha(13).fallback


def test_find_alpha_flags_match_euler_oracle():
    for p in (5, 13, 17, 19, 23, 29):
        w = find_alpha(p)
        a = w.value
        assert not O.euler_is_square_int(a, p)
        assert O.euler_is_square_int((a + 1) % p, p) and (a + 1) % p != 0
        u = (3 * a - 1) % p
        assert u != 0 and not O.euler_is_square_int(u, p)


def test_find_alpha_rejects_bad_p():
    for p in (2, 3, 4, 9):
        with pytest.raises(FamilyError):
            find_alpha(p)


def test_count_alpha_and_weil_bound():
    n13, bound13 = count_alpha(13)
    assert n13 == 2
    assert bound13 < 0
    assert weil_bound_holds(13, n13)
    n101, bound101 = count_alpha(101)
    assert n101 == 15
    assert bound101 == pytest.approx(4.84, abs=0.01)
    assert weil_bound_holds(101, n101)
    assert not weil_bound_holds(101, 4)  # 4 < 4.84...
    # integer decision agrees with the float comparison on a sweep
    import math
    for p in range(5, 400):
        for n in (0, 1, 5, 40):
            want = n >= (p - 5 * math.sqrt(p) - 12) / 8
            assert weil_bound_holds(p, n) == want
        assert weil_bound_positive(p) == ((p - 5 * math.sqrt(p) - 12) / 8 > 0)


# ---------------------------------------------------------------------------
# family construction and invariants
# ---------------------------------------------------------------------------


def test_family_params_validation():
    with pytest.raises(FamilyError):
        family_params(4)
    with pytest.raises(FamilyError):
        family_params(2)
    with pytest.raises(FamilyError):
        family_params(3, alpha=1)  # p = 3 takes no alpha
    with pytest.raises(FamilyError):
        family_params(13, alpha=1)  # 1 is a square
    with pytest.raises(FamilyError):
        family_params(5, d="0")
    # alpha = 3 is admissible for p = 5; alpha defaults to find_alpha
    assert family_params(5).alpha == 3
    assert family_params(5, alpha=3).alpha == 3
    assert family_params(3).alpha is None
    assert family_params(7).alpha == 3
    assert family_params(11).alpha == 8


def test_build_family_shapes():
    pr = family_params(7, d="t+2")
    P = build_family(pr)
    assert P.M0.n == 5 and P.Minf.n == 5
    d = rf(7, "t+2")
    t = rf(7, "t")
    assert P.M0.entry(0, 0) == d
    assert P.M0.entry(1, 1) == -(d * t)
    assert P.Minf.entry(0, 1) == -d
    assert P.Minf.entry(0, 0).is_zero()
    # the non-twist block carries no d
    for i in range(2, 5):
        for j in range(2, 5):
            num = P.M0.entry(i, j)
            assert num == P.M0.entry(j, i)

    with pytest.raises(FamilyError):
        build_family(family_params(7))  # no d


def test_invariants_golden_p7():
    pr = family_params(7, d="1")
    rep = invariants(pr, verify_eps=False)
    assert str(rep.c) == "3*t^2"
    assert rep.eps2 == rf(7, "3*t^2+3*t")     # 3*t*(t+1)
    assert rep.f3.degree == 3
    # xi has the square lead 4 and two monic irreducible factors of
    # degrees 4 and 10
    assert rep.xi.lc() == prime_field(7).from_int(4)
    assert [g.degree for g in rep.xi_factors] == [4, 10]
    assert all(g.is_monic() and PR.is_irreducible(g) for g in rep.xi_factors)
    prod = rep.xi_factors[0] * rep.xi_factors[1]
    assert rep.xi == prod.scale(prime_field(7).from_int(4))
    assert rep.disc_f3 == rf(7, "2*t^3") * RatFunc(rep.xi)


def test_invariants_golden_p3():
    pr = family_params(3, d="t^4+2*t^3+t^2+t")  # D*t for D = t^3+2*t^2+t+1
    rep = invariants(pr, verify_eps=True)
    assert rep.eps_verified
    F3 = prime_field(3)
    assert rep.f3 == Poly(func_field(3), [rf(3, "2*t^3+2*t^2"), rf(3, "t"),
                                          rf(3, "t^2+t"), rf(3, "1")])
    assert rep.xi == poly_from_str("2*t^6+2*t^5+t^3+2*t+1", F3)
    w1 = poly_from_str("t^2+2*t+2", F3)
    w2 = poly_from_str("t^4+2*t^3+t+1", F3)
    assert rep.xi == (w1 * w2).scale(F3.from_int(2))
    assert list(rep.xi_factors) == [w1, w2]
    # eps3 = (t+1) * theta in the cubic algebra
    assert str(rep.eps3) == "(t+1)*theta"
    assert rep.disc_f3 == rf(3, "t^3") * RatFunc(rep.xi) / rf(3, "2")
    # bad places include t, t+1, the xi primes, the support of d, and inf
    names = [pl for pl in rep.bad_places]
    assert names[-1].is_infinite


def test_invariants_verify_eps_on_p7():
    pr = family_params(7, d="t+3")
    rep = invariants(pr, verify_eps=True)
    assert rep.eps_verified
    assert rep.eps2 == rf(7, "t+3") * rf(7, "3*t^2+3*t")


def test_invariants_reject_missing_d():
    with pytest.raises(FamilyError):
        invariants(family_params(7))


# ---------------------------------------------------------------------------
# p = 3 square classes: the two corrected display errata
# ---------------------------------------------------------------------------


def test_p3_eps2_class_is_dt_times_t_plus_1_not_t_minus_1():
    pr = family_params(3, d="t^4+2*t^3+t^2+t")
    P = build_family(pr)
    K = func_field(3)
    t = rf(3, "t")
    quad = Poly(K, [t, K.ZERO, K.ONE])
    e2 = epsilon_at_factor(P, quad)
    const = lambda x: e2.ext.from_poly(Poly.const(K, x))
    good = const(pr.d * t * (t + K.ONE))
    bad = const(pr.d * t * (t - K.ONE))
    assert mod_squares_equal(e2.value, good).equal
    v = mod_squares_equal(e2.value, bad)
    assert not v.equal and v.witness is not None


def test_p3_eps3_coefficient_identity():
    # (t+1) * (t^3+2*t^2+t+1)^2 expands to t^7+2*t^6+t^5+2*t^3+t^2+1;
    # the variant without the t^5 term differs by a genuine nonsquare
    F3 = prime_field(3)
    g = poly_from_str("t^3+2*t^2+t+1", F3)
    lhs = poly_from_str("t+1", F3) * g * g
    assert lhs == poly_from_str("t^7+2*t^6+t^5+2*t^3+t^2+1", F3)
    variant = poly_from_str("t^7+2*t^6+2*t^3+t^2+1", F3)
    assert not is_global_square(RatFunc(variant) * rf(3, "t+1"))


def test_p3_eps3_variant_refuted_in_algebra():
    pr = family_params(3, d="t")
    rep = invariants(pr, verify_eps=False)
    ext = rep.eps3.ext
    K = func_field(3)
    theta = ext.gen()
    const = lambda s: ext.from_poly(Poly.const(K, rf(3, s)))
    good = theta * const("t^7+2*t^6+t^5+2*t^3+t^2+1")
    bad = theta * const("t^7+2*t^6+2*t^3+t^2+1")
    assert mod_squares_equal(rep.eps3, good).equal
    v = mod_squares_equal(rep.eps3, bad)
    assert not v.equal and v.witness is not None


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def test_derive_d():
    pr = family_params(7)
    D = poly_from_str("6*t^3+5*t+6", prime_field(7))
    d = derive_d(pr, D)
    A = rf(7, "3")
    t = rf(7, "t")
    assert d * (A * t * (t + func_field(7).ONE)) == RatFunc(D)
    pr3 = family_params(3)
    D3 = poly_from_str("t^3+2*t^2+t+1", prime_field(3))
    assert derive_d(pr3, D3) == RatFunc(D3) * rf(3, "t")


def test_check_conditions_golden_p3():
    cert = check_conditions(family_params(3), "t^3+2*t^2+t+1")
    assert cert.valid
    assert [c.id for c in cert.conditions] == [
        "d-square-at-inf", "dt-square-at-t1", "dt-square-at-t",
        "eps3-square-at-D"]
    assert all(c.verdict for c in cert.conditions)
    rows = [(e.place, e.value, e.justification) for e in cert.invariant_table]
    assert rows == [
        ("t", "1/2", "no-local-lines+cond:dt-square-at-t"),
        ("t+1", "0", "cond:dt-square-at-t1"),
        ("t^2+2*t+2", "0", "family:eps3-square-at-xi"),
        ("t^3+2*t^2+t+1", "0", "cond:eps3-square-at-D"),
        ("t^4+2*t^3+t+1", "0", "family:eps3-square-at-xi"),
        ("inf", "0", "cond:d-square-at-inf"),
        ("other", "0", "good-reduction"),
    ]
    assert cert.table_sum() == Fraction(1, 2)


def test_check_conditions_golden_p7():
    cert = check_conditions(family_params(7), "6*t^3+5*t+6")
    assert cert.valid
    assert [c.id for c in cert.conditions] == [
        "eps3-square-at-D", "alphaD-square-at-t", "D-odd-negative-lead",
        "eps3-square-at-xi", "D-square-at-t1"]
    assert cert.table_sum() == Fraction(1, 2)
    assert cert.invariant_table[0].place == "t"
    assert cert.invariant_table[0].value == "1/2"


def test_check_conditions_even_degree_invalid():
    # even degree fails condition 3 for p > 3; certificate is invalid
    F = prime_field(7)
    done = 0
    for q in PR.irreducibles(F, 2):
        D = q.scale(F.from_int(-1))
        pr = family_params(7)
        try:
            cert = check_conditions(pr, D)
        except FamilyError:
            continue
        assert not cert.valid
        bad = {c.id for c in cert.conditions if not c.verdict}
        assert "D-odd-negative-lead" in bad
        assert cert.invariant_table == ()
        done += 1
        if done >= 3:
            break
    assert done == 3


def test_check_conditions_precondition_errors():
    pr7 = family_params(7)
    # t, t+1 and their associates are excluded outright
    for bad in ("t", "t+1", "6*t", "6*t+6"):
        with pytest.raises(FamilyError):
            check_conditions(pr7, bad)
    with pytest.raises(FamilyError):
        check_conditions(pr7, "t^2+3*t+2")  # (t+1)(t+2), reducible
    # a factor of xi is rejected
    rep = invariants(family_params(7, d="1"), verify_eps=False)
    w1 = rep.xi_factors[0]
    with pytest.raises(FamilyError):
        check_conditions(pr7, w1)
    # p = 3 wants a monic D
    with pytest.raises(FamilyError):
        check_conditions(family_params(3), "2*t^3+t^2+2*t+2")


def test_check_conditions_rejects_mismatched_d():
    pr = family_params(3, d="t")
    with pytest.raises(FamilyError):
        check_conditions(pr, "t^3+2*t^2+t+1")


def test_search_golden_p11_degree1():
    hits = [poly_to_str(D) for D, cert in search_D(family_params(11), 1)]
    assert hits == ["10*t+8", "10*t+2"]


def test_search_golden_p3():
    out = list(search_D(family_params(3), 3))
    names = [poly_to_str(D) for D, _ in out]
    assert names == ["t^3+2*t+1", "t^3+2*t^2+t+1"]
    for D, cert in out:
        assert cert.valid
        assert cert.table_sum() == Fraction(1, 2)


def test_search_parallel_matches_sequential():
    seq = [(poly_to_str(D), cert.to_json()) for D, cert in
           search_D(family_params(3), 3, jobs=1)]
    par = [(poly_to_str(D), cert.to_json()) for D, cert in
           search_D(family_params(3), 3, jobs=2)]
    assert seq == par


def test_search_skips_even_degrees_for_p_gt_3():
    # no even-degree D can pass condition 3, so the scan skips them
    out = list(search_D(family_params(13), 2))
    assert [D.degree for D, _ in out] == [1, 1, 1]


def test_distinct_check():
    assert distinct_check("t^3+2*t+1", "t^3+2*t^2+t+1", p=3)
    with pytest.raises(FamilyError):
        distinct_check("t^3+2*t+1", "t^3+2*t+1", p=3)
    with pytest.raises(FamilyError):
        distinct_check("t^2+3*t+2", "t+1", p=7)  # reducible first argument
    with pytest.raises(FamilyError):
        distinct_check("t+1", "t+2")  # strings need p


def test_certificate_json_roundtrip():
    cert = check_conditions(family_params(3), "t^3+2*t^2+t+1")
    obj = cert.to_json()
    text = json.dumps(obj)
    back = certificate_from_json(json.loads(text))
    assert back.to_json() == obj
    assert back.valid == cert.valid
    assert back.D == cert.D
    assert back.d == cert.d


def test_certificate_from_json_rejects_malformed():
    cert = check_conditions(family_params(3), "t^3+2*t^2+t+1")
    obj = cert.to_json()
    broken = dict(obj)
    broken["schema"] = 99
    with pytest.raises(CertificateFormatError):
        certificate_from_json(broken)
    broken = dict(obj)
    del broken["conditions"]
    with pytest.raises(CertificateFormatError):
        certificate_from_json(broken)
    broken = dict(obj)
    broken["D"] = "@@not-a-polynomial@@"
    with pytest.raises(CertificateFormatError):
        certificate_from_json(broken)
    broken = dict(obj)
    broken["invariant_table"] = [{"place": "t", "value": "2",
                                  "justification": "x"}]
    with pytest.raises(CertificateFormatError):
        certificate_from_json(broken)
    with pytest.raises(CertificateFormatError):
        certificate_from_json([1, 2, 3])


# ---------------------------------------------------------------------------
# the generic design
# ---------------------------------------------------------------------------


def family_template_args(p, alpha):
    F = prime_field(p)
    t = RatFunc(Poly.gen(F))
    A = RatFunc.from_int(F, alpha)
    one = RatFunc(Poly.one(F))
    return dict(
        a2=t * t + t * t * t,
        a3=A * t,
        a4=t * t,
        b1=A / t,
        b2=t * t,
        b3=A,
        b4=(RatFunc.from_int(F, 3) * A - one) * t / (A + one),
        d=t,
    )


def test_generic_design_family_instantiation():
    rep5 = generic_design_check(5, **family_template_args(5, 3))
    assert rep5.charpoly_ok
    assert rep5.eps2_scaled_ok
    # the unscaled display identity fails here: -alpha*(alpha+1) = -12 = 3
    # is a nonsquare mod 5
    assert not rep5.eps2_plain_ok
    assert all(ok for _, ok in rep5.conic_checks)
    rep7 = generic_design_check(7, **family_template_args(7, 3))
    assert rep7.charpoly_ok and rep7.eps2_scaled_ok
    # mod 7 the same scalar is a square, so the plain display agrees
    assert rep7.eps2_plain_ok
    assert all(ok for _, ok in rep7.conic_checks)


def test_generic_design_fixed_parameter_sets():
    g13 = {k: rf(13, v) for k, v in dict(
        a2="1", a3="t", a4="1", b1="1", b2="1", b3="0", b4="t+1", d="t").items()}
    rep = generic_design_check(13, **g13)
    assert rep.charpoly_ok and rep.eps2_scaled_ok
    assert not rep.eps2_plain_ok
    assert rep.conic_checks == (("0", True), ("1", False), ("12", True))
    g5 = {k: rf(5, v) for k, v in dict(
        a2="t", a3="1", a4="t+1", b1="2", b2="t", b3="1", b4="t", d="1").items()}
    rep = generic_design_check(5, **g5)
    assert rep.charpoly_ok and rep.eps2_scaled_ok
    assert not rep.eps2_plain_ok


def test_generic_design_rejects_degenerate():
    one = rf(5, "1")
    zero = rf(5, "0")
    with pytest.raises(FamilyError):
        generic_design_check(5, a2=one, a3=one, a4=one,
                             b1=one, b2=zero, b3=one, b4=one, d=one)
    with pytest.raises(FamilyError):
        generic_design_check(5, a2=one, a3=one, a4=one,
                             b1=one, b2=one, b3=one, b4=one, d=zero)
