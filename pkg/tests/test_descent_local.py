import random
from fractions import Fraction

import pytest

from qdescent.arith import REAL_PLACE, finite, is_prime, valuation
from qdescent.descent_local import (TWO_MAP, c2_order, i2_oracle_halving,
                                    i2_order, local_descent_report,
                                    s2_order_isogeny, s2_order_two_map,
                                    s2_real, torsion_field_profile)
from qdescent.elliptic import Pt, curve_from_string, multiplication_isogeny, \
    velu_isogeny

MESTRE = curve_from_string("[0,2597055,357573631,-549082,-19608054]")
E189 = curve_from_string("[0,0,0,-189,1269]")


def curve(s):
    return curve_from_string(s)


# ---------------------------------------------------------------------------
# the seven intersection orders of the worked examples


def test_i2_values_paper():
    assert i2_order(curve("[0,-26,0,135,-567]"), TWO_MAP, 3)[0] == 2
    assert i2_order(curve("[0,26,0,135,567]"), TWO_MAP, 3)[0] == 4
    assert i2_order(curve("[0,0,0,-529,12167]"), TWO_MAP, 23)[0] == 1
    assert i2_order(curve("[0,0,0,-529,-12167]"), TWO_MAP, 23)[0] == 2
    assert i2_order(curve("[0,1,0,4,12]"), TWO_MAP, 2)[0] == 4
    assert i2_order(curve("[0,0,0,-25,0]"), TWO_MAP, 5)[0] == 1
    assert i2_order(curve("[0,0,0,-75,125]"), TWO_MAP, 5)[0] == 1


def test_i2_good_reduction_case():
    # at good odd reduction I = #E(Q_p)[2]
    m = curve("[0,0,0,-25,0]")
    for p in (3, 7, 11, 13):
        if valuation(m.disc, p) == 0:
            assert i2_order(m, TWO_MAP, p)[0] == c2_order(m, TWO_MAP, finite(p))


def test_c2_orders():
    for p in (1217, 381991):
        assert c2_order(MESTRE, TWO_MAP, finite(p)) == 2
    assert c2_order(MESTRE, TWO_MAP, finite(2)) == 1
    assert c2_order(MESTRE, TWO_MAP, REAL_PLACE) == 1
    assert c2_order(curve("[0,0,0,-25,0]"), TWO_MAP, finite(5)) == 4


def test_s2_orders():
    assert s2_order_two_map(MESTRE, 2) == 2
    assert s2_order_two_map(curve("[0,0,0,-25,0]"), 5) == 4
    # trivial local 2-torsion at an odd prime
    assert s2_order_two_map(curve("[0,0,1,-1,0]"), 7) == 1


def test_s2_real():
    assert s2_real(MESTRE, TWO_MAP) == 1  # disc < 0
    m = curve("[0,-1,0,-2,0]")  # y^2 = (x+1)x(x-2), disc > 0
    assert s2_real(m, TWO_MAP) == 2
    # odd-degree isogeny: always trivial
    phi3 = velu_isogeny(E189, [Pt(Fraction(3), Fraction(27)),
                               Pt(Fraction(3), Fraction(-27))])
    assert s2_real(E189, phi3) == 1
    # 2-isogeny by the middle root: (a,0) not in the kernel -> trivial;
    # by the least root: order 2
    least = velu_isogeny(m, [Pt(Fraction(-1), Fraction(0))])
    mid = velu_isogeny(m, [Pt(Fraction(0), Fraction(0))])
    assert s2_real(m, least) == 2
    assert s2_real(m, mid) == 1


def test_s2_isogeny_31():
    phi = velu_isogeny(E189, [Pt(Fraction(3), Fraction(27)),
                              Pt(Fraction(3), Fraction(-27))])
    assert s2_order_isogeny(phi, 31) == 9  # 1 * 3 * (3/1)
    two = multiplication_isogeny(curve("[0,0,0,-25,0]"), 2)
    # multiplication-by-2 at a good odd prime with full rational 2-torsion
    assert s2_order_isogeny(two, 3) == 4
    # 2-isogeny with rational kernel at a good odd prime
    m2 = curve("[0,-1,0,-2,0]")
    psi = velu_isogeny(m2, [Pt(Fraction(0), Fraction(0))])
    for p in (5, 7, 11):
        if valuation(m2.disc, p) == 0 and valuation(psi.codomain.disc, p) == 0:
            assert s2_order_isogeny(psi, p) == 2


def test_torsion_field_profile_examples():
    prof = torsion_field_profile(curve("[0,0,0,-75,125]"), TWO_MAP, 5)
    assert prof.m == 2 and prof.deg_Lprime == 3 and prof.deg_M == 6
    assert any(len(c) == 3 for c in prof.tau_permutation)  # 3-cycle
    prof = torsion_field_profile(curve("[0,0,0,-529,12167]"), TWO_MAP, 23)
    assert prof.m == 2 and prof.deg_M == 2
    assert sum(1 for k in prof.kernel_points if k.residue_degree == 1) == 1
    # full rational 2-torsion at a good odd prime
    prof = torsion_field_profile(curve("[0,0,0,-25,0]"), TWO_MAP, 7)
    assert prof.m == 2 and prof.deg_Lprime == 1 and prof.deg_M == 2
    assert all(k.residue_degree == 1 for k in prof.kernel_points)


def test_oracle_matches_paper_cases():
    # applicable instances of the worked examples
    for cs, p, expected in [("[0,0,0,-25,0]", 5, 1),
                            ("[0,0,0,-75,125]", 5, 1)]:
        got, ev = i2_oracle_halving(curve(cs), p)
        assert got == expected
        assert got == i2_order(curve(cs), TWO_MAP, p)[0]


def test_oracle_vs_i2_on_52_suite():
    # run the oracle across the odd-p worked examples; whenever applicable
    # it must agree with the case-analysis computation
    cases = [("[0,-26,0,135,-567]", 3), ("[0,26,0,135,567]", 3),
             ("[0,0,0,-529,12167]", 23), ("[0,0,0,-529,-12167]", 23),
             ("[0,0,0,-25,0]", 5), ("[0,0,0,-75,125]", 5)]
    applicable = 0
    for cs, p in cases:
        got, ev = i2_oracle_halving(curve(cs), p)
        if got == "inapplicable":
            continue
        applicable += 1
        assert got == i2_order(curve(cs), TWO_MAP, p)[0], (cs, p, ev)
    assert applicable >= 2


def test_example_III_family():
    rng = random.Random(11)
    odd_primes = [q for q in range(5, 100) if is_prime(q)]
    done = 0
    while done < 12:
        p = rng.choice(odd_primes)
        a, b, c = rng.sample(range(1, p), 3)
        if (a - b) % p == 0 or (a - c) % p == 0 or (b - c) % p == 0:
            continue
        # y^2 = (x - pa)(x - pb)(x - pc)
        e1, e2, e3 = p * a, p * b, p * c
        s1 = e1 + e2 + e3
        s2 = e1 * e2 + e1 * e3 + e2 * e3
        s3 = e1 * e2 * e3
        m = curve(f"[0,{-s1},0,{s2},{-s3}]")
        from qdescent.tate import tate_algorithm

        rd = tate_algorithm(m, p)
        assert rd.kodaira.symbol() == "I0*"
        assert c2_order(m, TWO_MAP, finite(p)) == 4
        assert s2_order_two_map(m, p) == 4
        assert i2_order(m, TWO_MAP, p)[0] == 1
        got, ev = i2_oracle_halving(m, p)
        assert got == 1, ev
        done += 1


def test_sweep_C_equals_S_equals_I_good_primes():
    rng = random.Random(23)
    done = 0
    while done < 40:
        a = rng.randrange(-15, 16)
        b = rng.randrange(-15, 16)
        try:
            m = curve(f"[0,0,0,{a},{b}]")
        except ValueError:
            continue
        p = rng.choice([3, 5, 7, 11, 13, 17])
        if valuation(m.disc, p) != 0:
            continue
        C = c2_order(m, TWO_MAP, finite(p))
        S = s2_order_two_map(m, p)
        I = i2_order(m, TWO_MAP, p)[0]
        assert C == S == I
        done += 1


def test_I_divides_gcd_C_S():
    import math

    rng = random.Random(29)
    done = 0
    while done < 25:
        a = rng.randrange(-20, 21)
        b = rng.randrange(-20, 21)
        try:
            m = curve(f"[0,0,0,{a},{b}]")
        except ValueError:
            continue
        for p in (2, 3, 5, 7):
            try:
                rep = local_descent_report(m, TWO_MAP, finite(p))
            except Exception:
                raise
            assert rep.order_C % rep.order_I == 0
            assert rep.order_S % rep.order_I == 0
        done += 1


def test_local_report_shape():
    rep = local_descent_report(curve("[0,0,0,-25,0]"), TWO_MAP, finite(5))
    assert (rep.order_C, rep.order_S, rep.order_I) == (4, 4, 1)
    assert rep.kodaira == "I0*"
    d = rep.as_dict()
    assert d["C"] == 4 and d["I"] == 1
    real = local_descent_report(curve("[0,0,0,-25,0]"), TWO_MAP, REAL_PLACE)
    assert (real.order_C, real.order_S, real.order_I) == (1, 2, 1)
