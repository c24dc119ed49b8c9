from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qdescent.arith import factor_integer, valuation
from qdescent.poly import (FpPoly, RatPoly, discriminant, factor_mod_p,
                           factor_over_Z, fp_poly, hensel_lift_factors,
                           local_splitting_type, mp_mul, parse_poly,
                           resultant, roots_in_Fp)

QUINTIC = parse_poly("X^5+16*X^4-274*X^3+817*X^2+178*X+1")


def test_parse_forms_agree():
    assert QUINTIC == parse_poly("[1,178,817,-274,16,1]")
    assert parse_poly("X^2-X+6") == RatPoly([6, -1, 1])
    assert parse_poly("x^3 + 1/4") == RatPoly([Fraction(1, 4), 0, 0, 1])


def test_discriminant_paper_quintic():
    assert discriminant(QUINTIC) == 941 ** 4 * 191 ** 2


def test_discriminant_small():
    assert discriminant(RatPoly([-1, 0, 1])) == 4  # X^2 - 1
    assert discriminant(RatPoly([6, -1, 1])) == -23  # X^2 - X + 6


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=4),
       st.lists(st.integers(-9, 9), min_size=2, max_size=4))
@settings(max_examples=60)
def test_discriminant_product_identity(ac, bc):
    f, g = RatPoly(ac), RatPoly(bc)
    if f.degree < 1 or g.degree < 1:
        return
    fg = f * g
    assert discriminant(fg) == \
        discriminant(f) * discriminant(g) * resultant(f, g) ** 2


def test_factor_mod_p_quintic_37():
    fac = factor_mod_p(fp_poly(QUINTIC, 37))
    assert all(m == 1 and g.degree == 1 for g, m in fac)
    roots = sorted((-g.coeffs[0]) % 37 for g, _ in fac)
    assert roots == [4, 8, 12, 16, 18]


def test_factor_mod_p_quintic_191():
    fac = factor_mod_p(fp_poly(QUINTIC, 191))
    by_mult = sorted(((-g.coeffs[0]) % 191, m) for g, m in fac if g.degree == 1)
    assert by_mult == [(5, 1), (6, 1), (37, 1), (159, 2)]


def test_factor_mod_2():
    fac = factor_mod_p(FpPoly(2, (1, 0, 1)))  # X^2 + 1 = (X+1)^2
    assert fac == [(FpPoly(2, (1, 1)), 2)]


def test_factor_mod_p_reconstructs():
    for p in (2, 3, 5, 37, 191):
        fac = factor_mod_p(fp_poly(QUINTIC, p))
        prod = [1]
        for g, m in fac:
            for _ in range(m):
                prod = mp_mul(prod, list(g.coeffs), p)
        assert prod == [c % p for c in [1, 178, 817, -274, 16, 1]]


def test_roots_in_Fp():
    assert roots_in_Fp(QUINTIC, 37) == [4, 8, 12, 16, 18]
    assert roots_in_Fp(QUINTIC, 73) == sorted(x % 73 for x in (-26, -19, -2, 13, 18))
    assert roots_in_Fp(RatPoly([1, 0, 1]), 3) == []


def test_factor_over_Z_cubic():
    f = parse_poly("X^3+X^2+4*X+12")
    fac = factor_over_Z(f)
    assert RatPoly([2, 1]) in fac  # X + 2
    assert RatPoly([6, -1, 1]) in fac  # X^2 - X + 6
    assert len(fac) == 2


def test_factor_over_Z_simple():
    assert factor_over_Z(RatPoly([-4, 0, 1])) == [RatPoly([-2, 1]), RatPoly([2, 1])]
    assert factor_over_Z(QUINTIC) == [QUINTIC]


def test_factor_over_Z_quartics():
    # X^4 - 1 = (X-1)(X+1)(X^2+1)
    fac = factor_over_Z(RatPoly([-1, 0, 0, 0, 1]))
    assert sorted(g.degree for g in fac) == [1, 1, 2]
    # irreducible quartic
    assert factor_over_Z(RatPoly([1, 0, 0, 0, 1])) == [RatPoly([1, 0, 0, 0, 1])]
    # product of two irreducible quadratics
    f = RatPoly([1, 0, 1]) * RatPoly([3, 3, 1])
    assert sorted(factor_over_Z(f), key=lambda g: g.coeffs) == \
        sorted([RatPoly([1, 0, 1]), RatPoly([3, 3, 1])], key=lambda g: g.coeffs)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4),
       st.lists(st.integers(-20, 20), min_size=1, max_size=4))
@settings(max_examples=40)
def test_factor_over_Z_multiplies_back(ac, bc):
    f = RatPoly(ac + [1]) * RatPoly(bc + [1])
    fac = factor_over_Z(f)
    prod = RatPoly([1])
    for g in fac:
        prod = prod * g
    assert prod == f.monic()


def test_hensel_lift_roundtrip():
    f = [c % 7 ** 12 for c in [1, 178, 817, -274, 16, 1]]
    red = factor_mod_p(fp_poly(QUINTIC, 7))
    parts = [list(g.coeffs) for g, _ in red]
    assert all(m == 1 for _, m in red)
    lifted = hensel_lift_factors(f, parts, 7, 12)
    prod = [1]
    for g in lifted:
        prod = mp_mul(prod, g, 7 ** 12)
    assert prod == f
    for g, g0 in zip(lifted, parts):
        assert [c % 7 for c in g] == g0


# ---------------------------------------------------------------------------
# local splitting types


def test_split_941_totally_ramified():
    st_ = local_splitting_type(QUINTIC, 941)
    assert st_.totally_ramified
    assert len(st_.factors) == 1
    assert (st_.factors[0].e, st_.factors[0].f) == (5, 1)


def test_split_2_inert():
    st_ = local_splitting_type(QUINTIC, 2)
    assert len(st_.factors) == 1
    fac = st_.factors[0]
    assert (fac.e, fac.f) == (1, 5)
    assert st_.all_unramified and not st_.splits_completely


def test_split_191_fully_split():
    st_ = local_splitting_type(QUINTIC, 191)
    assert st_.splits_completely
    assert len(st_.factors) == 5
    roots = sorted(f.root_mod(191) for f in st_.factors)
    assert roots == [5, 6, 37, 159, 159]
    deep = sorted(f.root_mod(191 ** 2) for f in st_.factors
                  if f.root_mod(191) == 159)
    assert deep[0] != deep[1]  # the double root separates at the next digit
    note = [f.note for f in st_.factors if f.root_mod(191) == 159][0]
    assert "split quadratic block" in note  # resolution recorded


def test_split_37_completely():
    st_ = local_splitting_type(QUINTIC, 37)
    assert st_.splits_completely
    assert sorted(f.root_mod(37) for f in st_.factors) == [4, 8, 12, 16, 18]


def test_split_quadratic_at_2():
    st_ = local_splitting_type(parse_poly("X^2-X+6"), 2)
    assert st_.splits_completely  # disc = -23 = 1 mod 8


def test_split_shifted_inert_cubic():
    # X^3 - 75X + 125 over Q_5: roots 5*z with z^3 - 3z + 1 inert mod 5
    st_ = local_splitting_type(parse_poly("X^3-75*X+125"), 5)
    assert len(st_.factors) == 1
    assert (st_.factors[0].e, st_.factors[0].f) == (1, 3)
    assert st_.all_unramified


def test_split_totally_ramified_shifted():
    # 23-curve cubic: X^3 - 529X + 12167 = 23^3 (z^3 - z + 1), z-cubic has
    # a double root mod 23 resolving into linear x ramified quadratic
    st_ = local_splitting_type(parse_poly("X^3-529*X+12167"), 23)
    kinds = sorted((f.e, f.f) for f in st_.factors)
    assert kinds == [(1, 1), (2, 1)]


def test_split_good_prime_matches_mod_p():
    for p in (7, 11, 13, 37, 73):
        st_ = local_splitting_type(QUINTIC, p)
        fac = factor_mod_p(fp_poly(QUINTIC, p))
        assert sorted(f.f for f in st_.factors) == sorted(g.degree for g, _ in fac)
        assert all(f.e == 1 for f in st_.factors)


def test_split_structural_invariant():
    for p in (2, 3, 5, 23, 37, 191, 941):
        st_ = local_splitting_type(QUINTIC, p)
        if not st_.has_unresolved():
            assert st_.degree == 5


def test_split_rejects_nonmonic():
    with pytest.raises(ValueError):
        local_splitting_type(RatPoly([1, 2]) * RatPoly([1, 2]), 5)
    with pytest.raises(ValueError):
        local_splitting_type(RatPoly([Fraction(1, 2), 0, 1]), 5)
