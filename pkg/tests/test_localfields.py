from fractions import Fraction

import pytest

from qdescent.localfields import (EtaleAlgebra, isolate_real_roots,
                                  span_closure, span_rank)
from qdescent.poly import parse_poly

QUINTIC = parse_poly("X^5+16*X^4-274*X^3+817*X^2+178*X+1")


def sym_odd(entry):
    """(v_parity, qr_bit) of a component class at an odd prime."""
    if entry.kind == "ramified":
        return ("ram", entry.v_parity)
    assert entry.unit[0] == "qr"
    return (entry.v_parity, entry.unit[1])


# paper symbols at odd p: 1 -> (0,0); n (non-residue) -> (0,1);
# pi -> (1,0); n*pi -> (1,1)
ONE, NR, PI, NRPI = (0, 0), (0, 1), (1, 0), (1, 1)


def row_of_point(alg, x):
    return tuple(sym_odd(e) for e in alg.image_of_affine(Fraction(x)).entries)


def row_of_root(alg, i):
    return tuple(sym_odd(e) for e in alg.image_of_torsion_root(i).entries)


def test_example_II_table_at_191():
    alg = EtaleAlgebra(QUINTIC, 191)
    roots = [f.root_mod(191) for f in alg.pieces]
    assert roots == [5, 6, 37, 159, 159]
    # rational point rows, paper order of columns x-5, x-6, x-37, x-a4, x-a5
    assert row_of_point(alg, -17) == (ONE, NR, NR, ONE, ONE)
    assert row_of_point(alg, -9) == (ONE, NR, NR, ONE, ONE)
    assert row_of_point(alg, -6) == (ONE, NR, NR, ONE, ONE)
    assert row_of_point(alg, -2) == (ONE, NR, NR, ONE, ONE)
    assert row_of_point(alg, 0) == (NR, NR, ONE, ONE, ONE)
    assert row_of_point(alg, 4) == (NR, NR, ONE, ONE, ONE)
    # torsion rows
    assert row_of_root(alg, 0) == (ONE, NR, NR, NR, NR)
    assert row_of_root(alg, 1) == (ONE, ONE, ONE, NR, NR)
    assert row_of_root(alg, 2) == (ONE, NR, NR, ONE, ONE)
    r4 = row_of_root(alg, 3)
    r5 = row_of_root(alg, 4)
    assert r4 == r5
    assert r4[:3] == (ONE, ONE, NR)
    assert {r4[3], r4[4]} == {PI, NRPI}  # pi and -pi up to block labeling


def test_example_II_table_at_37():
    alg = EtaleAlgebra(QUINTIC, 37)
    roots = [f.root_mod(37) for f in alg.pieces]
    assert roots == [4, 8, 12, 16, 18]
    assert row_of_point(alg, -17) == (ONE, ONE, NR, ONE, NR)
    assert row_of_point(alg, -9) == (NR, NR, ONE, ONE, ONE)
    assert row_of_point(alg, -6) == (ONE, NR, NR, NR, NR)
    assert row_of_point(alg, 0) == (ONE, NR, ONE, ONE, NR)
    # the published row for (-2) reads 2,1,1,1,2, but the paper's own
    # relation (-2) = (-9) + (-6) forces 2,1,2,2,2 (Euler: 23 and 19 are
    # non-residues mod 37); the printed entries 3,4 are typos
    assert row_of_point(alg, -2) == (NR, ONE, NR, NR, NR)
    row4 = row_of_point(alg, 4)
    assert row4 == (ONE, ONE, NR, ONE, NR)  # v(4 - a1) = 2, unit a residue
    # relations the paper asserts in J(Q_37)/2J(Q_37)
    assert row_of_point(alg, 4) == row_of_point(alg, -17)
    m_96 = tuple((a[0] + b[0]) % 2 for a, b in
                 zip(row_of_point(alg, -9), row_of_point(alg, -6)))
    prod = tuple(((a[0] + b[0]) % 2, (a[1] + b[1]) % 2) for a, b in
                 zip(row_of_point(alg, -9), row_of_point(alg, -6)))
    assert prod == row_of_point(alg, -2)


def test_example_II_table_at_73():
    alg = EtaleAlgebra(QUINTIC, 73)
    # paper columns x+26, x+19, x+2, x-13, x-18 i.e. roots 47, 54, 71, 13, 18;
    # our components sort by ascending residue: 13, 18, 47, 54, 71
    roots = [f.root_mod(73) for f in alg.pieces]
    assert roots == [13, 18, 47, 54, 71]
    perm = [2, 3, 4, 0, 1]  # paper column order within our order

    def paper_row(x):
        r = row_of_point(alg, x)
        return tuple(r[i] for i in perm)

    assert paper_row(-17) == (ONE, ONE, NR, NR, ONE)
    assert paper_row(-9) == (NR, NR, NR, NR, ONE)
    assert paper_row(-6) == (NR, NR, ONE, ONE, ONE)
    assert paper_row(0) == (NR, ONE, ONE, NR, ONE)
    assert paper_row(-2) == (ONE, NR, NR, NR, NR)
    assert paper_row(4) == (NR, ONE, ONE, ONE, NR)


def test_example_II_real_place():
    alg = EtaleAlgebra(QUINTIC, 0)
    assert alg.n_real == 5 and alg.n_complex == 0
    signs = lambda x: tuple(e.unit[0] for e in
                            alg.image_of_affine(Fraction(x)).entries)
    assert signs(-2) == (1, -1, -1, -1, -1)
    assert signs(0) == (1, 1, 1, -1, -1)


def test_real_root_isolation():
    ivs = isolate_real_roots(QUINTIC)
    assert len(ivs) == 5
    # paper: one root in (-28,-27), two in (-1,0), one in (5,6), one in (6,7)
    assert QUINTIC.eval(-28) * QUINTIC.eval(-27) < 0
    assert QUINTIC.eval(5) * QUINTIC.eval(6) < 0
    assert QUINTIC.eval(6) * QUINTIC.eval(7) < 0
    # two sign-change-free roots in (-1, 0): check via the isolation itself
    inside = [iv for iv in ivs if iv[0] >= -2 and iv[1] <= 1]
    for a, b in ivs:
        assert QUINTIC.eval(a) * QUINTIC.eval(b) < 0


def test_norm_kernel_condition():
    # each table row satisfies the kernel-of-norm condition
    for p in (37, 73, 191):
        alg = EtaleAlgebra(QUINTIC, p)
        for x in (-17, -9, -6, -2, 0, 4):
            assert alg.norm_class_is_square(Fraction(x))
        # torsion rows: product of all norms is disc-like, checked via the
        # vector itself multiplying to a norm-square; verified by doubling
        for i in range(alg.n_comp):
            v = alg.image_of_torsion_root(i)
            assert (v * v).is_trivial()


def test_additivity_alpha5_row():
    # image(a5) = image(a1)*image(a2)*image(a3)*image(a4) at 191
    alg = EtaleAlgebra(QUINTIC, 191)
    prod = alg.image_of_torsion_root(0)
    for i in (1, 2, 3):
        prod = prod * alg.image_of_torsion_root(i)
    assert prod == alg.image_of_torsion_root(4)


def test_span_at_191_and_2():
    alg = EtaleAlgebra(QUINTIC, 191)
    vs = [alg.image_of_torsion_root(0), alg.image_of_torsion_root(3),
          alg.image_of_affine(Fraction(-2)), alg.image_of_affine(Fraction(0))]
    assert span_rank(vs) == 4  # the paper's basis of J(Q_191)/2J(Q_191)
    unram = [v for v in span_closure(vs) if v.is_unramified()]
    assert len(unram) == 2 ** 3  # I^2(Q_191, J) has rank 3

    alg2 = EtaleAlgebra(QUINTIC, 2)
    vs2 = [alg2.image_of_affine(Fraction(x)) for x in (-17, -9, -6, -2, 0, 4)]
    assert span_rank(vs2) <= 2  # S^2(Q_2, J) has rank 2
    # none of the nontrivial span elements is unramified: C^2(Q_2,J) trivial
    assert sum(1 for v in span_closure(vs2) if v.is_unramified()) == 1


def test_unramified_images_at_2():
    alg2 = EtaleAlgebra(QUINTIC, 2)
    im = lambda x: alg2.image_of_affine(Fraction(x))
    # the four sums of the paper must be unramified at 2
    assert (im(-2) * im(-6)).is_unramified()
    assert (im(-2) * im(-9)).is_unramified()
    assert (im(-2) * im(-17)).is_unramified()
    assert (im(0) * im(4)).is_unramified()
