"""Odd-degree hyperelliptic descent: the X - T map and its local images.

A curve Y^2 = f with f monic separable of odd degree d has Jacobian J of
dimension g = (d-1)/2.  J(Q_v)/2J(Q_v) embeds into the kernel of the norm
from (Q_v[T]/f)^* / squares, by D = sum n_i R_i  |->  prod (X(R_i) - T)^n_i.
Images are square-class vectors over the local etale components; ranks of
spans and their unramified parts give local Selmer and intersection data.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .arith import Place, REAL_PLACE, finite, rational_sqrt, valuation
from .localfields import EtaleAlgebra, SqVector, identity_like, span_closure
from .poly import RatPoly, UnresolvedSplitting, discriminant, parse_poly


@dataclass(frozen=True)
class HyperellipticCurve:
    f: RatPoly

    def __post_init__(self):
        if not self.f.is_monic() or not self.f.is_integral():
            raise ValueError("model must be monic and integral")
        if self.f.degree < 3 or self.f.degree % 2 == 0:
            raise ValueError("degree must be odd and at least 3")
        if discriminant(self.f) == 0:
            raise ValueError("polynomial must be separable")

    @property
    def genus(self) -> int:
        return (self.f.degree - 1) // 2

    def bad_primes(self) -> list[int]:
        from .arith import factor_integer

        d = discriminant(self.f)
        return [p for p, _ in factor_integer(d.numerator).factors]


# descent points: ("rational", x, y) | ("alpha", i) | ("sum", parts)


def parse_descent_point(line: str):
    line = line.strip()
    if not line or line.startswith("#"):
        return None
    if line.startswith("sum:"):
        parts = [t.strip() for t in line[4:].split("+")]
        return ("sum", tuple(parse_descent_point(t) for t in parts))
    if line.startswith("alpha:"):
        return ("alpha", int(line[6:]))
    m = re.fullmatch(r"\(([^,]+),([^)]+)\)", line)
    if m:
        return ("rational", Fraction(m.group(1)), Fraction(m.group(2)))
    return ("rational", Fraction(line), None)


def point_label(pt) -> str:
    kind = pt[0]
    if kind == "rational":
        return f"({pt[1]})"
    if kind == "alpha":
        return f"(alpha_{pt[1]})"
    return "+".join(point_label(q) for q in pt[1])


def _algebra(c: HyperellipticCurve, v: Place) -> EtaleAlgebra:
    return EtaleAlgebra(c.f, 0 if v.is_real else v.p)


def xt_image(c: HyperellipticCurve, D, v: Place,
             alg: EtaleAlgebra | None = None) -> SqVector:
    """Square-class vector of the divisor class D at the place v."""
    if alg is None:
        alg = _algebra(c, v)
    kind = D[0]
    if kind == "rational":
        x = Fraction(D[1])
        fx = c.f.eval(x)
        if fx == 0:
            raise ValueError("support meets y = 0: use the torsion rule")
        y = D[2]
        if y is not None and y * y != fx:
            raise ValueError("point not on the curve")
        if y is None and rational_sqrt(fx) is None:
            raise ValueError(f"f({x}) is not a rational square")
        return alg.image_of_affine(x)
    if kind == "alpha":
        i = D[1] - 1
        if v.is_real:
            if not 0 <= i < alg.n_real:
                raise ValueError("torsion index outside the real roots")
        elif not 0 <= i < alg.n_comp:
            raise ValueError("torsion index outside the local components")
        return alg.image_of_torsion_root(i)
    if kind == "sum":
        out = None
        for part in D[1]:
            w = xt_image(c, part, v, alg)
            out = w if out is None else out * w
        return out
    raise ValueError(f"unknown descent point {D!r}")


# ---------------------------------------------------------------------------
# rendering


def render_entry(entry, p: int) -> str:
    """Human-readable symbol for one component class (pi = p itself)."""
    if entry.kind == "real":
        return "1" if entry.unit[0] == 1 else "-1"
    if entry.kind == "complex":
        return "1"
    if entry.kind == "ramified":
        return "sq" if entry.v_parity == 0 else "pi*sq"
    if entry.unit[0] == "qr":
        u = entry.unit[1]
        if entry.v_parity == 0:
            return "1" if u == 0 else "n"
        return "pi" if u == 0 else "n*pi"
    w_triv = all(cc == 0 for cc in entry.unit[1])
    ulab = "1" if (w_triv and entry.unit[2] == 0) else \
        ("u" if w_triv else f"w{''.join(str(cc) for cc in entry.unit[1])}t{entry.unit[2]}")
    return ulab if entry.v_parity == 0 else f"pi*{ulab}"


def image_table(c: HyperellipticCurve, points, v: Place):
    """Rows of square-class vectors with the paper's conventions.

    Returns (labels, rows) with rows = (point label, vector, symbols).
    At odd p the symbol 'n' denotes a fixed quadratic non-residue and 'pi'
    a prime element; comparisons are up to square-class equality.
    """
    alg = _algebra(c, v)
    p = 0 if v.is_real else v.p
    rows = []
    for pt in points:
        vec = xt_image(c, pt, v, alg)
        rows.append((point_label(pt), vec,
                     tuple(render_entry(e, p) for e in vec.entries)))
    return alg.labels(), rows


# ---------------------------------------------------------------------------
# ranks


def local_selmer_rank_hyper(c: HyperellipticCurve, v: Place) -> int:
    """F_2-rank of J(Q_v)/2J(Q_v)."""
    g = c.genus
    if v.is_real:
        alg = _algebra(c, v)
        return alg.n_real + alg.n_complex - 1 - g
    alg = _algebra(c, v)
    r = alg.n_comp
    return (r - 1) + (g if v.p == 2 else 0)


def local_torsion_rank(c: HyperellipticCurve, v: Place) -> int:
    """F_2-rank of J(Q_v)[2] (the local C-group order at finite places)."""
    alg = _algebra(c, v)
    if v.is_real:
        return alg.n_real + alg.n_complex - 1
    return alg.n_comp - 1


def local_intersection_rank(c: HyperellipticCurve, points, v: Place):
    """(rank of span(images) ∩ unramified subspace, completeness flag).

    When the span of the supplied images fills J(Q_v)/2J(Q_v) the value is
    exactly the rank of the local intersection group; otherwise it is a
    lower bound.
    """
    if v.is_real:
        raise ValueError("intersection rank is a finite-place computation")
    alg = _algebra(c, v)
    vecs = [xt_image(c, pt, v, alg) for pt in points]
    span = span_closure(vecs) if vecs else {alg.identity_vector()}
    n_unram = sum(1 for w in span if w.is_unramified())
    assert n_unram & (n_unram - 1) == 0
    rank = n_unram.bit_length() - 1
    span_rank = len(span).bit_length() - 1
    complete = span_rank == local_selmer_rank_hyper(c, v)
    return rank, complete


def unramified_images_check(c: HyperellipticCurve, points, v: Place):
    """Per-point verdicts: is the image unramified at v?"""
    alg = _algebra(c, v)
    out = []
    for pt in points:
        vec = xt_image(c, pt, v, alg)
        out.append((point_label(pt), vec.is_unramified()))
    return out


def independence_rank(c: HyperellipticCurve, points, primes):
    """(lower bound for the rank of the subgroup generated in J(Q)/2J(Q),
    relation analysis per prime).

    For each prime the set of F_2-relations among the images is computed by
    exhaustive subset enumeration; a relation surviving every prime might
    be a genuine one, so the bound is #points - dim(common relations).
    """
    n = len(points)
    if n > 16:
        raise ValueError("too many points for exhaustive relation search")
    analysis = {}
    common = None
    for p in primes:
        v = finite(p)
        alg = _algebra(c, v)
        vecs = [xt_image(c, pt, v, alg) for pt in points]
        ident = identity_like(vecs[0]) if vecs else None
        rels = set()
        for mask in range(2 ** n):
            acc = ident
            for i in range(n):
                if mask >> i & 1:
                    acc = acc * vecs[i]
            if acc is not None and acc.is_trivial():
                rels.add(mask)
        analysis[p] = {
            "relations": sorted(rels),
            "nontrivial_images": [point_label(points[i]) for i in range(n)
                                  if not vecs[i].is_trivial()],
        }
        common = rels if common is None else (common & rels)
    if common is None:
        common = {0}
    k = len(common)
    assert k & (k - 1) == 0
    bound = n - (k.bit_length() - 1)
    analysis["common_relations"] = sorted(common)
    analysis["rank_lower_bound"] = bound
    return bound, analysis
