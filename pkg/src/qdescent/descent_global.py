"""Global assembly: divisibility bounds, class-group input, rank ledgers.

The global quotients S/I and C/I inject into the product of their local
counterparts; summing F_2-ranks of the local quotients over the relevant
places gives upper bounds.  Combining the C-side bound with class-group
2-rank input and a point-independence lower bound yields an interval for
the 2-Selmer rank.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (REAL_PLACE, factor_integer, finite, is_prime,
                    squarefree_part, valuation)
from .descent_local import (TWO_MAP, c2_order, i2_order, local_descent_report,
                            s2_order_two_map, s2_real)
from .elliptic import WeierstrassModel, two_division_cubic_integral
from .jacobian import (HyperellipticCurve, independence_rank,
                       local_intersection_rank, local_selmer_rank_hyper,
                       local_torsion_rank, xt_image)
from .poly import RatPoly, factor_over_Z, fp_poly, factor_mod_p, parse_poly
from .tate import tate_algorithm


def bad_primes(m: WeierstrassModel) -> list[int]:
    """Primes of bad reduction: disc support filtered through minimality."""
    supp = [p for p, _ in factor_integer(m.disc.numerator).factors]
    supp += [p for p, _ in factor_integer(m.disc.denominator).factors
             if p not in supp]
    out = []
    for p in sorted(set(supp)):
        if tate_algorithm(m, p).kodaira.letter != "I0":
            out.append(p)
    return out


def divis_bounds(m: WeierstrassModel, phi=TWO_MAP):
    """Upper bounds for rank S/I and rank C/I (2-map), with breakdown.

    Returns (rank_S_over_I, rank_C_over_I, breakdown) where breakdown lists
    per-place dictionaries.  The S/I sum runs over the infinite place and
    the divisors of 2 * conductor; the C/I sum over conductor primes.
    """
    if phi != TWO_MAP:
        raise ValueError("divisibility bounds are stated for the 2-map")
    bp = bad_primes(m)
    places = sorted(set(bp) | {2})
    breakdown = []
    rank_s = 0
    rank_c = 0
    # real place
    s_inf = s2_real(m, TWO_MAP)
    a2_inf = 4 if m.disc > 0 else 2
    rank_s += _log2(s_inf)
    breakdown.append({"place": "oo", "C": 1, "S": s_inf, "I": 1,
                      "torsion2": a2_inf, "rank_S_over_I": _log2(s_inf),
                      "rank_C_over_I": 0})
    for p in places:
        rep = local_descent_report(m, TWO_MAP, finite(p))
        rs = _log2(rep.order_S // rep.order_I)
        rc = _log2(rep.order_C // rep.order_I)
        rank_s += rs
        if p in bp:
            rank_c += rc
        breakdown.append({"place": p, "C": rep.order_C, "S": rep.order_S,
                          "I": rep.order_I, "kodaira": rep.kodaira,
                          "torsion2": rep.order_C,
                          "rank_S_over_I": rs,
                          "rank_C_over_I": rc if p in bp else 0})
    # internal consistency with the product over #E[2]/#I (the two product
    # forms agree after redistributing the factors at 2 and infinity)
    prod_a = a2_inf
    prod_b = s_inf
    for row in breakdown[1:]:
        prod_a *= row["torsion2"] // row["I"]
        prod_b *= row["S"] // row["I"]
    assert prod_a == prod_b, "divisibility product forms disagree"
    return rank_s, rank_c, breakdown


def _log2(n: int) -> int:
    assert n & (n - 1) == 0, f"{n} is not a power of 2"
    return n.bit_length() - 1


# ---------------------------------------------------------------------------
# quadratic class groups by genus theory


def fundamental_discriminant(d: int) -> int:
    d = squarefree_part(d)
    return d if d % 4 == 1 else 4 * d


def genus_2rank_quadratic(d: int) -> int:
    """2-rank of the narrow class group of Q(sqrt d), d squarefree != 0, 1.

    Genus theory: t - 1, with t the number of primes dividing the
    fundamental discriminant.
    """
    d = int(d)
    if d in (0, 1):
        raise ValueError("d must be squarefree and different from 0, 1")
    if squarefree_part(d) != d:
        raise ValueError("d must be squarefree")
    D = fundamental_discriminant(d)
    t = len(factor_integer(abs(D)).factors)
    return t - 1


def fundamental_unit_norm(d: int, bound: int = 10 ** 6) -> int:
    """Norm (+1 or -1) of the fundamental unit of Q(sqrt d), d > 1 squarefree.

    Continued-fraction criterion: the norm is -1 iff the period of sqrt(d)
    is odd.  Raises if the period exceeds the bound.
    """
    if d <= 1:
        raise ValueError("d must be > 1")
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise ValueError("d must not be a square")
    m, q, a = 0, 1, a0
    period = 0
    while period <= bound:
        m = q * a - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period += 1
        if q == 1 and a == 2 * a0:
            break
    else:
        raise ArithmeticError("continued-fraction bound exceeded")
    return -1 if period % 2 == 1 else 1


def narrow_equals_wide(d: int) -> bool:
    """Does the narrow class group equal the wide one for Q(sqrt d)?"""
    if d < 0:
        return True
    return fundamental_unit_norm(d) == -1


# ---------------------------------------------------------------------------
# class data


@dataclass(frozen=True)
class ClassRecord:
    poly: RatPoly
    two_rank: int
    narrow_eq_wide: bool
    provenance: str

    def as_line(self) -> str:
        return (f"{self.poly} | {self.two_rank} | "
                f"{'yes' if self.narrow_eq_wide else 'no'} | {self.provenance}")


def parse_class_data(text: str) -> list[ClassRecord]:
    """One record per line: "poly | 2rank | narrow_eq_wide | source"."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [t.strip() for t in line.split("|")]
        if len(parts) != 4:
            raise ValueError(f"bad class-data line: {line!r}")
        poly = parse_poly(parts[0])
        rec = ClassRecord(poly, int(parts[1]),
                          parts[2].lower() in ("yes", "true", "1"), parts[3])
        if poly.degree == 2:
            dsc = __import__("qdescent.poly", fromlist=["discriminant"]) \
                .discriminant(poly)
            d = squarefree_part(dsc.numerator * dsc.denominator)
            expected = genus_2rank_quadratic(d)
            if rec.two_rank != expected:
                raise ValueError(
                    f"quadratic record {parts[0]}: 2-rank {rec.two_rank} "
                    f"contradicts genus theory ({expected})")
            rec = ClassRecord(poly, expected, narrow_equals_wide(d),
                              "computed-by-genus-theory")
        out.append(rec)
    return out


def quadratic_class_record(d: int) -> ClassRecord:
    """Synthesize the record for Q(sqrt d) by genus theory."""
    return ClassRecord(RatPoly([-d, 0, 1]), genus_2rank_quadratic(d),
                       narrow_equals_wide(d), "computed-by-genus-theory")


def c2_rank_from_class_data(f: RatPoly, records: list[ClassRecord]) -> int:
    """F_2-rank of the global unramified group from class-group input.

    Supported patterns (base field Q): a single field F (f irreducible:
    rank = 2-rank of Cl(F)) and one linear factor times k conjugate-field
    factors (rank = sum of the constituents' 2-ranks).
    """
    factors = factor_over_Z(f.monic())
    nonlinear = [h for h in factors if h.degree >= 2]
    linear = [h for h in factors if h.degree == 1]
    if len(factors) == 1:
        rec = _find_record(records, factors[0])
        return rec.two_rank
    if len(linear) != 1:
        raise ValueError("pattern outside the supported shapes: need one "
                         "linear factor (or irreducible f); explicit "
                         "unramified generators are not supported")
    total = 0
    for h in nonlinear:
        rec = _find_record(records, h)
        total += rec.two_rank
    return total


def _find_record(records, h: RatPoly) -> ClassRecord:
    for rec in records:
        if rec.poly.monic() == h.monic():
            return rec
    if h.degree == 2:
        from .poly import discriminant

        dsc = discriminant(h)
        return quadratic_class_record(squarefree_part(dsc.numerator
                                                      * dsc.denominator))
    raise ValueError(f"no class-group record supplied for {h} "
                     "(degree >= 3 fields need external input)")


# ---------------------------------------------------------------------------
# the ledger


@dataclass
class GlobalLedger:
    curve: str
    kind: str  # 'elliptic' | 'hyperelliptic'
    local_reports: list
    bound_rank_S_over_I: int
    bound_rank_S_over_I_refined: int
    bound_rank_C_over_I: int
    class_side_rank: object  # int or None
    class_side_provenance: str
    points_rank_lower: object  # int or None
    torsion_two_rank: int
    selmer_rank_interval: tuple
    narrow_refinement_applied: bool
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {
            "curve": self.curve,
            "kind": self.kind,
            "local_reports": self.local_reports,
            "bound_rank_S_over_I": self.bound_rank_S_over_I,
            "bound_rank_S_over_I_refined": self.bound_rank_S_over_I_refined,
            "bound_rank_C_over_I": self.bound_rank_C_over_I,
            "class_side_rank": self.class_side_rank,
            "class_side_provenance": self.class_side_provenance,
            "points_rank_lower": self.points_rank_lower,
            "torsion_two_rank": self.torsion_two_rank,
            "selmer_rank_interval": list(self.selmer_rank_interval),
            "narrow_refinement_applied": self.narrow_refinement_applied,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "GlobalLedger":
        d = json.loads(text)
        return GlobalLedger(
            d["curve"], d["kind"], d["local_reports"],
            d["bound_rank_S_over_I"], d["bound_rank_S_over_I_refined"],
            d["bound_rank_C_over_I"], d["class_side_rank"],
            d["class_side_provenance"], d["points_rank_lower"],
            d["torsion_two_rank"], tuple(d["selmer_rank_interval"]),
            d["narrow_refinement_applied"], d["notes"])

    def table(self) -> str:
        lines = [f"curve: {self.curve} ({self.kind})"]
        hdr = f"{'place':>8} {'C':>4} {'S':>4} {'I':>4}  notes"
        lines.append(hdr)
        for row in self.local_reports:
            lines.append(f"{str(row.get('place')):>8} {row.get('C', '-'):>4} "
                         f"{row.get('S', '-'):>4} {str(row.get('I', '-')):>4}  "
                         f"{row.get('kodaira', '')}")
        lines.append(f"rank bound S/I: {self.bound_rank_S_over_I}"
                     f" (refined: {self.bound_rank_S_over_I_refined})")
        lines.append(f"rank bound C/I: {self.bound_rank_C_over_I}")
        lines.append(f"class-side rank: {self.class_side_rank} "
                     f"[{self.class_side_provenance}]")
        lines.append(f"points rank lower bound: {self.points_rank_lower}")
        lines.append(f"Selmer rank interval: {list(self.selmer_rank_interval)}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def assemble_ledger_elliptic(m: WeierstrassModel, records=None,
                             points=None) -> GlobalLedger:
    records = records or []
    notes = []
    rank_s, rank_c, breakdown = divis_bounds(m, TWO_MAP)
    inf_contrib = breakdown[0]["rank_S_over_I"]
    narrow_ok = bool(records) and all(r.narrow_eq_wide for r in records)
    refined = rank_s - inf_contrib if narrow_ok else rank_s
    if narrow_ok and inf_contrib:
        notes.append("narrow = wide certified: infinite-place contribution "
                     "dropped from the S/I bound")
    cubic = two_division_cubic_integral(m)
    class_side = None
    prov = "not supplied"
    if records:
        try:
            class_side = c2_rank_from_class_data(cubic, records)
            prov = "; ".join(sorted({r.provenance for r in records}))
        except ValueError as exc:
            notes.append(f"class data not applicable: {exc}")
    tors2 = sum(1 for h in factor_over_Z(cubic) if h.degree == 1)
    tors2 = _log2({0: 1, 1: 2, 3: 4}[tors2])
    pts_rank = None
    if points:
        hc = HyperellipticCurve(cubic)
        prs = _independence_primes(cubic, 2)
        upts = [("rational", 4 * Fraction(x), None) for x in points]
        pts_rank, _ = independence_rank(hc, upts, prs)
        notes.append(f"independence primes: {prs}")
    lo = 0
    if class_side is not None:
        lo = max(lo, class_side - rank_c)
    if pts_rank is not None:
        lo = max(lo, pts_rank + tors2)
    hi = (class_side + refined) if class_side is not None else None
    reports = breakdown
    return GlobalLedger(str(m), "elliptic", reports, rank_s, refined, rank_c,
                        class_side, prov, pts_rank, tors2,
                        (lo, hi), narrow_ok, notes)


def _independence_primes(f: RatPoly, count: int, avoid=()):
    """Smallest odd primes where f splits completely (full local data)."""
    from .poly import discriminant

    dsc = discriminant(f)
    out = []
    p = 3
    while len(out) < count and p < 10 ** 4:
        if is_prime(p) and valuation(dsc, p) == 0 and p not in avoid:
            fac = factor_mod_p(fp_poly(f, p))
            if all(g.degree == 1 and mult == 1 for g, mult in fac):
                out.append(p)
        p += 2
    if len(out) < count:
        raise ArithmeticError("could not find split primes for independence")
    return out


def assemble_ledger_hyper(c: HyperellipticCurve, records=None,
                          points=None, indep_primes=None) -> GlobalLedger:
    records = records or []
    points = points or []
    notes = []
    g = c.genus
    bp = c.bad_primes()
    places = [REAL_PLACE] + [finite(p) for p in sorted(set(bp) | {2})]
    reports = []
    rank_s_bound = 0
    rank_c_bound = 0
    inf_contrib = 0
    for v in places:
        s_rank = local_selmer_rank_hyper(c, v)
        if v.is_real:
            i_rank, complete = 0, True
            c_rank = 0
        else:
            c_rank = local_torsion_rank(c, v)
            if c_rank == 0:
                i_rank, complete = 0, True
            else:
                i_rank, complete = local_intersection_rank(c, points, v)
        contrib = s_rank - i_rank
        if not complete:
            notes.append(f"I at {v!r} is only a lower bound (span incomplete);"
                         " the S/I contribution stays an upper bound")
        rank_s_bound += contrib
        if v.is_real:
            inf_contrib = contrib
        elif v.p in bp:
            rank_c_bound += c_rank - i_rank
        reports.append({"place": repr(v), "C": 2 ** c_rank, "S": 2 ** s_rank,
                        "I": (2 ** i_rank if complete else
                              f">={2 ** i_rank}"),
                        "kodaira": "-"})
    narrow_ok = bool(records) and all(r.narrow_eq_wide for r in records)
    refined = rank_s_bound - inf_contrib if narrow_ok else rank_s_bound
    if narrow_ok and inf_contrib:
        notes.append("narrow = wide certified: infinite-place contribution "
                     "dropped from the S/I bound")
    class_side = None
    prov = "not supplied"
    if records:
        try:
            class_side = c2_rank_from_class_data(c.f, records)
            prov = "; ".join(sorted({r.provenance for r in records}))
        except ValueError as exc:
            notes.append(f"class data not applicable: {exc}")
    tors2 = len(factor_over_Z(c.f)) - 1
    pts_rank = None
    if points:
        prs = indep_primes or _independence_primes(c.f, 2)
        pts_rank, _ = independence_rank(c, points, prs)
        notes.append(f"independence primes: {prs}")
    lo = 0
    if class_side is not None:
        lo = max(lo, class_side - rank_c_bound)
    if pts_rank is not None:
        lo = max(lo, pts_rank + tors2)
    hi = (class_side + refined) if class_side is not None else None
    return GlobalLedger(str(c.f), "hyperelliptic", reports, rank_s_bound,
                        refined, rank_c_bound, class_side, prov, pts_rank,
                        tors2, (lo, hi), narrow_ok, notes)
