"""Tate's algorithm over Q_p: minimal model, Kodaira type, component group.

The full branch structure is implemented (no c4/c6 shortcuts), since the
additive cases at p = 2 and p = 3 matter here.  Outputs carry the geometric
component group together with the Frobenius action on it, which is what the
local descent machinery consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITY, legendre, valuation
from .elliptic import WeierstrassModel
from .poly import FpPoly, factor_mod_p


@dataclass(frozen=True)
class KodairaType:
    """'I0', ('I', nu), 'II', 'III', 'IV', ('I*', nu), 'IV*', 'III*', 'II*'."""

    letter: str  # 'I0' | 'I' | 'II' | 'III' | 'IV' | 'I*' | 'IV*' | 'III*' | 'II*'
    nu: int = 0

    def symbol(self) -> str:
        if self.letter == "I":
            return f"I{self.nu}"
        if self.letter == "I*":
            return f"I{self.nu}*"
        return self.letter

    @property
    def is_multiplicative(self):
        return self.letter == "I"

    @property
    def is_additive(self):
        return self.letter not in ("I0", "I")

    def __repr__(self):
        return self.symbol()


# geometric component groups: 'trivial', ('cyclic', n), 'klein4'


def geometric_component_group(kt: KodairaType):
    if kt.letter == "I0" or kt.letter in ("II", "II*"):
        return "trivial"
    if kt.letter == "I":
        return ("cyclic", kt.nu) if kt.nu > 1 else ("trivial" if kt.nu == 1 else "trivial")
    if kt.letter in ("III", "III*"):
        return ("cyclic", 2)
    if kt.letter in ("IV", "IV*"):
        return ("cyclic", 3)
    if kt.letter == "I*":
        if kt.nu % 2 == 1:
            return ("cyclic", 4)
        return "klein4"
    raise ValueError(kt)


def _num_components(kt: KodairaType) -> int:
    """Geometric components of the special fiber of the minimal model."""
    return {"I0": 1, "II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8,
            "II*": 9}.get(kt.letter) or (kt.nu if kt.letter == "I"
                                         else 5 + kt.nu)


@dataclass(frozen=True)
class ReductionData:
    p: int
    minimal_model: WeierstrassModel
    kodaira: KodairaType
    v_disc_min: int
    conductor_exponent: int
    geometric_component_group: object
    c_p: int
    split: object  # True / False / None (not applicable)
    frobenius_order_on_components: int

    def summary(self) -> dict:
        g = self.geometric_component_group
        return {
            "p": self.p,
            "kodaira": self.kodaira.symbol(),
            "v_disc_min": self.v_disc_min,
            "conductor_exponent": self.conductor_exponent,
            "component_group": (g if isinstance(g, str) else f"cyclic({g[1]})"),
            "c_p": self.c_p,
            "split": self.split,
            "frobenius_order": self.frobenius_order_on_components,
            "minimal_model": [str(a) for a in self.minimal_model.ainvs()],
        }


def _vp(x, p):
    return valuation(x, p)


def _red(x, p):
    """Residue of a p-integral rational mod p."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def _red_k(x, p, k):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p ** k) % p ** k


def _singular_point(m: WeierstrassModel, p: int):
    """The singular point of the reduction, as residues (x0, y0)."""
    if p == 2:
        a1, a2, a3, a4, a6 = (_red(a, 2) for a in m.ainvs())
        for x0 in range(2):
            for y0 in range(2):
                on = (y0 * y0 + a1 * x0 * y0 + a3 * y0
                      - (x0 ** 3 + a2 * x0 * x0 + a4 * x0 + a6)) % 2 == 0
                dx = (a1 * y0 + x0 * x0 + a4) % 2 == 0
                dy = (a1 * x0 + a3) % 2 == 0
                if on and dx and dy:
                    return x0, y0
        raise ArithmeticError("no singular point found mod 2")
    # p odd: x0 is the multiple root of 4x^3 + b2 x^2 + 2 b4 x + b6 (the
    # multiple root is unique, hence F_p-rational)
    B = FpPoly(p, (_red(m.b6, p), _red(2 * m.b4, p), _red(m.b2, p), 4 % p))
    for g, mult in factor_mod_p(B):
        if mult >= 2 and g.degree == 1:
            x0 = (-g.coeffs[0] * pow(g.coeffs[1], -1, p)) % p
            y0 = (-(_red(m.a1, p) * x0 + _red(m.a3, p)) * pow(2, -1, p)) % p
            return x0, y0
    raise ArithmeticError("no multiple root found mod p")


def _fp_quadratic_split(A, B, p):
    """Does Y^2 + A Y + B have a root in F_p (A, B residues)?"""
    if p == 2:
        return B % 2 == 0 or (1 + A + B) % 2 == 0
    disc = (A * A - 4 * B) % p
    return disc == 0 or legendre(disc, p) == 1


def tate_algorithm(m: WeierstrassModel, p: int) -> ReductionData:
    """Kodaira type, Tamagawa number and component-group data at p."""
    if m.disc == 0:
        raise ValueError("singular curve")
    # make the model p-integral
    while any(_vp(a, p) is not INFINITY and _vp(a, p) < 0 for a in m.ainvs()):
        m = m.transform(u=Fraction(1, p))

    while True:
        n = _vp(m.disc, p)
        if n == 0:
            return ReductionData(p, m, KodairaType("I0"), 0, 0, "trivial",
                                 1, None, 1)
        x0, y0 = _singular_point(m, p)
        m = m.transform(r=x0, t=y0)
        assert all(_vp(a, p) is INFINITY or _vp(a, p) >= 1
                   for a in (m.a3, m.a4, m.a6))

        if _vp(m.b2, p) == 0:
            # multiplicative: tangent directions T^2 + a1 T - a2
            if p == 2:
                split = _red(m.a2, 2) == 0  # T^2 + T + a2 splits iff a2 = 0
            else:
                split = legendre(_red(m.b2, p), p) == 1
            nu = n
            c = nu if split else (2 if nu % 2 == 0 else 1)
            kt = KodairaType("I", nu)
            frob = 1 if (split or nu <= 2) else 2
            return ReductionData(p, m, kt, n, 1, geometric_component_group(kt),
                                 c, split, frob)

        # additive reduction from here on
        if _vp(m.a6, p) < 2:
            kt = KodairaType("II")
            return ReductionData(p, m, kt, n, n, "trivial", 1, None, 1)
        if _vp(m.b8, p) < 3:
            kt = KodairaType("III")
            return ReductionData(p, m, kt, n, n - 1, ("cyclic", 2), 2, None, 1)
        if _vp(m.b6, p) < 3:
            A = _red(m.a3 / p, p)
            B = _red(-m.a6 / p ** 2, p)
            split = _fp_quadratic_split(A, B, p)
            kt = KodairaType("IV")
            c = 3 if split else 1
            return ReductionData(p, m, kt, n, n - 2, ("cyclic", 3), c,
                                 None, 1 if split else 2)

        # step 6 normalization: p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            if _red(m.a2, 2) == 1:
                m = m.transform(s=1)
            if _vp(m.a6, p) == 2:
                tfix = 2 * ((_red_k(m.a6, 2, 3) // 4) % 2)
                if tfix:
                    m = m.transform(t=tfix)
        else:
            inv2 = pow(2, -1, p)
            s = (-_red(m.a1, p) * inv2) % p
            if s:
                m = m.transform(s=s)
            t = (-_red_k(m.a3, p, 2) * pow(2, -1, p ** 2)) % p ** 2
            if t:
                m = m.transform(t=t)
        assert _vp(m.a1, p) >= 1 and _vp(m.a2, p) >= 1
        assert _vp(m.a3, p) >= 2 and _vp(m.a4, p) >= 2 and _vp(m.a6, p) >= 3

        # P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3) over F_p
        Pc = [_red(m.a6 / p ** 3, p), _red(m.a4 / p ** 2, p),
              _red(m.a2 / p, p), 1]
        fac = factor_mod_p(FpPoly(p, tuple(Pc)))
        mults = sorted(mlt for _, mlt in fac)
        if all(mlt == 1 for _, mlt in fac):
            # I0*: c = 1 + number of rational roots of P
            nroots = sum(1 for g, _ in fac if g.degree == 1)
            c = 1 + nroots
            kt = KodairaType("I*", 0)
            frob = {4: 1, 2: 2, 1: 3}[c]
            return ReductionData(p, m, kt, n, n - 4, "klein4", c, None, frob)

        if mults[-1] == 2:
            # I_nu* subprocedure: double root of P translated to T = 0
            r0 = next((-g.coeffs[0]) % p for g, mlt in fac
                      if mlt == 2 and g.degree == 1)
            m = m.transform(r=p * r0)
            assert _vp(m.a2, p) == 1 and _vp(m.a4, p) >= 3 and _vp(m.a6, p) >= 4
            k = 1
            while True:
                if k % 2 == 1:
                    mm = (k + 3) // 2
                    A = m.a3 / p ** mm
                    B = -m.a6 / p ** (k + 3)
                    disc = A * A - 4 * B
                    if _vp(disc, p) == 0:
                        split = _fp_quadratic_split(_red(A, p), _red(B, p), p)
                        c = 4 if split else 2
                        kt = KodairaType("I*", k)
                        return ReductionData(
                            p, m, kt, n, n - 4 - k,
                            geometric_component_group(kt), c, None,
                            1 if c == 4 else 2)
                    # double root: deepen a3, a6
                    if p == 2:
                        ybar = _red(B, 2)
                    else:
                        ybar = (-_red(A, p) * pow(2, -1, p)) % p
                    if ybar:
                        m = m.transform(t=ybar * p ** mm)
                else:
                    mm = (k + 4) // 2
                    a = m.a2 / p
                    b = m.a4 / p ** mm
                    cq = m.a6 / p ** (k + 3)
                    disc = b * b - 4 * a * cq
                    if _vp(disc, p) == 0:
                        ra, rb, rc = _red(a, p), _red(b, p), _red(cq, p)
                        if p == 2:
                            split = rc % 2 == 0 or (ra + rb + rc) % 2 == 0
                        else:
                            split = legendre(_red(disc, p), p) == 1
                        c = 4 if split else 2
                        kt = KodairaType("I*", k)
                        return ReductionData(
                            p, m, kt, n, n - 4 - k,
                            geometric_component_group(kt), c, None,
                            1 if c == 4 else 2)
                    if p == 2:
                        xbar = (_red(cq, 2) * _red(a, 2)) % 2
                    else:
                        xbar = (-_red(b, p) * pow(2 * _red(a, p), -1, p)) % p
                    if xbar:
                        m = m.transform(r=xbar * p ** ((k + 2) // 2))
                k += 1
                if k > n:
                    raise ArithmeticError("runaway I_nu* subprocedure")
            # not reached

        # triple root: translate to T = 0
        r0 = next((-g.coeffs[0]) % p for g, mlt in fac if mlt == 3)
        m = m.transform(r=p * r0)
        assert _vp(m.a2, p) >= 2 and _vp(m.a4, p) >= 3 and _vp(m.a6, p) >= 4

        A = m.a3 / p ** 2
        B = -m.a6 / p ** 4
        disc = A * A - 4 * B
        if _vp(disc, p) == 0:
            split = _fp_quadratic_split(_red(A, p), _red(B, p), p)
            kt = KodairaType("IV*")
            c = 3 if split else 1
            return ReductionData(p, m, kt, n, n - 6, ("cyclic", 3), c,
                                 None, 1 if split else 2)
        if p == 2:
            ybar = _red(B, 2)
        else:
            ybar = (-_red(A, p) * pow(2, -1, p)) % p
        if ybar:
            m = m.transform(t=ybar * p ** 2)
        assert _vp(m.a3, p) >= 3 and _vp(m.a6, p) >= 5

        if _vp(m.a4, p) == 3:
            kt = KodairaType("III*")
            return ReductionData(p, m, kt, n, n - 7, ("cyclic", 2), 2, None, 1)
        if _vp(m.a6, p) == 5:
            kt = KodairaType("II*")
            return ReductionData(p, m, kt, n, n - 8, "trivial", 1, None, 1)

        # non-minimal: rescale and start over
        m = m.transform(u=p)


def component_group_over(rd: ReductionData, k: int):
    """E(M)/E_0(M) for the unramified extension M of degree k, with the
    action of the Frobenius generator tau of Gal(M/Q_p) on it.

    Returns (group, action) with group 'trivial' | ('cyclic', n) | 'klein4'
    and action one of 'trivial', 'inversion', 'order2', 'order3'.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    geo = rd.geometric_component_group
    if geo == "trivial":
        return "trivial", "trivial"
    if isinstance(geo, tuple) and geo[0] == "cyclic":
        n = geo[1]
        eps_nontrivial = (rd.split is False) if rd.kodaira.is_multiplicative \
            else (rd.frobenius_order_on_components == 2)
        if not eps_nontrivial or k % 2 == 0:
            # full group realized over M
            if eps_nontrivial and n > 2:
                return ("cyclic", n), "inversion"
            return ("cyclic", n), "trivial"
        # fixed points of -1 on Z/n
        if n % 2 == 0:
            return ("cyclic", 2), "trivial"
        return "trivial", "trivial"
    # klein4
    o = rd.frobenius_order_on_components
    if o == 1:
        return "klein4", "trivial"
    if o == 2:
        if k % 2 == 0:
            return "klein4", "order2"
        return ("cyclic", 2), "trivial"
    # o == 3
    if k % 3 == 0:
        return "klein4", "order3"
    return "trivial", "trivial"


def group_order(g) -> int:
    if g == "trivial":
        return 1
    if g == "klein4":
        return 4
    return g[1]
