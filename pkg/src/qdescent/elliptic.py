"""Weierstrass models, point arithmetic, isogenies, and formal-group data.

Models are exact ([a1,a2,a3,a4,a6] over Q); point arithmetic runs over Q or
over F_p through a small field-context object.  Isogeny coordinate maps are
rational functions in x (plus y times a rational function in x), stored on a
depressed model y^2 = x^3 + Ax + B with the translation recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import valuation, INFINITY
from .poly import RatPoly, poly_gcd

Rat = Fraction


# ---------------------------------------------------------------------------
# Field contexts (Q and F_p share the group-law code)


class QCtx:
    name = "Q"

    @staticmethod
    def of(v):
        return Fraction(v)

    @staticmethod
    def inv(v):
        return 1 / Fraction(v)

    @staticmethod
    def eq(a, b):
        return a == b


class FpCtx:
    def __init__(self, p: int):
        self.p = p
        self.name = f"F_{p}"

    def of(self, v):
        v = Fraction(v)
        return v.numerator * pow(v.denominator, -1, self.p) % self.p

    def inv(self, v):
        return pow(v, -1, self.p)

    def eq(self, a, b):
        return (a - b) % self.p == 0


@dataclass(frozen=True)
class WeierstrassModel:
    a1: Rat
    a2: Rat
    a3: Rat
    a4: Rat
    a6: Rat

    @property
    def b2(self):
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self):
        return (self.a1 ** 2 * self.a6 + 4 * self.a2 * self.a6
                - self.a1 * self.a3 * self.a4 + self.a2 * self.a3 ** 2
                - self.a4 ** 2)

    @property
    def c4(self):
        return self.b2 ** 2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self):
        return self.c4 ** 3 / self.disc

    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs())

    def rhs(self, x):
        x = Fraction(x)
        return x ** 3 + self.a2 * x ** 2 + self.a4 * x + self.a6

    def transform(self, r=0, s=0, t=0, u=1) -> "WeierstrassModel":
        """Standard change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        r, s, t, u = Fraction(r), Fraction(s), Fraction(t), Fraction(u)
        a1, a2, a3, a4, a6 = self.ainvs()
        A1 = (a1 + 2 * s) / u
        A2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        A3 = (a3 + r * a1 + 2 * t) / u ** 3
        A4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r
              - 2 * s * t) / u ** 4
        A6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t
              - r * t * a1) / u ** 6
        return WeierstrassModel(A1, A2, A3, A4, A6)

    def map_point(self, P, r=0, s=0, t=0, u=1):
        """Image of a point of self on self.transform(r, s, t, u)."""
        if P is INF:
            return INF
        r, s, t, u = Fraction(r), Fraction(s), Fraction(t), Fraction(u)
        x2 = (P.x - r) / u ** 2
        y2 = (P.y - s * (P.x - r) - t) / u ** 3
        return Pt(x2, y2)

    def __repr__(self):
        return f"[{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}]"


def compute_invariants(a1, a2, a3, a4, a6) -> WeierstrassModel:
    """Build a model, rejecting singular input."""
    m = WeierstrassModel(Fraction(a1), Fraction(a2), Fraction(a3),
                         Fraction(a4), Fraction(a6))
    if m.disc == 0:
        raise ValueError("singular model (disc = 0)")
    assert 4 * m.b8 == m.b2 * m.b6 - m.b4 ** 2
    assert 1728 * m.disc == m.c4 ** 3 - m.c6 ** 2
    return m


def curve_from_string(s: str) -> WeierstrassModel:
    """Parse "[a1,a2,a3,a4,a6]" with rational entries."""
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError("curve must be given as [a1,a2,a3,a4,a6]")
    parts = [Fraction(t.strip()) for t in s[1:-1].split(",")]
    if len(parts) != 5:
        raise ValueError("curve needs exactly five coefficients")
    return compute_invariants(*parts)


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "O"


INF = _Infinity()


@dataclass(frozen=True)
class Pt:
    x: object
    y: object

    def __repr__(self):
        return f"({self.x}, {self.y})"


def is_on_curve(m: WeierstrassModel, P, ctx=QCtx) -> bool:
    if P is INF:
        return True
    a1, a2, a3, a4, a6 = (ctx.of(a) for a in m.ainvs())
    x, y = P.x, P.y
    lhs = y * y + a1 * x * y + a3 * y
    rhs = x ** 3 + a2 * x * x + a4 * x + a6
    return ctx.eq(lhs, rhs)


def negate(m: WeierstrassModel, P, ctx=QCtx):
    if P is INF:
        return INF
    a1, a3 = ctx.of(m.a1), ctx.of(m.a3)
    return Pt(P.x, -P.y - a1 * P.x - a3)


def add(m: WeierstrassModel, P, Q, ctx=QCtx):
    """Chord-tangent group law; Infinity is the identity."""
    if P is INF:
        return Q
    if Q is INF:
        return P
    a1, a2, a3, a4, a6 = (ctx.of(a) for a in m.ainvs())
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if ctx.eq(x1, x2):
        if ctx.eq(y1 + y2 + a1 * x2 + a3, 0):
            return INF
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) \
            * ctx.inv(2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) * ctx.inv(x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    if isinstance(ctx, FpCtx):
        return Pt(x3 % ctx.p, y3 % ctx.p)
    return Pt(x3, y3)


def scalar_mul(m: WeierstrassModel, n: int, P, ctx=QCtx):
    if n < 0:
        return scalar_mul(m, -n, negate(m, P, ctx), ctx)
    out = INF
    base = P
    while n:
        if n & 1:
            out = add(m, out, base, ctx)
        base = add(m, base, base, ctx)
        n >>= 1
    return out


def count_points_Fp(m: WeierstrassModel, p: int) -> int:
    """#E(F_p) by exhaustive enumeration (needs good reduction, p <= 10^5)."""
    if p > 10 ** 5:
        raise ValueError("point counting capped at p = 10^5")
    if not m.is_integral() or valuation(m.disc, p) != 0:
        raise ValueError(f"bad reduction at {p} for the given model")
    if p == 2:
        cnt = 1
        a1, a2, a3, a4, a6 = (int(a) for a in m.ainvs())
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y
                        - (x ** 3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    cnt += 1
        return cnt
    from .arith import legendre

    b2, b4, b6 = int(m.b2), int(m.b4) * 2, int(m.b6)
    cnt = 1 + p
    for x in range(p):
        B = (4 * x ** 3 + int(m.b2) * x * x + 2 * int(m.b4) * x + int(m.b6)) % p
        cnt += legendre(B, p)
    return cnt


def short_model(m: WeierstrassModel):
    """Y^2 = g(X) model isomorphic to m, with the coordinate change.

    Returns (g, (r, s, t, u)) where the transform maps m to the Y^2 = g
    model; disc of that Weierstrass model is 16 * disc(g).
    """
    s = -m.a1 / 2
    t = -m.a3 / 2
    m2 = m.transform(0, s, t, 1)
    assert m2.a1 == 0 and m2.a3 == 0
    g = RatPoly([m2.a6, m2.a4, m2.a2, 1])
    return g, (Fraction(0), s, t, Fraction(1))


def two_division_cubic(m: WeierstrassModel) -> RatPoly:
    """Monic cubic whose roots are the x-coordinates of E[2] \\ {O}."""
    return RatPoly([m.b6 / 4, m.b4 / 2, m.b2 / 4, 1])


def two_division_cubic_integral(m: WeierstrassModel) -> RatPoly:
    """Integral variant in U = 4X (same splitting fields)."""
    return RatPoly([16 * m.b6, 8 * m.b4, m.b2, 1])


def two_torsion_points(m: WeierstrassModel) -> list:
    """Rational 2-torsion (over Q) of an integral model."""
    from .poly import factor_over_Z

    cubic = two_division_cubic(m)
    pts = []
    for fac in factor_over_Z(cubic):
        if fac.degree == 1:
            x = -fac.coeffs[0]
            y = -(m.a1 * x + m.a3) / 2
            pts.append(Pt(x, y))
    return pts


# ---------------------------------------------------------------------------
# Rational maps on a curve (elements (X(x), y * Y(x)) used for [n])


@dataclass(frozen=True)
class RatFunc:
    num: RatPoly
    den: RatPoly

    def normalized(self) -> "RatFunc":
        g = poly_gcd(self.num, self.den)
        if g.degree >= 1:
            n, d = self.num // g, self.den // g
        else:
            n, d = self.num, self.den
        lc = d.lead
        return RatFunc(RatPoly([c / lc for c in n.coeffs]),
                       RatPoly([c / lc for c in d.coeffs]))

    def __add__(self, o):
        return RatFunc(self.num * o.den + o.num * self.den,
                       self.den * o.den).normalized()

    def __sub__(self, o):
        return RatFunc(self.num * o.den - o.num * self.den,
                       self.den * o.den).normalized()

    def __mul__(self, o):
        return RatFunc(self.num * o.num, self.den * o.den).normalized()

    def __truediv__(self, o):
        return RatFunc(self.num * o.den, self.den * o.num).normalized()

    def eval(self, x):
        d = self.den.eval(x)
        if d == 0:
            raise ZeroDivisionError("pole")
        return self.num.eval(x) / d


def _rf(p) -> RatFunc:
    return RatFunc(p if isinstance(p, RatPoly) else RatPoly([p]), RatPoly([1]))


@dataclass(frozen=True)
class IsogenyMap:
    """An isogeny with exact rational coordinate functions.

    The maps act on the depressed form of the domain: if (r, s, t) is `pre`,
    the depressed coordinates are xd = x - r', ... recorded as a transform
    tuple; phi(x, y) = (xnum(xd)/xden(xd), yd * ynum(xd)/yden(xd)) on the
    codomain (itself depressed).  `kernel` lists the x-coordinates of the
    kernel on the *original* domain, or the tag "[n]".
    """

    domain: WeierstrassModel
    codomain: WeierstrassModel
    degree: int
    pre: tuple  # (r, s, t, u) mapping domain -> depressed domain
    x_num: RatPoly
    x_den: RatPoly
    y_num: RatPoly  # multiplies y_depressed
    y_den: RatPoly
    kernel: tuple

    def depressed_domain(self) -> WeierstrassModel:
        return self.domain.transform(*self.pre)

    def apply(self, P):
        if P is INF:
            return INF
        r, s, t, u = self.pre
        Pd = self.domain.map_point(P, r, s, t, u)
        xd, yd = Pd.x, Pd.y
        den = self.x_den.eval(xd)
        if den == 0:
            return INF
        x2 = self.x_num.eval(xd) / den
        y2 = yd * self.y_num.eval(xd) / self.y_den.eval(xd)
        return Pt(x2, y2)


def _depress(m: WeierstrassModel):
    """Transform (r, s, t, 1) taking m to y^2 = x^3 + Ax + B."""
    s = -m.a1 / 2
    t0 = -m.a3 / 2
    m1 = m.transform(0, s, t0, 1)
    r = -m1.b2 / 12
    m2 = m1.transform(r, 0, 0, 1)
    # compose (0,s,t0) then (r,0,0): total (r, s, t0 - s*r... ) do directly
    # x = x2 + r, y = y2; then x0 = x, y0 = y - s x - t0 reversed:
    # original -> m1: (0, s, t0); m1 -> m2: (r, 0, 0)
    # combined transform parameters: x = u^2 x'' + R with R = r, S = s,
    # T = t0 + s*r
    comb = (r, s, t0 + s * r, Fraction(1))
    m3 = m.transform(*comb)
    assert m3 == m2 and m2.a1 == 0 and m2.a2 == 0 and m2.a3 == 0
    return m2, comb


def velu_isogeny(m: WeierstrassModel, kernel_points) -> IsogenyMap:
    """Quotient by a finite subgroup of order 1, 2 or 3 given by its
    nontrivial affine points (Velu's formulas on the depressed model)."""
    pts = [P for P in kernel_points if P is not INF]
    for P in pts:
        if not is_on_curve(m, P):
            raise ValueError(f"kernel point {P} not on the curve")
    dep, pre = _depress(m)
    A, B = dep.a4, dep.a6
    dpts = [m.map_point(P, *pre) for P in pts]
    order = len(dpts) + 1
    if order == 1:
        return IsogenyMap(m, dep, 1, pre, RatPoly([0, 1]), RatPoly([1]),
                          RatPoly([1]), RatPoly([1]), ())
    if order not in (2, 3):
        raise ValueError("kernel order limited to 1, 2, 3")
    xs = {P.x for P in dpts}
    if order == 2:
        (P,) = dpts
        if P.y != 0:
            raise ValueError("order-2 kernel point must be 2-torsion")
        reps = [P]
    else:
        if len(xs) != 1:
            raise ValueError("order-3 kernel must be {±Q}")
        P, Q = dpts
        if P.x != Q.x or P.y != -Q.y:
            raise ValueError("order-3 kernel must be {Q, -Q}")
        # Galois-stability/subgroup check: 2*Q = -Q
        if scalar_mul(dep, 2, P) != Pt(P.x, -P.y):
            raise ValueError("kernel points do not form a subgroup of order 3")
        reps = [P]
    t = Fraction(0)
    w = Fraction(0)
    x_extra = _rf(RatPoly([0]))
    for Q in reps:
        gx = 3 * Q.x ** 2 + A
        if Q.y == 0:
            vq, uq = gx, Fraction(0)
        else:
            vq, uq = 2 * gx, 4 * Q.y ** 2
        t += vq
        w += uq + Q.x * vq
        lin = RatPoly([-Q.x, 1])
        x_extra = x_extra + RatFunc(RatPoly([vq]), lin) \
            + RatFunc(RatPoly([uq]), lin * lin)
    codomain = compute_invariants(0, 0, 0, A - 5 * t, B - 7 * w)
    xmap = (_rf(RatPoly([0, 1])) + x_extra).normalized()
    # normalized isogeny: y' = y * d/dx x'(x)
    dnum = xmap.num.deriv() * xmap.den - xmap.num * xmap.den.deriv()
    dden = xmap.den * xmap.den
    ymap = RatFunc(dnum, dden).normalized()
    kern = tuple(sorted({P.x for P in pts}))
    return IsogenyMap(m, codomain, order, pre, xmap.num, xmap.den,
                      ymap.num, ymap.den, kern)


def multiplication_isogeny(m: WeierstrassModel, n: int) -> IsogenyMap:
    """[n] as an explicit isogeny (n <= 4), via iterated rational maps."""
    if not 1 <= n <= 4:
        raise ValueError("multiplication maps implemented for n <= 4")
    dep, pre = _depress(m)
    A, B = dep.a4, dep.a6
    f = RatPoly([B, A, 0, 1])
    fr = _rf(f)

    def compose(p: RatPoly, Xf: RatFunc) -> RatFunc:
        out = _rf(RatPoly([0]))
        for c in reversed(p.coeffs):
            out = out * Xf + _rf(RatPoly([c]))
        return out.normalized()

    # generic point functions: P = (X(x), y * Y(x)); addition stays in
    # this shape because the curve relation folds y^2 into f(x)
    def add_funcs(P1, P2):
        X1, Y1 = P1
        X2, Y2 = P2
        same_x = X1.num * X2.den == X2.num * X1.den
        if same_x and Y1.num * Y2.den == Y2.num * Y1.den:
            # tangent: lambda = f'(X) / (2 y Y) = y * f'(X) / (2 f Y)
            L = (compose(f.deriv(), X1) / (_rf(RatPoly([2])) * fr * Y1)).normalized()
        elif same_x:
            return None  # opposite points: sum is O
        else:
            L = ((Y2 - Y1) / (X2 - X1)).normalized()
        X3 = (fr * L * L - X1 - X2).normalized()
        Y3 = (L * (X1 - X3) - Y1).normalized()
        return (X3, Y3)

    gen = (_rf(RatPoly([0, 1])), _rf(RatPoly([1])))
    acc = gen
    for _ in range(n - 1):
        acc = add_funcs(acc, gen)
        if acc is None:
            raise ValueError("multiplication map degenerated")
    X, Y = acc
    xmap = X.normalized()
    ymap = Y.normalized()
    return IsogenyMap(m, dep, n * n, pre, xmap.num, xmap.den,
                      ymap.num, ymap.den, ("[%d]" % n,))


# ---------------------------------------------------------------------------
# Formal group expansions


class ZSeries:
    """Truncated Laurent series in z over Q: coeffs[i] is the z^(off+i) term."""

    def __init__(self, off, coeffs, prec):
        self.off = off
        self.coeffs = [Fraction(c) for c in coeffs]
        self.prec = prec  # exponents >= prec are unknown
        self._trim()

    def _trim(self):
        while self.coeffs and self.coeffs[0] == 0:
            self.coeffs.pop(0)
            self.off += 1
        n = self.prec - self.off
        self.coeffs = self.coeffs[:max(0, n)]

    @staticmethod
    def zero(prec):
        return ZSeries(prec, [], prec)

    @staticmethod
    def const(c, prec):
        return ZSeries(0, [c], prec)

    @staticmethod
    def z(prec):
        return ZSeries(1, [1], prec)

    def __add__(self, o):
        prec = min(self.prec, o.prec)
        off = min(self.off if self.coeffs else prec,
                  o.off if o.coeffs else prec)
        n = prec - off
        cs = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if 0 <= self.off + i - off < n:
                cs[self.off + i - off] += c
        for i, c in enumerate(o.coeffs):
            if 0 <= o.off + i - off < n:
                cs[o.off + i - off] += c
        return ZSeries(off, cs, prec)

    def __neg__(self):
        return ZSeries(self.off, [-c for c in self.coeffs], self.prec)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not self.coeffs or not o.coeffs:
            return ZSeries.zero(min(self.prec, o.prec))
        prec = min(self.prec + o.off, o.prec + self.off)
        off = self.off + o.off
        n = prec - off
        cs = [Fraction(0)] * max(0, n)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                if i + j < n:
                    cs[i + j] += a * b
        return ZSeries(off, cs, prec)

    def inverse(self):
        if not self.coeffs or self.coeffs[0] == 0:
            raise ZeroDivisionError
        n = self.prec - self.off
        a0 = self.coeffs[0]
        inv = [1 / a0]
        for k in range(1, n):
            s = Fraction(0)
            for i in range(1, k + 1):
                ai = self.coeffs[i] if i < len(self.coeffs) else Fraction(0)
                s += ai * inv[k - i]
            inv.append(-s / a0)
        return ZSeries(-self.off, inv, self.prec - 2 * self.off)

    def coeff(self, e):
        i = e - self.off
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if e < self.prec:
            return Fraction(0)
        raise ValueError(f"coefficient of z^{e} beyond precision")


def _poly_on_series(p: RatPoly, s: ZSeries, prec) -> ZSeries:
    out = ZSeries.zero(prec)
    for c in reversed(p.coeffs):
        out = out * s + ZSeries.const(c, prec)
    return out


def formal_xy(dep: WeierstrassModel, terms: int = 14):
    """Laurent expansions x(z), y(z) at infinity with z = -x/y."""
    A, B = dep.a4, dep.a6
    prec = terms
    # w = z^3 + A z w^2 + B w^3, iterate from w = z^3
    wcoeffs = {3: Fraction(1)}

    def mul_dict(d1, d2):
        out = {}
        for i, a in d1.items():
            for j, b in d2.items():
                if i + j <= prec + 6:
                    out[i + j] = out.get(i + j, Fraction(0)) + a * b
        return out

    for _ in range(prec + 4):
        w2 = mul_dict(wcoeffs, wcoeffs)
        w3 = mul_dict(w2, wcoeffs)
        new = {3: Fraction(1)}
        for i, c in w2.items():
            new[i + 1] = new.get(i + 1, Fraction(0)) + A * c
        for i, c in w3.items():
            new[i] = new.get(i, Fraction(0)) + B * c
        new = {i: c for i, c in new.items() if i <= prec + 6 and c != 0}
        if new == wcoeffs:
            break
        wcoeffs = new
    lo = min(wcoeffs)
    hi = prec + 6
    w = ZSeries(lo, [wcoeffs.get(i, Fraction(0)) for i in range(lo, hi)], hi)
    winv = w.inverse()
    x = ZSeries.z(winv.prec + 10) * winv  # z/w : starts z^-2
    y = -winv  # -1/w : starts -z^-3
    return x, y


def phi_prime_abs(phi: IsogenyMap, p: int) -> Fraction:
    """|phi'(0)|_p from the leading coefficient of z' = c1 z + O(z^2)."""
    dep = phi.depressed_domain()
    x, y = formal_xy(dep)
    prec = 9
    xs = _poly_on_series(phi.x_num, x, 40) * _poly_on_series(phi.x_den, x, 40).inverse()
    ys = y * _poly_on_series(phi.y_num, x, 40) * \
        _poly_on_series(phi.y_den, x, 40).inverse()
    zprime = -(xs * ys.inverse())
    if zprime.coeff(0) != 0:
        raise ArithmeticError("formal expansion inconsistent: z' has a constant term")
    c1 = zprime.coeff(1)
    # internal consistency: z'(-z) = -z'(z) forces even coefficients to vanish
    for e in (0, 2):
        if zprime.coeff(e) != 0:
            raise ArithmeticError("formal expansion inconsistent: even term in z'")
    v = valuation(c1, p)
    if v is INFINITY:
        raise ArithmeticError("leading coefficient vanished")
    return Fraction(p) ** (-v)


def reduction_filtration_level(m: WeierstrassModel, P, p: int) -> int:
    """Largest i with P in E_i(Q_p): v(x) = -2i for i >= 1, else 0."""
    if P is INF:
        raise ValueError("the point at infinity lies in every filtration level")
    if not is_on_curve(m, P):
        raise ValueError("point not on the curve")
    v = valuation(P.x, p)
    if v is INFINITY or v >= 0:
        return 0
    if v % 2 != 0:
        raise ValueError(f"v_p(x) = {v} odd: model not minimal at {p}?")
    return -v // 2
