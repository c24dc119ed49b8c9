"""Square classes in the completions of etale algebras Q[T]/f at a place.

A separable monic integer polynomial f splits at a finite p into resolved
local pieces (poly.local_splitting_type); at the real place into real roots
and complex pairs.  This module computes square classes of elements such as
x - theta componentwise, with exact valuations and canonical unit data:

  * odd p, unramified piece: (valuation parity, residue quadratic character)
  * p = 2, unramified piece: unit written as square * (1 + 2w + 4t) mod 8;
    canonical data (w in F_q, Tr(t) in F_2); unramified iff w = 0
  * ramified piece: valuation parity only (enough at odd residue
    characteristic, where every unit class is unramified)
  * real place: a sign per real root; complex pairs carry nothing

Classes multiply componentwise, so F_2-spans are enumerated by closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITY, legendre, valuation
from .poly import (RatPoly, UnresolvedSplitting, local_splitting_type,
                   mp_divmod, mp_mul, mp_sub, mp_scal, mp_trim)

# residue fields for dyadic class multiplication, keyed by the reduced
# defining polynomial (shared between CompClass values of one algebra)
_RESFIELDS: dict = {}


class ResidueField:
    def __init__(self, p: int, hbar):
        self.p = p
        self.h = [c % p for c in hbar]
        self.f = len(self.h) - 1
        self.q = p ** self.f
        self.key = (p, tuple(self.h))
        _RESFIELDS[self.key] = self

    def mul(self, a, b):
        return mp_divmod(mp_mul(list(a), list(b), self.p), self.h, self.p)[1]

    def power(self, a, n):
        out = [1]
        a = mp_divmod(list(a), self.h, self.p)[1]
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def is_square(self, a) -> bool:
        if self.p == 2:
            return True
        if not mp_trim([c % self.p for c in list(a)]):
            raise ZeroDivisionError("zero residue")
        return self.power(a, (self.q - 1) // 2) == [1]

    def sqrt_char2(self, a):
        return self.power(a, 2 ** max(0, self.f - 1))

    def trace_char2(self, a) -> int:
        s = [0] * self.f
        x = mp_divmod(list(a), self.h, 2)[1]
        for _ in range(self.f):
            xx = x + [0] * (self.f - len(x))
            s = [(u + v) % 2 for u, v in zip(s, xx)]
            x = self.mul(x, x)
        return s[0] if s else 0


# ---------------------------------------------------------------------------
# component classes and vectors


@dataclass(frozen=True)
class CompClass:
    """Square class of a nonzero element of one local component."""

    comp: int
    kind: str      # 'unramified' | 'ramified' | 'real' | 'complex'
    v_parity: int  # 0 at archimedean components
    unit: tuple
    # unit data: real -> (sign,); complex/ramified -> ()
    #            odd p unramified -> ('qr', bit)
    #            p = 2 unramified -> ('u2', w-coeffs, trace-bit, resfield-key)

    def is_trivial(self) -> bool:
        if self.kind == "complex":
            return True
        if self.kind == "real":
            return self.unit[0] == 1
        if self.v_parity:
            return False
        if self.kind == "ramified":
            return True  # parity-only tracking: even valuation counts trivial
        if self.unit[0] == "qr":
            return self.unit[1] == 0
        return all(c == 0 for c in self.unit[1]) and self.unit[2] == 0

    def is_unramified(self) -> bool:
        if self.kind in ("real", "complex"):
            return self.is_trivial()
        if self.v_parity:
            return False
        if self.unit and self.unit[0] == "u2":
            return all(c == 0 for c in self.unit[1])
        return True  # odd residue characteristic


def mul_comp(a: CompClass, b: CompClass) -> CompClass:
    if a.comp != b.comp or a.kind != b.kind:
        raise ValueError("component mismatch")
    if a.kind == "complex":
        return a
    if a.kind == "real":
        return CompClass(a.comp, "real", 0, (a.unit[0] * b.unit[0],))
    v = (a.v_parity + b.v_parity) % 2
    if a.kind == "ramified":
        return CompClass(a.comp, "ramified", v, ())
    if a.unit[0] == "qr":
        return CompClass(a.comp, a.kind, v, ("qr", (a.unit[1] + b.unit[1]) % 2))
    _, wa, ta, key = a.unit
    _, wb, tb, _ = b.unit
    rf = _RESFIELDS[key]
    w = tuple((x + y) % 2 for x, y in zip(wa, wb))
    tr_cross = rf.trace_char2(rf.mul(list(wa), list(wb)))
    return CompClass(a.comp, a.kind, v, ("u2", w, (ta + tb + tr_cross) % 2, key))


@dataclass(frozen=True)
class SqVector:
    entries: tuple

    def __mul__(self, other: "SqVector") -> "SqVector":
        return SqVector(tuple(mul_comp(a, b)
                              for a, b in zip(self.entries, other.entries)))

    def is_trivial(self) -> bool:
        return all(e.is_trivial() for e in self.entries)

    def is_unramified(self) -> bool:
        return all(e.is_unramified() for e in self.entries)


def identity_like(v: SqVector) -> SqVector:
    out = []
    for e in v.entries:
        if e.kind == "complex":
            out.append(e)
        elif e.kind == "real":
            out.append(CompClass(e.comp, "real", 0, (1,)))
        elif e.kind == "ramified":
            out.append(CompClass(e.comp, "ramified", 0, ()))
        elif e.unit[0] == "qr":
            out.append(CompClass(e.comp, e.kind, 0, ("qr", 0)))
        else:
            out.append(CompClass(e.comp, e.kind, 0,
                                 ("u2", tuple([0] * len(e.unit[1])), 0,
                                  e.unit[3])))
    return SqVector(tuple(out))


def span_closure(vectors) -> set:
    vectors = list(vectors)
    if not vectors:
        return set()
    seen = {identity_like(vectors[0])}
    for v in vectors:
        seen |= {s * v for s in seen}
    return seen


def span_rank(vectors) -> int:
    n = len(span_closure(vectors))
    assert n & (n - 1) == 0
    return n.bit_length() - 1


# ---------------------------------------------------------------------------
# real root isolation (Sturm)


_CHAIN_CACHE: dict = {}


def _sturm_chain(f: RatPoly):
    if f.coeffs in _CHAIN_CACHE:
        return _CHAIN_CACHE[f.coeffs]
    chain = [f, f.deriv()]
    while chain[-1].degree >= 1:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        chain.append(r)
    _CHAIN_CACHE[f.coeffs] = chain
    return chain


def _sign_changes(chain, x) -> int:
    signs = []
    for g in chain:
        v = g.eval(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def isolate_real_roots(f: RatPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open rational intervals, one per real root, ascending."""
    if f.degree < 1:
        return []
    chain = _sturm_chain(f)
    bound = 1 + max(abs(c) for c in f.coeffs) / abs(f.lead)
    out = []

    def split(a, b, count):
        if count == 0:
            return
        if count == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        while f.eval(mid) == 0:
            mid = (a + mid) / 2
        left = _sign_changes(chain, a) - _sign_changes(chain, mid)
        split(a, mid, left)
        split(mid, b, count - left)

    lo, hi = -bound, bound
    split(lo, hi, _sign_changes(chain, lo) - _sign_changes(chain, hi))
    return sorted(out)


def refine_away_from(f: RatPoly, interval, x: Fraction):
    """Shrink an isolating interval until the rational x lies outside it."""
    chain = _sturm_chain(f)
    a, b = interval
    guard = 0
    while a < x < b:
        mid = (a + b) / 2
        while f.eval(mid) == 0:
            mid = (a + mid) / 2
        if _sign_changes(chain, a) - _sign_changes(chain, mid) == 1:
            b = mid
        else:
            a = mid
        guard += 1
        if guard > 4000:
            raise ArithmeticError("interval refinement did not separate")
    return a, b


# ---------------------------------------------------------------------------
# the etale algebra at a place


class EtaleAlgebra:
    """Q_v[T]/f for separable monic integral f, with resolved components.

    Finite components follow poly.local_splitting_type order; at the real
    place the components are the real roots ascending, then complex pairs.
    """

    def __init__(self, f: RatPoly, p: int, hensel_cap: int = 320):
        """p = 0 means the real place."""
        if not f.is_monic() or not f.is_integral():
            raise ValueError("etale algebra needs a monic integer polynomial")
        self.f = f
        self.p = p
        if p == 0:
            self.intervals = list(isolate_real_roots(f))
            self.n_real = len(self.intervals)
            self.n_complex = (f.degree - self.n_real) // 2
            self.n_comp = self.n_real + self.n_complex
            self.pieces = None
            self.split = None
            return
        self.split = local_splitting_type(f, p, hensel_cap)
        if self.split.has_unresolved():
            raise UnresolvedSplitting(
                f"unresolved splitting of {f} at {p}: "
                + "; ".join(fc.note for fc in self.split.factors
                            if fc.kind == "unresolved"))
        self.pieces = list(self.split.factors)
        self.n_comp = len(self.pieces)
        self._res = {}
        for i, piece in enumerate(self.pieces):
            if piece.kind == "unramified" and piece.degree >= 2:
                self._res[i] = ResidueField(p, [c % p for c in piece.lift])
        if p == 2:
            ResidueField(2, [1, 1])  # prime-field entry for linear pieces

    # -- labels --------------------------------------------------------------

    def labels(self) -> list[str]:
        if self.p == 0:
            return ([f"alpha_{i + 1}" for i in range(self.n_real)]
                    + [f"pair_{i + 1}" for i in range(self.n_complex)])
        out = []
        for piece in self.pieces:
            if piece.degree == 1:
                if piece.root is not None:
                    out.append(f"T-({piece.root})")
                else:
                    out.append(f"T-({piece.root_mod(self.p)} mod {self.p})")
            else:
                out.append(f"deg{piece.degree}[e={piece.e},f={piece.f}]")
        return out

    # -- unit-class canonicalization ------------------------------------------

    def _class_int(self, i: int, v: int, uval: int, prec: int,
                   kind: str = "unramified") -> CompClass:
        """Class of p^v * uval at a component with prime residue field."""
        p = self.p
        if p != 2:
            return CompClass(i, kind, v % 2,
                             ("qr", 0 if legendre(uval % p, p) == 1 else 1))
        if prec < 3:
            raise UnresolvedSplitting("dyadic unit class needs 3 digits")
        u8 = uval % 8
        w = ((u8 - 1) // 2) % 2
        t = ((u8 - 1 - 2 * w) // 4) % 2
        return CompClass(i, kind, v % 2, ("u2", (w,), t, (2, (1, 1))))

    def _class_poly(self, i: int, vW: int, unit, prec: int) -> CompClass:
        """Class of pi^vW * unit for unit a unit of the unramified component
        i given as a coefficient list modulo p^prec."""
        p = self.p
        rf = self._res[i]
        if p != 2:
            res = [c % p for c in unit]
            return CompClass(i, "unramified", vW % 2,
                             ("qr", 0 if rf.is_square(res) else 1))
        if prec < 3:
            raise UnresolvedSplitting("dyadic unit class needs 3 digits")
        h8 = [c % 8 for c in self.pieces[i].lift]
        u8 = mp_divmod([c % 8 for c in unit], h8, 8)[1]
        x0 = rf.sqrt_char2([c % 2 for c in u8])
        x0sq = mp_divmod(mp_mul(x0, x0, 8), h8, 8)[1]
        inv = _invert_poly_mod(x0sq, h8, 2, 3)
        up = mp_divmod(mp_mul(u8, inv, 8), h8, 8)[1]
        up = up + [0] * (rf.f - len(up))
        # up = 1 + 2w + 4t coefficientwise
        a = [(c - (1 if j == 0 else 0)) % 8 for j, c in enumerate(up)]
        assert all(c % 2 == 0 for c in a), "unit not congruent 1 mod 2"
        a = [c // 2 for c in a]
        w = [c % 2 for c in a]
        t = [(c - ww) // 2 % 2 for c, ww in zip(a, w)]
        trbit = rf.trace_char2(t)
        return CompClass(i, "unramified", vW % 2,
                         ("u2", tuple(w), trbit, rf.key))

    def class_of_element(self, i: int, elem, prec: int) -> CompClass:
        """Class of a nonzero element of unramified component i, given as a
        polynomial in the generator with integer coefficients mod p^prec."""
        p = self.p
        piece = self.pieces[i]
        m = p ** prec
        elem = mp_divmod([c % m for c in elem], [c % m for c in piece.lift], m)[1]
        if piece.degree == 1:
            val = elem[0] if elem else 0
            v = _v_bounded(val, p, prec)
            if v is None or v >= prec - 6:
                raise UnresolvedSplitting("element valuation needs more precision")
            return self._class_int(i, v, val // p ** v, prec - v)
        vs = [_v_bounded(c, p, prec) for c in elem]
        vW = min((v for v in vs if v is not None), default=None)
        if vW is None or vW >= prec - 6:
            raise UnresolvedSplitting("element valuation needs more precision")
        unit = [(c % m) // p ** vW for c in elem]
        return self._class_poly(i, vW, unit, prec - vW)

    # -- images ----------------------------------------------------------------

    def image_of_affine(self, x: Fraction) -> SqVector:
        """(x - T) componentwise: the descent image of an affine point."""
        x = Fraction(x)
        if self.p == 0:
            ents = []
            for i in range(self.n_real):
                iv = refine_away_from(self.f, self.intervals[i], x)
                self.intervals[i] = iv
                ents.append(CompClass(i, "real", 0, (1 if x >= iv[1] else -1,)))
            ents += [CompClass(self.n_real + k, "complex", 0, ())
                     for k in range(self.n_complex)]
            return SqVector(tuple(ents))
        p = self.p
        den = x.denominator
        num = x.numerator
        vden = valuation(den, p)
        ents = []
        for i, piece in enumerate(self.pieces):
            exact = x - piece.root if piece.root is not None else None
            if exact is not None:
                if exact == 0:
                    raise ZeroDivisionError("x coincides with a component root")
                v = valuation(exact, p)
                u = exact / Fraction(p) ** v
                prec = max(4, piece.prec)
                uval = (u.numerator * pow(u.denominator, -1, p ** prec)) % p ** prec
                ents.append(self._class_int(i, v, uval, prec))
                continue
            prec = piece.prec
            m = p ** prec
            if piece.kind == "ramified":
                # valuation from the exact norm den^deg * h(x)
                acc = 0
                for k, c in enumerate(piece.lift):
                    acc = (acc + c * pow(num, k, m)
                           * pow(den, piece.degree - k, m)) % m
                vnorm = _v_bounded(acc, p, prec)
                if vnorm is None or vnorm >= prec - 6:
                    raise UnresolvedSplitting("ramified norm needs more precision")
                vnorm -= piece.degree * vden
                if vnorm % piece.f != 0:
                    raise ArithmeticError("norm valuation vs residue degree")
                ents.append(CompClass(i, "ramified", (vnorm // piece.f) % 2, ()))
                continue
            # unramified piece: clear denominators by the square den^2
            elem = [(num * den) % m, (-den * den) % m]
            ents.append(self.class_of_element(i, elem, prec))
        return SqVector(tuple(ents))

    def image_of_torsion_root(self, i: int) -> SqVector:
        """Descent image of the 2-torsion divisor supported on component i
        (the full Galois orbit of roots of that piece, a rational divisor).

        The entry at the home component is, up to squares, (-1)^(deg-1)
        times the product of the other factors evaluated at the generator;
        at a component j != i it is (-1)^(deg_i) g_i(theta_j).
        """
        if self.p == 0:
            if i >= self.n_real:
                raise ValueError("torsion root must be real at the real place")
            ents = []
            prod = 1
            for j in range(self.n_real):
                if j != i:
                    prod *= 1 if i > j else -1
            for j in range(self.n_real):
                if j == i:
                    ents.append(CompClass(j, "real", 0, (prod,)))
                else:
                    ents.append(CompClass(j, "real", 0, (1 if i > j else -1,)))
            ents += [CompClass(self.n_real + k, "complex", 0, ())
                     for k in range(self.n_complex)]
            return SqVector(tuple(ents))
        p = self.p
        piece_i = self.pieces[i]
        if piece_i.kind == "ramified":
            raise ValueError("torsion root lives in a ramified component")
        ents = []
        for j, piece_j in enumerate(self.pieces):
            prec = min(piece_i.prec, piece_j.prec)
            m = p ** prec
            if j == i:
                acc = [1]
                for k, pk in enumerate(self.pieces):
                    if k != i:
                        acc = mp_divmod(mp_mul(acc, [c % m for c in pk.lift], m),
                                        [c % m for c in piece_i.lift], m)[1]
                if (piece_i.degree - 1) % 2:
                    acc = [(-c) % m for c in acc]
                ents.append(self.class_of_element(i, acc, prec))
                continue
            gi = [c % m for c in piece_i.lift]
            sign = -1 if piece_i.degree % 2 else 1
            if piece_j.root is not None:
                ev = sign * RatPoly([Fraction(c) for c in gi]).eval(piece_j.root)
                v = valuation(ev, p)
                if v is INFINITY or v >= prec - 6:
                    raise UnresolvedSplitting("torsion image needs more precision")
                u = ev / Fraction(p) ** v
                uval = (u.numerator * pow(u.denominator, -1, m)) % m
                ents.append(self._class_int(j, v, uval, prec - v))
            elif piece_j.kind == "ramified":
                res = _norm_mod(list(piece_j.lift), gi, m)
                v = _v_bounded(res, p, prec)
                if v is None or v >= prec - 6:
                    raise UnresolvedSplitting("ramified norm needs more precision")
                if v % piece_j.f != 0:
                    raise ArithmeticError("norm valuation vs residue degree")
                ents.append(CompClass(j, "ramified", (v // piece_j.f) % 2, ()))
            else:
                val = mp_divmod(gi, [c % m for c in piece_j.lift], m)[1]
                if sign < 0:
                    val = [(-c) % m for c in val]
                ents.append(self.class_of_element(j, val, prec))
        return SqVector(tuple(ents))

    def identity_vector(self) -> SqVector:
        if self.p == 0:
            ents = [CompClass(i, "real", 0, (1,)) for i in range(self.n_real)]
            ents += [CompClass(self.n_real + k, "complex", 0, ())
                     for k in range(self.n_complex)]
            return SqVector(tuple(ents))
        ents = []
        for i, piece in enumerate(self.pieces):
            if piece.kind == "ramified":
                ents.append(CompClass(i, "ramified", 0, ()))
            elif self.p == 2:
                if piece.degree == 1:
                    ents.append(CompClass(i, "unramified", 0,
                                          ("u2", (0,), 0, (2, (1, 1)))))
                else:
                    rf = self._res[i]
                    ents.append(CompClass(i, "unramified", 0,
                                          ("u2", tuple([0] * rf.f), 0, rf.key)))
            else:
                ents.append(CompClass(i, "unramified", 0, ("qr", 0)))
        return SqVector(tuple(ents))

    def norm_class_is_square(self, x: Fraction) -> bool:
        """Is N(x - T) = f(x) a square in Q_v (the norm-kernel condition)?"""
        val = self.f.eval(x)
        if val == 0:
            raise ZeroDivisionError
        if self.p == 0:
            return val > 0
        from .arith import is_padic_square

        return is_padic_square(val, self.p)


def _v_bounded(n: int, p: int, prec: int):
    n %= p ** prec
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _invert_poly_mod(a, h, p: int, k: int):
    """Inverse of a unit a modulo (h, p^k), Hensel-lifted from mod p."""
    r0, r1 = [c % p for c in h], [c % p for c in a]
    t0, t1 = [], [1]
    while mp_trim(r1):
        q, r = mp_divmod(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, mp_sub(t0, mp_mul(q, t1, p), p)
    if len(mp_trim(r0)) != 1:
        raise ValueError("element not invertible")
    inv = mp_scal(t0, pow(r0[0], -1, p), p)
    mod = p
    target = p ** k
    while mod < target:
        mod = min(mod * mod, target)
        prod = mp_divmod(mp_mul(a, inv, mod), h, mod)[1]
        err = mp_sub([2], prod, mod)
        inv = mp_divmod(mp_mul(inv, err, mod), h, mod)[1]
    return inv


def _norm_mod(h, a, m: int) -> int:
    """Norm (det of multiplication by a) in Z/m[t]/h for monic h."""
    n = len(h) - 1
    a = mp_divmod([c % m for c in a], [c % m for c in h], m)[1]
    if not a:
        return 0
    cols = []
    for i in range(n):
        col = mp_divmod(mp_mul(a, [0] * i + [1], m), h, m)[1]
        cols.append(col + [0] * (n - len(col)))
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    det = Fraction(1)
    f = [[Fraction(x) for x in row] for row in mat]
    for col in range(n):
        piv = next((r for r in range(col, n) if f[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            f[col], f[piv] = f[piv], f[col]
            det = -det
        det *= f[col][col]
        inv = 1 / f[col][col]
        for r in range(col + 1, n):
            if f[r][col] != 0:
                fac = f[r][col] * inv
                for c in range(col, n):
                    f[r][c] -= fac * f[col][c]
    assert det.denominator == 1
    return int(det) % m
