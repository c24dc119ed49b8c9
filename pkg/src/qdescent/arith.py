"""Exact integer/rational arithmetic, factorization, and square classes.

Everything is exact: rationals are `fractions.Fraction`, valuations are
integers (with a distinguished infinity for 0), and square classes in
Q_v*/Q_v*^2 are small canonical records.  No floating point anywhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

Rat = Fraction

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_BOUND = 10 ** 6


@total_ordering
class _Infinity:
    """Valuation of zero.  Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __hash__(self):
        return hash("valuation-infinity")

    def __repr__(self):
        return "oo"


INFINITY = _Infinity()


def is_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set.

    Deterministic for n < 3.3 * 10^24; for larger n the witness set makes a
    false positive astronomically unlikely (and every prime we certify in
    anger is small or comes with an independent cross-check).
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, seed: int = 1) -> int:
    """A nontrivial factor of composite n (Brent's variant)."""
    rng = random.Random(seed ^ n)
    while True:
        c = rng.randrange(1, n)
        x = rng.randrange(2, n)
        y, d = x, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p^e) with primes strictly increasing and e != 0."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> Fraction:
        v = Fraction(self.sign)
        for p, e in self.factors:
            v *= Fraction(p) ** e
        return v

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __str__(self):
        if not self.factors:
            return str(self.sign)
        body = "*".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.factors)
        return ("-" if self.sign < 0 else "") + body


def factor_integer(n: int) -> Factorization:
    """Exact prime factorization; rejects 0."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out: dict[int, int] = {}
    for p in range(2, _TRIAL_BOUND):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _pollard_rho(m)
            stack += [d, m // d]
    return Factorization(sign, tuple(sorted(out.items())))


def factor_rational(q: Fraction) -> Factorization:
    """Factorization with possibly negative exponents."""
    if q == 0:
        raise ValueError("cannot factor 0")
    num = factor_integer(q.numerator)
    den = factor_integer(q.denominator)
    exps = num.as_dict()
    for p, e in den.factors:
        exps[p] = exps.get(p, 0) - e
    return Factorization(num.sign, tuple(sorted((p, e) for p, e in exps.items() if e)))


def valuation(q, p: int):
    """v_p(q) for rational q; INFINITY for q = 0."""
    q = Fraction(q)
    if q == 0:
        return INFINITY
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(q, p: int) -> Fraction:
    """q / p^{v_p(q)}; a p-adic unit."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no unit part")
    return q / Fraction(p) ** valuation(q, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def is_padic_square(q, p: int) -> bool:
    """Is the nonzero rational q a square in Q_p?"""
    q = Fraction(q)
    if q == 0:
        raise ValueError("square test needs nonzero input")
    v = valuation(q, p)
    if v % 2 != 0:
        return False
    u = unit_part(q, p)
    if p == 2:
        return (u.numerator * pow(u.denominator, -1, 8)) % 8 == 1
    return legendre((u.numerator * pow(u.denominator, -1, p)) % p, p) == 1


def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod odd prime p."""
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise ValueError(f"no non-residue mod {p}?")


# ---------------------------------------------------------------------------
# Places of Q and square classes


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: Finite(p) or the real place."""

    p: int  # 0 encodes the real infinite place

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_real(self) -> bool:
        return self.p == 0

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    def __repr__(self):
        return "oo" if self.is_real else str(self.p)


REAL_PLACE = Place(0)


def finite(p: int) -> Place:
    return Place(p)


@dataclass(frozen=True)
class SquareClass:
    """An element of Q_v*/Q_v*^2 in canonical form.

    Finite odd p: (val_parity, unit in {1, n_p}) with n_p the least
    non-residue.  p = 2: (val_parity, unit mod 8 in {1,3,5,7}).  Real
    place: the sign (val_parity fixed at 0).
    """

    place: Place
    val_parity: int
    unit: int  # canonical unit representative (sign for the real place)

    @property
    def representative(self) -> Fraction:
        if self.place.is_real:
            return Fraction(self.unit)
        return Fraction(self.place.p) ** self.val_parity * self.unit

    def is_trivial(self) -> bool:
        return self.val_parity == 0 and self.unit == 1

    def __repr__(self):
        return f"cls({self.representative} at {self.place})"


def square_class_at(q, v: Place) -> SquareClass:
    """Canonical square class of nonzero rational q at the place v."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    if v.is_real:
        return SquareClass(v, 0, 1 if q > 0 else -1)
    p = v.p
    val = valuation(q, p)
    u = unit_part(q, p)
    if p == 2:
        ur = (u.numerator * pow(u.denominator, -1, 8)) % 8
        return SquareClass(v, val % 2, ur)
    ur = (u.numerator * pow(u.denominator, -1, p)) % p
    unit = 1 if legendre(ur, p) == 1 else least_nonresidue(p)
    return SquareClass(v, val % 2, unit)


def sc_mul(a: SquareClass, b: SquareClass) -> SquareClass:
    """Group law on square classes at a common place."""
    if a.place != b.place:
        raise ValueError("square classes at different places")
    if a.place.is_real:
        return SquareClass(a.place, 0, a.unit * b.unit)
    return square_class_at(a.representative * b.representative, a.place)


def sc_identity(v: Place) -> SquareClass:
    return square_class_at(1, v)


def all_square_classes(v: Place) -> list[SquareClass]:
    """The full (finite) group Q_v*/Q_v*^2."""
    if v.is_real:
        return [square_class_at(1, v), square_class_at(-1, v)]
    p = v.p
    if p == 2:
        return [square_class_at(Fraction(2) ** e * u, v)
                for e in (0, 1) for u in (1, 3, 5, 7)]
    n = least_nonresidue(p)
    return [square_class_at(Fraction(p) ** e * u, v) for e in (0, 1) for u in (1, n)]


def sqrt_exact(n: int):
    """Integer square root if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    rn = sqrt_exact(q.numerator)
    rd = sqrt_exact(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def squarefree_part(n: int) -> int:
    """The squarefree kernel of a nonzero integer (keeps the sign)."""
    f = factor_integer(n)
    out = f.sign
    for p, e in f.factors:
        if e % 2:
            out *= p
    return out
