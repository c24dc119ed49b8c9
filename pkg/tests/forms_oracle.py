"""Brute-force (narrow) class groups of quadratic fields via binary forms.

Independent oracle for the genus-theory shortcut: enumerates reduced
primitive forms of a fundamental discriminant, builds the class group with
Gauss composition, and reads off the 2-rank as log2(#Cl / #Cl^2).

For D < 0 the form class group is the class group; for D > 0 (proper
equivalence, cycles of reduced indefinite forms) it is the narrow class
group.
"""

import math
from math import gcd, isqrt


def solve_linmod(a, b, m):
    """x with a x = b (mod m); returns (x0, m/g)."""
    if m == 1:
        return 0, 1
    a %= m
    b %= m
    g = gcd(a, m)
    if b % g:
        raise ValueError("no solution")
    a2, b2, m2 = a // g, b // g, m // g
    x0 = (b2 * pow(a2, -1, m2)) % m2
    return x0, m2


def compose(f1, f2):
    """Gauss composition of two primitive forms of the same discriminant."""
    a, b, c = f1
    al, be, ga = f2
    g = (b + be) // 2
    h = -(b - be) // 2
    w = gcd(gcd(a, al), g)
    j = w
    s = a // w
    t = al // w
    u = g // w
    st = s * t
    mu, nu = solve_linmod(t * u, h * u + s * c, st)
    lam = solve_linmod(t * nu, h - t * mu, s)[0] if s > 1 else 0
    k = mu + nu * lam
    l_ = (k * t - h) // s
    m_ = (t * u * k - h * u - c * s) // st
    A = st
    B = j * u - (k * t + l_ * s)
    C = k * l_ - j * m_
    return (A, B, C)


# ---------------------------------------------------------------------------
# definite forms (D < 0)


def _reduce_def(f):
    a, b, c = f
    while True:
        if -a < b <= a <= c:
            break
        if a > c:
            a, b, c = c, -b, a
            continue
        # normalize b into (-a, a]
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c2 = a * r * r + b * r + c
        b, c = b2, c2
    if a == c and b < 0:
        b = -b
    return (a, b, c)


def _reduced_definite(D):
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


# ---------------------------------------------------------------------------
# indefinite forms (D > 0 non-square)


def _is_reduced_indef(f, D):
    a, b, c = f
    if b <= 0:
        return False
    if b * b >= D:
        return False
    t = 2 * abs(a)
    # sqrt(D) - b < t < sqrt(D) + b
    if (t + b) ** 2 <= D:
        return False
    if t - b >= 0 and (t - b) ** 2 >= D:
        return False
    return True


def _rho(f, D):
    a, b, c = f
    s = isqrt(D)
    ac = abs(c)
    if ac > s:
        # r = -b mod 2|c| in (-|c|, |c|]
        r = (-b) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    else:
        # r = -b mod 2|c| in (s - 2|c|, s]
        r = (-b) % (2 * ac)
        while r > s:
            r -= 2 * ac
        while r <= s - 2 * ac:
            r += 2 * ac
    c2 = (r * r - D) // (4 * c)
    return (c, r, c2)


def _reduce_indef(f, D):
    guard = 0
    while not _is_reduced_indef(f, D):
        f = _rho(f, D)
        guard += 1
        if guard > 10000:
            raise ArithmeticError("indefinite reduction did not terminate")
    return f


def _cycle(f, D):
    out = [f]
    g = _rho(f, D)
    g = _reduce_indef(g, D)
    while g != f:
        out.append(g)
        g = _reduce_indef(_rho(g, D), D)
    return frozenset(out)


def _reduced_indefinite(D):
    out = []
    s = isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        num = D - b * b
        if num <= 0 or num % 4:
            continue
        prod = num // 4  # = -a c = |a||c|
        a = 1
        while a * a <= prod:
            if prod % a == 0:
                for aa in (a, prod // a):
                    for sign in (1, -1):
                        f = (sign * aa, b, -sign * (prod // aa))
                        if _is_reduced_indef(f, D) and \
                                gcd(gcd(f[0], f[1]), f[2]) == 1 and f not in out:
                            out.append(f)
            a += 1
    return out


# ---------------------------------------------------------------------------
# group structure


def narrow_class_group_2rank(D):
    """(h, 2-rank) of the form class group of fundamental discriminant D."""
    if D >= 0 and isqrt(D) ** 2 == D:
        raise ValueError("discriminant must not be a square")
    if D % 4 not in (0, 1):
        raise ValueError("not a discriminant")
    if D < 0:
        forms = _reduced_definite(D)
        canon = _reduce_def
        reps = {canon(f): f for f in forms}
        ident = canon((1, D % 2, ((D % 2) - D) // 4))

        def class_id(f):
            return canon(f)
    else:
        forms = _reduced_indefinite(D)
        cycles = {}
        for f in forms:
            if any(f in cyc for cyc in cycles.values()):
                continue
            cyc = _cycle(f, D)
            cycles[min(cyc)] = cyc
        reps = {k: min(cyc) for k, cyc in cycles.items()}
        b0 = D % 2
        ident_form = _reduce_indef((1, b0 + 2 * ((isqrt(D) - b0) // 2),
                                    ((b0 + 2 * ((isqrt(D) - b0) // 2)) ** 2 - D) // 4),
                                   D)
        ident = min(_cycle(ident_form, D))

        def class_id(f):
            g = _reduce_indef(f, D)
            return min(_cycle(g, D))

    h = len(reps)
    squares = set()
    for f in reps.values():
        sq = compose(f, f)
        squares.add(class_id(sq))
    n_sq = len(squares)
    assert h % n_sq == 0
    quot = h // n_sq
    assert quot & (quot - 1) == 0
    return h, quot.bit_length() - 1
