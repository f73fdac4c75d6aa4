"""Exact univariate polynomial kernels over Z and Q.

Polynomials are lists of coefficients, highest degree first
(``[1, -1, 5]`` is x^2 - x + 5).  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb


def trim(f):
    f = list(f)
    while len(f) > 1 and f[0] == 0:
        f.pop(0)
    return f


def degree(f):
    f = trim(f)
    return -1 if f == [0] else len(f) - 1


def evaluate(f, x):
    acc = 0
    for c in f:
        acc = acc * x + c
    return acc


def derivative(f):
    n = len(f) - 1
    return trim([c * (n - i) for i, c in enumerate(f[:-1])]) or [0]


def sub(f, g):
    n = max(len(f), len(g))
    f = [0] * (n - len(f)) + list(f)
    g = [0] * (n - len(g)) + list(g)
    return trim([a - b for a, b in zip(f, g)])


def mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def divmod_poly(f, g):
    """Division over Q; returns (quotient, remainder) with Fraction coefficients."""
    f = [Fraction(c) for c in trim(f)]
    g = [Fraction(c) for c in trim(g)]
    if g == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [Fraction(0)], f
    quot = []
    rem = list(f)
    for _ in range(len(f) - dg):
        c = rem[0] / g[0]
        quot.append(c)
        for i, gc in enumerate(g):
            rem[i] -= c * gc
        rem.pop(0)
    return trim(quot), trim(rem) if rem else [Fraction(0)]


def gcd_poly(f, g):
    f, g = trim(f), trim(g)
    while g != [0]:
        f, g = g, divmod_poly(f, g)[1]
    return [c / f[0] for c in map(Fraction, f)]


def squarefree_part(f):
    g = gcd_poly(f, derivative(f))
    return divmod_poly(f, g)[0]


def sturm_sequence(f):
    seq = [[Fraction(c) for c in trim(f)], [Fraction(c) for c in derivative(f)]]
    while degree(seq[-1]) > 0:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if r == [0]:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(f, lo=None, hi=None):
    """Number of distinct real roots in (lo, hi]; None means the matching infinity."""
    seq = sturm_sequence(f)

    def at(x, side):
        if x is None:
            # sign at +-infinity: leading coefficient, flipped for odd degree at -inf
            return [s[0] * (1 if side > 0 or (len(s) - 1) % 2 == 0 else -1) for s in seq]
        return [evaluate(s, Fraction(x)) for s in seq]

    return _sign_changes(at(lo, -1)) - _sign_changes(at(hi, 1))


def sylvester_resultant(f, g):
    """Res(f, g) via a fraction-free (Bareiss) determinant of the Sylvester matrix."""
    f, g = trim(f), trim(g)
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return bareiss_det(rows)


def bareiss_det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def discriminant(f):
    """(-1)^(d(d-1)/2) Res(f, f') / lc(f)."""
    f = trim(f)
    d = len(f) - 1
    if d < 1:
        raise ValueError("discriminant of a constant")
    res = sylvester_resultant(f, derivative(f))
    num = (-1) ** (d * (d - 1) // 2) * res
    if num % f[0]:
        raise ArithmeticError("non-integral discriminant")
    return num // f[0]


def power_sums(f, count):
    """Power sums s_1..s_count of the roots of monic f (Newton's identities)."""
    f = trim(f)
    if f[0] != 1:
        raise ValueError("power sums need a monic polynomial")
    d = len(f) - 1
    e = [(-1) ** i * c for i, c in enumerate(f)]  # elementary symmetric e_0..e_d
    s = [d]
    for m in range(1, count + 1):
        acc = (-1) ** (m - 1) * m * e[m] if m <= d else 0
        for i in range(1, min(m - 1, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[m - i]
        s.append(acc)
    return s[1:]


def from_power_sums(sums, d):
    """Monic degree-d polynomial whose roots have the given power sums s_1..s_d."""
    e = [1]
    for m in range(1, d + 1):
        acc = sum((-1) ** (i - 1) * e[m - i] * sums[i - 1] for i in range(1, m + 1))
        if acc % m:
            raise ArithmeticError("power sums are not those of an integer polynomial")
        e.append(acc // m)
    return [(-1) ** i * c for i, c in enumerate(e)]


def root_power_polynomial(f, n):
    """Characteristic polynomial of alpha^n where alpha runs over the roots of monic f."""
    d = degree(f)
    sums = power_sums(f, n * d)
    return from_power_sums([sums[n * k - 1] for k in range(1, d + 1)], d)


def real_weil_part(f, q):
    """h with f(x) = x^g h(x + q/x) for a degree-2g q-symmetric monic f."""
    f = trim(f)
    d = len(f) - 1
    if d % 2:
        raise ValueError("odd degree")
    g = d // 2
    rem = list(f)
    h = [0] * (g + 1)
    for k in range(g, -1, -1):
        # coefficient of x^(g+k) in the remainder
        b = rem[d - (g + k)]
        h[g - k] = b
        # subtract b * x^(g-k) * (x^2 + q)^k
        for j in range(k + 1):
            deg_term = g - k + 2 * j
            rem[d - deg_term] -= b * comb(k, j) * q ** (k - j)
    if any(rem):
        raise ValueError("polynomial is not q-symmetric")
    return h
