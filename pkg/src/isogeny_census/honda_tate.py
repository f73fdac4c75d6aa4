"""Weil q-polynomials for g <= 2: exact membership test, census, Newton polygons.

Coefficient lists run from the leading coefficient down, so a record's
``coeffs[i]`` is the coefficient of x^(2g - i).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, log

import numpy as np
from sympy import factorint

from . import intpoly


class FunctionalEquationError(ValueError):
    """Coefficients are not q-symmetric (or not monic of even degree)."""


def _prime_power(q):
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    return next(iter(fac.items()))


def check_functional_equation(coeffs, q):
    c = list(coeffs)
    d = len(c) - 1
    if d < 2 or d % 2 or c[0] != 1:
        raise FunctionalEquationError("need a monic polynomial of even degree >= 2")
    g = d // 2
    for i in range(g + 1):
        if c[d - i] != q ** (g - i) * c[i]:
            raise FunctionalEquationError(
                f"coefficient {d - i} is {c[d - i]}, expected {q ** (g - i) * c[i]}")
    return g


def _roots_in_hasse_interval(h, q):
    """All roots of h real and inside [-2 sqrt q, 2 sqrt q], decided exactly."""
    sf = intpoly.squarefree_part(h)
    d = intpoly.degree(sf)
    if intpoly.count_real_roots(sf) != d:
        return False
    # roots r of sf are real; r^2 <= 4q is read off G(x^2) = sf(x) sf(-x)
    neg = [c * (-1) ** (len(sf) - 1 - i) for i, c in enumerate(sf)]
    prod = intpoly.mul(sf, neg)
    G = prod[::2]  # only even powers survive
    Gsf = intpoly.squarefree_part(G)
    return intpoly.count_real_roots(Gsf, -1, 4 * q) == intpoly.degree(Gsf)


def is_weil_polynomial(coeffs, q) -> bool:
    """True iff every complex root has absolute value sqrt(q).

    Raises FunctionalEquationError when the coefficients are not q-symmetric.
    """
    check_functional_equation(coeffs, q)
    h = intpoly.real_weil_part(list(coeffs), q)
    return _roots_in_hasse_interval(h, q)


def _vp(n, p):
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def newton_polygon(coeffs, q):
    """Slopes (nondecreasing) of the lower hull of (i, v_p(c_i)/m), c_0 leading."""
    p, m = _prime_power(q)
    pts = [(i, Fraction(_vp(c, p), m)) for i, c in enumerate(coeffs) if c != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = (y2 - y1) / (x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return slopes


def is_ordinary(coeffs, q):
    p, _ = _prime_power(q)
    g = (len(coeffs) - 1) // 2
    return coeffs[g] % p != 0


@dataclass(frozen=True)
class WeilPolynomialRecord:
    g: int
    q: int
    coeffs: tuple
    newton_slopes: tuple
    ordinary: bool

    @classmethod
    def from_coeffs(cls, coeffs, q, check=True):
        coeffs = tuple(int(c) for c in coeffs)
        g = check_functional_equation(coeffs, q)
        if check and not is_weil_polynomial(coeffs, q):
            raise ValueError(f"{coeffs} has roots off the circle |z| = sqrt({q})")
        slopes = tuple(newton_polygon(coeffs, q))
        return cls(g, q, coeffs, slopes, slopes == tuple([Fraction(0)] * g + [Fraction(1)] * g))

    @property
    def real_polynomial(self):
        return intpoly.real_weil_part(list(self.coeffs), self.q)

    def __str__(self):
        d = len(self.coeffs) - 1
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                e = d - i
                mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
                terms.append(f"{c}{'*' if mono else ''}{mono}" if abs(c) != 1 or not mono
                             else ("-" if c < 0 else "") + mono)
        return " + ".join(terms).replace("+ -", "- ")


def _weil_g1(q):
    b = isqrt(4 * q)
    return [(1, -a, q) for a in range(b, -b - 1, -1)][::-1]


def _weil_g2(q):
    # x^4 + a1 x^3 + a2 x^2 + q a1 x + q^2 with real part y^2 + a1 y + (a2 - 2q)
    out = []
    b1 = isqrt(16 * q)
    for a1 in range(-b1, b1 + 1):
        for a2 in range(-6 * q, 6 * q + 1):
            h = [1, a1, a2 - 2 * q]
            if a1 * a1 - 4 * (a2 - 2 * q) < 0:
                continue
            if _roots_in_hasse_interval(h, q):
                out.append((1, a1, a2, q * a1, q * q))
    return out


def enumerate_weil_polynomials(g, q, ordinary_only=False):
    """All Weil q-polynomials of degree 2g in lexicographic coefficient order."""
    _prime_power(q)
    if g == 1:
        polys = _weil_g1(q)
    elif g == 2:
        polys = _weil_g2(q)
    else:
        raise ValueError("only g = 1 and g = 2 are supported")
    polys.sort()
    recs = [WeilPolynomialRecord.from_coeffs(c, q, check=False) for c in polys]
    if ordinary_only:
        recs = [r for r in recs if r.ordinary]
    return recs


@dataclass
class ScalingResult:
    g: int
    points: list  # (q, total, ordinary)
    slope: float
    slope_total: float
    target: float

    def as_dict(self):
        return {"g": self.g, "points": [list(p) for p in self.points], "slope": self.slope,
                "slope_total": self.slope_total, "target": self.target}


def census_scaling(g, q_list) -> ScalingResult:
    """Least-squares exponent of the ordinary count against q."""
    if len(q_list) < 3:
        raise ValueError("need at least 3 values of q")
    points = []
    for q in q_list:
        recs = enumerate_weil_polynomials(g, q)
        points.append((q, len(recs), sum(r.ordinary for r in recs)))
    lq = np.log([p[0] for p in points])
    slope = float(np.polyfit(lq, np.log([p[2] for p in points]), 1)[0])
    slope_total = float(np.polyfit(lq, np.log([p[1] for p in points]), 1)[0])
    return ScalingResult(g, points, slope, slope_total, g * (g + 1) / 4)
