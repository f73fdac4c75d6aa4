"""Class numbers of imaginary quadratic orders.

Two routes that share no code:

* ``class_number_forms`` counts reduced primitive binary quadratic forms.
* ``class_number_order`` applies the conductor formula to a class number
  of the maximal order obtained from Dirichlet's finite character sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd

from sympy import factorint


class DiscriminantError(ValueError):
    pass


def kronecker_symbol(D: int, m: int) -> int:
    """Kronecker symbol (D/m) for m >= 1."""
    if m < 1:
        raise ValueError("m must be positive")
    result = 1
    while m % 2 == 0:
        m //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/m), m odd
    a = D % m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def is_fundamental(D: int) -> bool:
    if D == 1 or D == 0:
        return False
    if D % 4 == 1:
        return all(e == 1 for e in factorint(abs(D)).values())
    if D % 4 == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(abs(m)).values())
    return False


def _check_disc(disc):
    if disc >= 0 or disc % 4 not in (0, 1):
        raise DiscriminantError(f"{disc} is not a negative discriminant")


def reduced_forms(disc: int):
    """Reduced primitive forms (a, b, c) of discriminant disc < 0."""
    _check_disc(disc)
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def class_number_forms(disc: int) -> int:
    return len(reduced_forms(disc))


@lru_cache(maxsize=None)
def class_number_fundamental(D_K: int) -> int:
    """h(D_K) by Dirichlet's formula h = -(w / 2|D|) * sum_{a<|D|} (D/a) a."""
    if D_K >= 0 or not is_fundamental(D_K):
        raise DiscriminantError(f"{D_K} is not a negative fundamental discriminant")
    w = {-3: 6, -4: 4}.get(D_K, 2)
    n = -D_K
    s = sum(kronecker_symbol(D_K, a) * a for a in range(1, n))
    h, r = divmod(-w * s, 2 * n)
    assert r == 0 and h > 0, (D_K, s)
    return h


def unit_index(D_K: int, f: int) -> int:
    if f == 1:
        return 1
    return {-3: 3, -4: 2}.get(D_K, 1)


def class_number_order(D_K: int, f: int, factors: dict | None = None) -> int:
    """h of the order of conductor f in Q(sqrt(D_K)) by the conductor formula.

    ``factors`` may carry a precomputed factorisation of f.
    """
    if f < 1:
        raise ValueError("conductor must be positive")
    h = class_number_fundamental(D_K)
    if factors is None:
        factors = factorint(f)
    # f * prod(1 - (D/p)/p) = prod over p^e || f of p^(e-1) (p - (D/p))
    num = 1
    for p, e in factors.items():
        num *= p ** (e - 1) * (p - kronecker_symbol(D_K, p))
    total, r = divmod(h * num, unit_index(D_K, f))
    if r:
        raise ArithmeticError(f"non-integral class number for ({D_K}, {f})")
    return total


def class_number_order_as_printed(D_K: int, f: int) -> Fraction:
    """The Euler factor without the 1/p: f * h / u * prod(1 - (D/p)).

    Kept for comparison only; it disagrees with the forms count.
    """
    h = class_number_fundamental(D_K)
    num = f * h
    for p in factorint(f):
        num *= 1 - kronecker_symbol(D_K, p)
    return Fraction(num, unit_index(D_K, f))


def fundamental_decomposition(disc: int):
    """Write disc = f^2 * D_K with D_K fundamental; returns (f, D_K)."""
    if disc == 0 or disc % 4 not in (0, 1):
        raise DiscriminantError(f"{disc} is not a discriminant")
    sign = -1 if disc < 0 else 1
    f = 1
    core = sign
    for p, e in factorint(abs(disc)).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    if core % 4 != 1:
        core *= 4
        f //= 2
    return f, core


@dataclass(frozen=True)
class OrderDescriptor:
    D_K: int
    f: int

    def __post_init__(self):
        if self.D_K >= 0 or not is_fundamental(self.D_K):
            raise DiscriminantError(f"{self.D_K} is not a negative fundamental discriminant")
        if self.f < 1:
            raise ValueError("conductor must be positive")

    @property
    def disc(self):
        return self.f * self.f * self.D_K

    @property
    def class_number(self):
        return class_number_order(self.D_K, self.f)

    @classmethod
    def from_disc(cls, disc):
        f, D_K = fundamental_decomposition(disc)
        return cls(D_K, f)


def fundamental_discriminants(lo: int, hi: int):
    """Negative fundamental discriminants D with lo <= D <= hi, descending."""
    return [D for D in range(hi, lo - 1, -1) if D < 0 and is_fundamental(D)]

