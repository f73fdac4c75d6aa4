"""Ordinary elliptic curves over F_q: isogeny-class sizes from class numbers,
and the brute-force curve census that checks them.

Curves are short Weierstrass models y^2 = x^3 + A x + B, so the census and
the j-invariant tables require p > 3.  The class-number path works for any q.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, gcd, isqrt

import numpy as np
from sympy import factorint

from .class_groups import class_number_order, fundamental_decomposition
from .finite_field import FieldDescriptor, FieldElement, field_of_order, make_field

ORACLE_MAX_Q = 2500
_CHUNK = 1 << 22


class SupersingularError(ValueError):
    pass


def _char(q):
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    return next(iter(fac))


def trace_sequence(a: int, q: int, n: int) -> int:
    """Trace of alpha^n: a_0 = 2, a_1 = a, a_{m+1} = a a_m - q a_{m-1}."""
    if a * a > 4 * q:
        raise ValueError(f"|{a}| exceeds the Hasse bound for q = {q}")
    prev, cur = 2, a
    if n == 0:
        return 2
    for _ in range(n - 1):
        prev, cur = cur, a * cur - q * prev
    return cur


def lucas_u(a: int, q: int, n: int) -> int:
    """(alpha^n - conj^n) / (alpha - conj): u_0 = 0, u_1 = 1, same recurrence."""
    prev, cur = 0, 1
    if n == 0:
        return 0
    for _ in range(n - 1):
        prev, cur = cur, a * cur - q * prev
    return cur


def conductor(a_n: int, Q: int):
    """(f, D_K) with a_n^2 - 4Q = f^2 D_K and D_K fundamental."""
    disc = a_n * a_n - 4 * Q
    if disc >= 0:
        raise ValueError(f"a^2 - 4q = {disc} is not negative")
    return fundamental_decomposition(disc)


@dataclass(frozen=True)
class FrobeniusData:
    q: int
    a: int
    D_K: int
    f1: int

    @classmethod
    def from_trace(cls, a, q):
        f1, D_K = conductor(a, q)
        return cls(q, a, D_K, f1)

    @property
    def p(self):
        return _char(self.q)

    @property
    def ordinary(self):
        return gcd(self.a, self.p) == 1


@dataclass
class IsogenyClassSummary:
    base: FrobeniusData
    n: int
    a_n: int
    f_n: int
    size: int
    members: frozenset | None = None

    def as_dict(self):
        out = {"q": self.base.q, "a": self.base.a, "n": self.n, "a_n": self.a_n,
               "f_n": self.f_n, "D_K": self.base.D_K, "size": self.size}
        if self.members is not None:
            out["members"] = sorted(int(j) for j in self.members)
        return out


def _divisors_with_factors(factors):
    items = list(factors.items())
    out = [(1, {})]
    for p, e in items:
        out = [(d * p**i, {**fd, p: i} if i else fd) for d, fd in out for i in range(e + 1)]
    return out


def sum_class_numbers(D_K: int, f: int) -> int:
    """sum over d | f of h(O_d) -- the unweighted Kronecker-Hurwitz count."""
    return sum(class_number_order(D_K, d, fd)
               for d, fd in _divisors_with_factors(factorint(f)))


def frobenius_conductor(a: int, q: int, n: int):
    """(a_n, f_n, D_K) using a_n^2 - 4q^n = (a^2 - 4q) u_n^2."""
    f1, D_K = conductor(a, q)
    return trace_sequence(a, q, n), f1 * abs(lucas_u(a, q, n)), D_K


def isogeny_class_summary(a: int, q: int, n: int = 1, members=False) -> IsogenyClassSummary:
    base = FrobeniusData.from_trace(a, q)
    if not base.ordinary:
        raise SupersingularError(f"trace {a} is divisible by p = {base.p}")
    if n < 1:
        raise ValueError("n must be >= 1")
    a_n, f_n, D_K = frobenius_conductor(a, q, n)
    size = sum_class_numbers(D_K, f_n)
    mem = isogeny_class_members(q**n, a_n) if members else None
    return IsogenyClassSummary(base, n, a_n, f_n, size, mem)


def isogeny_class_size(a: int, q: int, n: int = 1) -> int:
    """N(q^n, E) for the ordinary curve over F_q with trace a."""
    return isogeny_class_summary(a, q, n).size


def ordinary_traces(q: int):
    p = _char(q)
    bound = isqrt(4 * q)
    return [a for a in range(-bound, bound + 1) if a % p and a * a < 4 * q]


# --- brute force over short Weierstrass models -----------------------------

def _field(q_or_field):
    if isinstance(q_or_field, FieldDescriptor):
        return q_or_field
    return field_of_order(q_or_field)


def curve_traces(F: FieldDescriptor, A, B) -> np.ndarray:
    """Frobenius traces of y^2 = x^3 + A x + B for index arrays A, B."""
    A = np.atleast_1d(np.asarray(A, dtype=np.int64))
    B = np.atleast_1d(np.asarray(B, dtype=np.int64))
    x = F.all_indices()
    x3 = F.vmul(F.vmul(x, x), x)
    chi = F.quadratic_character
    out = np.empty(len(A), dtype=np.int64)
    step = max(1, _CHUNK // F.q)
    for s in range(0, len(A), step):
        a, b = A[s:s + step, None], B[s:s + step, None]
        rhs = F.vadd(F.vadd(x3, F.vmul(a, x)), b)
        out[s:s + step] = -chi[rhs].sum(axis=1, dtype=np.int64)
    return out


def _nonsingular_mask(F, A, B):
    four = F.from_int(4).__int__()
    t27 = F.from_int(27).__int__()
    disc = F.vadd(F.vmul(four, F.vpow(A, 3)), F.vmul(t27, F.vmul(B, B)))
    return disc != 0


def _require_oracle_field(q):
    F = _field(q)
    if F.p <= 3:
        raise ValueError("short Weierstrass census needs p > 3")
    if F.q > ORACLE_MAX_Q:
        raise ValueError(f"census limited to q <= {ORACLE_MAX_Q}")
    return F


def isomorphism_class_representatives(q):
    """One (A, B) per F_q-isomorphism class, found by marking twist orbits."""
    F = _require_oracle_field(q)
    n = F.q
    u = F.all_indices()[1:]
    u4 = F.vpow(u, 4)
    u6 = F.vpow(u, 6)
    A_all, B_all = np.divmod(np.arange(n * n, dtype=np.int64), n)
    seen = ~_nonsingular_mask(F, A_all, B_all)
    reps = []
    pos = 0
    while True:
        free = np.flatnonzero(~seen[pos:])
        if free.size == 0:
            break
        pos += int(free[0])
        A, B = divmod(pos, n)
        orbit = F.vmul(u4, A) * n + F.vmul(u6, B)
        seen[orbit] = True
        reps.append((A, B))
    return F, reps


def curve_census(q):
    """Rows (A, B, j, trace) for one model per isomorphism class."""
    F, reps = isomorphism_class_representatives(q)
    A = np.array([r[0] for r in reps], dtype=np.int64)
    B = np.array([r[1] for r in reps], dtype=np.int64)
    traces = curve_traces(F, A, B)
    rows = []
    for (a_, b_), t in zip(reps, traces):
        rows.append((a_, b_, int(j_invariant(F.from_index(a_), F.from_index(b_))), int(t)))
    return rows


def enumerate_curves_by_trace(q) -> dict:
    """Number of F_q-isomorphism classes of elliptic curves per trace."""
    counts = Counter(row[3] for row in curve_census(q))
    return dict(sorted(counts.items()))


def j_invariant(A: FieldElement, B: FieldElement) -> FieldElement:
    a3 = 4 * A**3
    return 1728 * a3 / (a3 + 27 * B * B)


def model_for_j(F: FieldDescriptor, j):
    """(A, B) indices of a curve with the given j-invariant."""
    j = F(j)
    if j == 0:
        return 0, 1
    if j == 1728:
        return 1, 0
    k = 1728 - j
    return int(3 * j * k), int(2 * j * k * k)


@lru_cache(maxsize=32)
def _j_trace_table(F: FieldDescriptor):
    """{j index: sorted traces of all its twists}."""
    if F.p <= 3:
        raise ValueError("j-invariant table needs p > 3")
    j0, j1728 = 0, int(F.from_int(1728))
    table = {}
    js = [j for j in range(F.q) if j not in (j0, j1728)]
    models = [model_for_j(F, F.from_index(j)) for j in js]
    if js:
        tr = curve_traces(F, [m[0] for m in models], [m[1] for m in models])
        for j, t in zip(js, tr):
            table[j] = (-abs(int(t)), abs(int(t))) if t else (0,)
    nz = F.all_indices()[1:]
    table[j0] = tuple(sorted(set(curve_traces(F, np.zeros_like(nz), nz).tolist())))
    table[j1728] = tuple(sorted(set(curve_traces(F, nz, np.zeros_like(nz)).tolist())))
    return table


def isogeny_class_members(q, a: int) -> frozenset:
    """j-invariants in F_q of curves with trace a or -a."""
    F = _field(q)
    if a % F.p == 0:
        raise SupersingularError(f"trace {a} is divisible by p = {F.p}")
    if F.q > ORACLE_MAX_Q * 40:
        raise ValueError("member enumeration is brute force; q too large")
    table = _j_trace_table(F)
    return frozenset(F.from_index(j) for j, ts in table.items() if a in ts or -a in ts)


# --- supersingular j-invariants --------------------------------------------

def _supersingular_by_trace(p):
    F = make_field(p, 2)
    js = F.all_indices()
    models = [model_for_j(F, F.from_index(int(j))) for j in js]
    tr = curve_traces(F, [m[0] for m in models], [m[1] for m in models])
    return frozenset(F.from_index(int(j)) for j, t in zip(js, tr) if t % p == 0)


def _supersingular_by_legendre(p):
    """Roots of the Deuring polynomial sum C(m,i)^2 l^i, m = (p-1)/2, mapped to j."""
    F = make_field(p, 2)
    m = (p - 1) // 2
    lam = F.all_indices()
    lam = lam[(lam != 0) & (lam != 1)]
    acc = np.zeros_like(lam)
    for i in range(m, -1, -1):
        acc = F.vadd(F.vmul(acc, lam), comb(m, i) ** 2 % p)
    roots = lam[acc == 0]
    one = 1
    l2 = F.vmul(roots, roots)
    num = F.vadd(F.vsub(l2, roots), one)
    num = F.vmul(256 % p, F.vpow(num, 3))
    den = F.vmul(l2, F.vpow(F.vsub(roots, one), 2))
    j = F.vmul(num, F.vinv(den))
    return frozenset(F.from_index(int(x)) for x in set(j.tolist()))


def supersingular_j_invariants(p: int, method: str = "trace") -> frozenset:
    """Supersingular j-invariants in F_{p^2}.

    ``method="trace"`` tests #E(F_{p^2}) = 1 mod p for one model per j;
    ``method="legendre"`` maps roots of the Deuring polynomial.
    """
    F = make_field(p, 2)
    if p <= 3:
        return frozenset({F.zero})
    if method == "trace":
        return _supersingular_by_trace(p)
    if method == "legendre":
        return _supersingular_by_legendre(p)
    raise ValueError(f"unknown method {method!r}")
