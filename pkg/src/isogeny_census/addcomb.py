"""Set arithmetic over finite fields, sum-product measurements, and the
product-of-shifted-forms hypersurface R with its intersection search.

Sets are held as sorted numpy arrays of field *indices* (see
``finite_field``); integers passed in place of elements are read as indices,
which for a prime field are just residues.

Coordinates of R are 0-based here: block i (0 <= i < N) owns coordinates
6i .. 6i+5, with shift c[2i] on the first triple and c[2i+1] on the second.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from math import log

import numpy as np

from .finite_field import FieldDescriptor, FieldElement, FieldError, field_of_order

BITSET_MAX_Q = 1 << 20


# --- ground sets ------------------------------------------------------------

class GroundSet:
    """A sorted, duplicate-free subset of one finite field."""

    def __init__(self, field: FieldDescriptor, elements=()):
        self.field = field
        idx = []
        for e in elements:
            if isinstance(e, FieldElement):
                if e.field != field:
                    raise FieldError("element from a different field")
                idx.append(int(e))
            else:
                idx.append(int(e))
        arr = np.unique(np.asarray(idx, dtype=np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= field.q):
            raise ValueError("index outside the field")
        self.indices = arr

    @classmethod
    def from_indices(cls, field, arr):
        obj = cls.__new__(cls)
        obj.field = field
        obj.indices = np.unique(np.asarray(arr, dtype=np.int64))
        return obj

    @property
    def elements(self):
        return [self.field.from_index(int(i)) for i in self.indices]

    @cached_property
    def bitset(self):
        if self.field.q > BITSET_MAX_Q:
            return None
        b = np.zeros(self.field.q, dtype=bool)
        b[self.indices] = True
        return b

    def contains_indices(self, arr):
        if self.bitset is not None:
            return self.bitset[arr]
        return np.isin(arr, self.indices)

    def __len__(self):
        return int(self.indices.size)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        i = int(x)
        pos = np.searchsorted(self.indices, i)
        return pos < len(self.indices) and self.indices[pos] == i

    def __eq__(self, other):
        return (isinstance(other, GroundSet) and self.field == other.field
                and np.array_equal(self.indices, other.indices))

    def __repr__(self):
        return f"GroundSet({self.field!r}, {self.elements})"

    def shifted(self, s):
        """A + s for an element or integer s."""
        s_idx = int(self.field(s)) if not isinstance(s, FieldElement) else int(s)
        return GroundSet.from_indices(self.field, self.field.vadd(self.indices, s_idx))

    def tolist(self):
        return [int(i) for i in self.indices]


def _same_field(*sets):
    F = sets[0].field
    if any(s.field != F for s in sets):
        raise FieldError("sets come from different fields")
    return F


def set_op(A: GroundSet, B: GroundSet, op: str) -> GroundSet:
    """A+B, A-B, A*B, A/B (nonzero part of B) or (A+1)*(B+1)."""
    F = _same_field(A, B)
    a, b = A.indices[:, None], B.indices[None, :]
    if op == "sum":
        out = F.vadd(a, b)
    elif op == "difference":
        out = F.vsub(a, b)
    elif op == "product":
        out = F.vmul(a, b)
    elif op == "quotient":
        nz = B.indices[B.indices != 0]
        out = F.vmul(a, F.vinv(nz)[None, :]) if nz.size else np.empty(0, dtype=np.int64)
    elif op == "shifted_product":
        out = F.vmul(F.vadd(a, 1), F.vadd(b, 1))
    else:
        raise ValueError(f"unknown op {op!r}")
    return GroundSet.from_indices(F, np.ravel(out))


# --- abelian groups for Ruzsa checks -----------------------------------------

class CyclicGroup:
    """Z/m under addition; elements are 0..m-1."""

    def __init__(self, m):
        self.m = m

    def combine(self, a, b, sign):
        a = np.asarray(a)[:, None]
        b = np.asarray(b)[None, :]
        return np.unique((a + sign * b) % self.m)

    def __repr__(self):
        return f"Z/{self.m}"


class FieldAdditiveGroup:
    def __init__(self, F):
        self.F = F

    def combine(self, a, b, sign):
        a = np.asarray(a)[:, None]
        b = np.asarray(b)[None, :]
        out = self.F.vadd(a, b) if sign > 0 else self.F.vsub(a, b)
        return np.unique(out)

    def __repr__(self):
        return f"({self.F!r}, +)"


class FieldMultiplicativeGroup:
    """F_q^x with table lookups; sign -1 means division."""

    def __init__(self, F):
        if F.q > 4096:
            raise ValueError("multiplicative tables limited to q <= 4096")
        self.F = F
        idx = F.all_indices()
        self.table = F.vmul(idx[:, None], idx[None, :])
        inv = np.zeros(F.q, dtype=np.int64)
        inv[1:] = F.vinv(idx[1:])
        self.inv = inv

    def combine(self, a, b, sign):
        a = np.asarray(a)
        b = np.asarray(b)
        if np.any(a == 0) or np.any(b == 0):
            raise ValueError("0 is not in the multiplicative group")
        if sign < 0:
            b = self.inv[b]
        return np.unique(self.table[a[:, None], b[None, :]])

    def __repr__(self):
        return f"({self.F!r}^x, *)"


def _signs(pattern):
    out = []
    for s in pattern:
        if s in ("+", 1, "plus"):
            out.append(1)
        elif s in ("-", -1, "minus"):
            out.append(-1)
        else:
            raise ValueError(f"bad sign {s!r}")
    return out


@dataclass
class RuzsaCheck:
    lhs: int
    rhs: int
    holds: bool


def _as_indices(S):
    return S.indices if isinstance(S, GroundSet) else np.unique(np.asarray(list(S), dtype=np.int64))


def check_ruzsa(A, B, sign_pattern, C=None, group=None) -> RuzsaCheck:
    """Corollary form |A s1 A||B| <= |A s2 B|^2 (two signs, C omitted) or
    triangle form |A s1 C||B| <= |A s2 B||B s3 C| (three signs)."""
    a, b = _as_indices(A), _as_indices(B)
    if a.size == 0 or b.size == 0 or (C is not None and _as_indices(C).size == 0):
        raise ValueError("Ruzsa check needs nonempty sets")
    if group is None:
        if not isinstance(A, GroundSet):
            raise ValueError("group required for plain integer sets")
        group = FieldAdditiveGroup(A.field)
    signs = _signs(sign_pattern)
    if C is None:
        if len(signs) != 2:
            raise ValueError("corollary form takes two signs")
        s1, s2 = signs
        lhs = len(group.combine(a, a, s1)) * len(b)
        rhs = len(group.combine(a, b, s2)) ** 2
    else:
        if len(signs) != 3:
            raise ValueError("triangle form takes three signs")
        c = _as_indices(C)
        s1, s2, s3 = signs
        lhs = len(group.combine(a, c, s1)) * len(b)
        rhs = len(group.combine(a, b, s2)) * len(group.combine(b, c, s3))
    return RuzsaCheck(lhs, rhs, lhs <= rhs)


@dataclass
class SweepResult:
    trials: int
    checks: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


_PRIME_POWERS_64 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37,
                    41, 43, 47, 49, 53, 59, 61, 64]


def ruzsa_sweep(trials=10_000, seed=0, family="cyclic", form="corollary") -> SweepResult:
    """Random pairs (or triples) in Z/m, m <= 64, or in F_q^x, q <= 64."""
    rng = np.random.default_rng(seed)
    groups = {}
    out = SweepResult(trials, 0)
    patterns = list(itertools.product("+-", repeat=2 if form == "corollary" else 3))
    for t in range(trials):
        if family == "cyclic":
            m = int(rng.integers(2, 65))
            grp = groups.setdefault(m, CyclicGroup(m))
            universe = np.arange(m)
        elif family == "multiplicative":
            q = int(rng.choice(_PRIME_POWERS_64[1:]))
            if q not in groups:
                groups[q] = FieldMultiplicativeGroup(field_of_order(q))
            grp = groups[q]
            universe = np.arange(1, q)
        else:
            raise ValueError(f"unknown family {family!r}")
        sets = []
        for _ in range(2 if form == "corollary" else 3):
            size = int(rng.integers(1, len(universe) + 1))
            sets.append(rng.choice(universe, size=size, replace=False))
        for pat in patterns:
            if form == "corollary":
                r = check_ruzsa(sets[0], sets[1], pat, group=grp)
            else:
                r = check_ruzsa(sets[0], sets[1], pat, C=sets[2], group=grp)
            out.checks += 1
            if not r.holds:
                out.violations.append((repr(grp), pat, [s.tolist() for s in sets], r.lhs, r.rhs))
    return out


# --- sum-product -------------------------------------------------------------

def subfield_concentration(A: GroundSet, d: int) -> int:
    """max over c != 0 of |A intersect c F_1|, F_1 the subfield of order p^d."""
    F = A.field
    if d < 1 or F.k % d:
        raise FieldError(f"{d} does not divide the extension degree {F.k}")
    nz = A.indices[A.indices != 0]
    has_zero = len(nz) < len(A)
    if nz.size == 0:
        return int(has_zero)
    # a, b lie in one dilate c F_1 iff a^(p^d - 1) = b^(p^d - 1)
    keys = F.vpow(nz, F.p**d - 1)
    return int(np.unique(keys, return_counts=True)[1].max()) + int(has_zero)


@dataclass
class SumProductStats:
    size: int
    sumset: int
    productset: int
    shifted_productset: int
    exponents: tuple
    max_exponent: float
    threshold: float

    @property
    def meets_threshold(self):
        return self.max_exponent >= self.threshold


def sum_product_stats(A: GroundSet, slack=0.1) -> SumProductStats:
    if len(A) < 2:
        raise ValueError("need |A| >= 2")
    sizes = (len(set_op(A, A, "sum")), len(set_op(A, A, "product")),
             len(set_op(A, A, "shifted_product")))
    exps = tuple(log(s) / log(len(A)) for s in sizes)
    return SumProductStats(len(A), *sizes, exps, max(exps), 12 / 11 - slack)


def expander_image(A: GroundSet, B: GroundSet, C: GroundSet, shift=0) -> GroundSet:
    """(A+s)(B+s) + (C+s) as a set."""
    F = _same_field(A, B, C)
    s = int(shift) % F.p
    a = F.vadd(A.indices, s)[:, None]
    b = F.vadd(B.indices, s)[None, :]
    prods = np.unique(F.vmul(a, b))
    out = F.vadd(prods[:, None], F.vadd(C.indices, s)[None, :])
    return GroundSet.from_indices(F, out.ravel())


def distinct_pair_products(A: GroundSet, c, d: int):
    """For A' = (A cap c F_1) + 1: (|A'|, number of unordered pairs with repetition,
    number of distinct products a1 a2, whether distinct pairs give distinct products)."""
    F = A.field
    c_idx = int(F(c)) if not isinstance(c, FieldElement) else int(c)
    sub = F.vpow(F.all_indices(), F.p**d) == F.all_indices()
    sub_idx = np.flatnonzero(sub)
    line = np.unique(F.vmul(sub_idx, c_idx))
    Ap = F.vadd(np.intersect1d(A.indices, line), 1)
    iu, ju = np.triu_indices(len(Ap))
    prods = F.vmul(Ap[iu], Ap[ju])
    n_pairs = len(iu)
    distinct = len(np.unique(prods))
    return len(Ap), n_pairs, distinct, distinct == n_pairs


# --- dot products --------------------------------------------------------------

@dataclass
class DotProductCheck:
    avoids: bool
    product: int
    bound: int
    holds: bool


def _vectors(F, vecs, n):
    arr = np.array([[int(x) for x in v] for v in vecs], dtype=np.int64).reshape(-1, n)
    if arr.size and (arr.min() < 0 or arr.max() >= F.q):
        raise ValueError("coordinate outside the field")
    return arr


def check_dot_product_bound(A, B, q, n, field=None) -> DotProductCheck:
    """Does A x B avoid x.y = 0, and if so is |A||B| <= q^(n+2)?"""
    F = field or field_of_order(q)
    a, b = _vectors(F, A, n), _vectors(F, B, n)
    if (a.size and np.any(~a.any(axis=1))) or (b.size and np.any(~b.any(axis=1))):
        raise ValueError("sets must not contain the zero vector")
    a, b = np.unique(a, axis=0), np.unique(b, axis=0)
    dots = np.zeros((len(a), len(b)), dtype=np.int64)
    for i in range(n):
        dots = F.vadd(dots, F.vmul(a[:, None, i], b[None, :, i]))
    avoids = bool(np.all(dots != 0))
    product = len(a) * len(b)
    bound = q ** (n + 2)
    return DotProductCheck(avoids, product, bound, (not avoids) or product <= bound)


def _nonzero_vectors(F, n):
    grid = np.array(list(itertools.product(range(F.q), repeat=n)), dtype=np.int64)
    return grid[grid.any(axis=1)]


def dot_product_exhaustive(q=2, n=2) -> SweepResult:
    """Every pair of subsets of nonzero vectors of F_q^n."""
    F = field_of_order(q)
    vecs = _nonzero_vectors(F, n)
    if len(vecs) > 12:
        raise ValueError("exhaustive check limited to 12 nonzero vectors")
    out = SweepResult(0, 0)
    subsets = [s for r in range(1, len(vecs) + 1) for s in itertools.combinations(range(len(vecs)), r)]
    for sa in subsets:
        for sb in subsets:
            r = check_dot_product_bound(vecs[list(sa)], vecs[list(sb)], q, n, F)
            out.checks += 1
            if not r.holds:
                out.violations.append((q, n, sa, sb))
    out.trials = out.checks
    return out


def dot_product_sweep(trials=10_000, seed=0, qs=(2, 3, 4, 5, 7, 8, 9), ns=(1, 2, 3)) -> SweepResult:
    """``trials`` random avoiding pairs: random A, then B a random subset of
    everything A avoids (draws of A that avoid nothing are redrawn)."""
    rng = np.random.default_rng(seed)
    cache = {}
    out = SweepResult(trials, 0)
    draws = 0
    while out.checks < trials:
        draws += 1
        if draws > 100 * trials + 1000:
            raise RuntimeError("could not draw enough avoiding pairs")
        q, n = int(rng.choice(qs)), int(rng.choice(ns))
        if (q, n) not in cache:
            F = field_of_order(q)
            vecs = _nonzero_vectors(F, n)
            dots = np.zeros((len(vecs), len(vecs)), dtype=np.int64)
            for i in range(n):
                dots = F.vadd(dots, F.vmul(vecs[:, None, i], vecs[None, :, i]))
            cache[(q, n)] = (F, vecs, dots != 0)
        F, vecs, nz = cache[(q, n)]
        size_a = int(rng.integers(1, min(len(vecs), 8) + 1))
        ia = rng.choice(len(vecs), size=size_a, replace=False)
        ok_b = np.flatnonzero(nz[ia].all(axis=0))
        if ok_b.size == 0:
            continue
        keep = ok_b[rng.random(ok_b.size) < rng.uniform(0.5, 1.0)]
        if keep.size == 0:
            keep = ok_b[:1]
        r = check_dot_product_bound(vecs[ia], vecs[keep], q, n, F)
        out.checks += 1
        if not r.holds:
            out.violations.append((q, n, ia.tolist(), keep.tolist()))
    return out


# --- the hypersurface R ----------------------------------------------------------

@dataclass(frozen=True)
class StructuredHypersurface:
    N: int
    shift_vectors: tuple

    @property
    def arity(self):
        return 6 * self.N

    @property
    def factor_count(self):
        return len(self.shift_vectors)

    @property
    def degree(self):
        return 4 * self.factor_count

    def describe(self):
        blocks = []
        for i in range(self.N):
            b = 6 * i + 1
            blocks.append({"block": i + 1, "first_triple": [b, b + 1, b + 2],
                           "second_triple": [b + 3, b + 4, b + 5],
                           "shift_components": [2 * i + 1, 2 * i + 2]})
        return {"N": self.N, "arity": self.arity, "factors": self.factor_count,
                "degree": self.degree, "P": "x*y + z",
                "Q_c": "sum over blocks of P(first triple + c_{2i-1}) * P(second triple + c_{2i})",
                "blocks": blocks, "shift_vectors": [list(c) for c in self.shift_vectors]}


def build_hypersurface(N: int) -> StructuredHypersurface:
    if N < 1:
        raise ValueError("N must be >= 1")
    return StructuredHypersurface(N, tuple(itertools.product((0, 1), repeat=2 * N)))


def _P(x, y, z):
    return x * y + z


def Q_value(H: StructuredHypersurface, c, x):
    """Q_c at a tuple of FieldElements (plain scalar arithmetic)."""
    total = x[0].field.zero
    for i in range(H.N):
        s, t = c[2 * i], c[2 * i + 1]
        b = 6 * i
        total = total + _P(x[b] + s, x[b + 1] + s, x[b + 2] + s) * _P(x[b + 3] + t, x[b + 4] + t, x[b + 5] + t)
    return total


def _coerce_tuple(x, field):
    if field is None:
        field = next((e.field for e in x if isinstance(e, FieldElement)), None)
        if field is None:
            raise ValueError("pass field= for integer coordinates")
    return [field(e) if not isinstance(e, FieldElement) else e for e in x], field


def evaluate_R(H: StructuredHypersurface, x, field=None, early_exit=True):
    """(R(x), first shift vector whose factor vanishes or None)."""
    if len(x) != H.arity:
        raise ValueError(f"expected {H.arity} coordinates, got {len(x)}")
    x, F = _coerce_tuple(x, field)
    if any(e.field != F for e in x):
        raise FieldError("coordinates from different fields")
    value = F.one
    witness = None
    for c in H.shift_vectors:
        v = Q_value(H, c, x)
        if v.is_zero() and witness is None:
            witness = c
            if early_exit:
                return F.zero, witness
        value = value * v
    return value, witness


@dataclass
class SearchResult:
    witness: tuple | None
    shift: tuple | None
    evaluations: int
    space: int
    budget: int
    mode: str

    @property
    def found(self):
        return self.witness is not None

    @property
    def searched_fraction(self):
        return self.evaluations / self.space if self.space else 1.0

    def as_dict(self):
        return {"found": self.found,
                "witness": [int(e) for e in self.witness] if self.witness else None,
                "shift": list(self.shift) if self.shift else None,
                "evaluations": self.evaluations, "space": self.space,
                "searched_fraction": self.searched_fraction, "budget": self.budget,
                "mode": self.mode}


def _block_partial(F, cols, c, N, upto):
    """sum over blocks < upto of P1 * P2 for index arrays in cols."""
    total = 0
    for i in range(upto):
        s, t = c[2 * i], c[2 * i + 1]
        b = 6 * i
        p1 = F.vadd(F.vmul(F.vadd(cols[b], s), F.vadd(cols[b + 1], s)), F.vadd(cols[b + 2], s))
        p2 = F.vadd(F.vmul(F.vadd(cols[b + 3], t), F.vadd(cols[b + 4], t)), F.vadd(cols[b + 5], t))
        total = F.vadd(total, F.vmul(p1, p2))
    return total


def _scan_structured(F, classes, member_last, shifts, N, budget, first_values):
    """Solve the last coordinate; vectorise over the second-to-last."""
    ar = 6 * N
    last_free = classes[ar - 2]
    prefix_classes = [first_values] + classes[1:ar - 2]
    evals = 0
    neg = F.vneg
    for c in shifts:
        s, t = c[-2], c[-1]
        for prefix in itertools.product(*prefix_classes):
            if evals >= budget:
                return None, None, evals
            take = min(len(last_free), budget - evals)
            x5 = last_free[:take]
            evals += take
            cols = [np.int64(v) for v in prefix]
            S = _block_partial(F, cols, c, N, N - 1) if N > 1 else 0
            b = 6 * (N - 1)
            p1 = int(F.vadd(F.vmul(F.vadd(cols[b], s), F.vadd(cols[b + 1], s)), F.vadd(cols[b + 2], s)))
            uv = F.vmul(F.vadd(cols[b + 3], t), F.vadd(x5, t))
            if p1 == 0:
                if int(S) != 0:
                    continue
                x6 = np.full(len(x5), member_last.indices[0])
            else:
                # p1 * (uv + x6 + t) + S = 0
                quotient = F.vmul(neg(np.int64(S)), F.vinv(np.array([p1]))[0])
                x6 = F.vsub(F.vsub(quotient, uv), t)
            hit = np.flatnonzero(member_last.contains_indices(x6))
            if hit.size:
                h = int(hit[0])
                return tuple(int(v) for v in prefix) + (int(x5[h]), int(x6[h])), c, evals - take + h + 1
    return None, None, evals


def _scan_lex(F, classes, shifts, N, budget, first_values):
    """Plain lexicographic scan of the full product, vectorised over the last coordinate."""
    ar = 6 * N
    last = classes[ar - 1]
    evals = 0
    for prefix in itertools.product(first_values, *classes[1:ar - 1]):
        if evals >= budget:
            return None, None, evals
        take = min(len(last), budget - evals)
        xl = last[:take]
        evals += take
        cols = [np.int64(v) for v in prefix] + [xl]
        zero_any = np.zeros(take, dtype=bool)
        first_c = np.full(take, -1)
        for ci, c in enumerate(shifts):
            qv = _block_partial(F, cols, c, N, N)
            z = (np.broadcast_to(qv, (take,)) == 0) & ~zero_any
            first_c[z] = ci
            zero_any |= z
        hit = np.flatnonzero(zero_any)
        if hit.size:
            h = int(hit[0])
            return tuple(int(v) for v in prefix) + (int(xl[h]),), shifts[first_c[h]], evals - take + h + 1
    return None, None, evals


def _scan_shard(args):
    F, classes, member_last_idx, shifts, N, budget, first_values, mode = args
    if mode == "structured":
        member_last = GroundSet.from_indices(F, member_last_idx)
        return _scan_structured(F, classes, member_last, shifts, N, budget, first_values)
    return _scan_lex(F, classes, shifts, N, budget, first_values)


def hypersurface_search(classes, H: StructuredHypersurface, budget=10**6, mode="structured",
                        seed=None, workers=1) -> SearchResult:
    """Look for a point of classes[0] x ... x classes[6N-1] on R = 0.

    ``mode="structured"`` fixes all but the last coordinate and solves for it
    (Q_c is affine in that coordinate); ``mode="lex"`` scans the full product.
    With ``seed`` each class is visited in a seeded random order.  Workers split
    the first coordinate into contiguous shards with equal budget shares; the
    witness returned is the one a single worker would reach first, so with an
    ample budget the worker count never changes the answer.
    """
    if len(classes) != H.arity:
        raise ValueError(f"need {H.arity} classes, got {len(classes)}")
    if any(len(c) == 0 for c in classes):
        raise ValueError("empty class")
    F = _same_field(*classes)
    N = H.N
    rng = np.random.default_rng(seed) if seed is not None else None
    cols = [rng.permutation(c.indices) if rng is not None else c.indices.copy() for c in classes]
    sizes = [len(c) for c in classes]
    inner = int(np.prod([float(s) for s in sizes[:-1]])) if mode == "structured" else int(np.prod([float(s) for s in sizes]))
    space = inner * (len(H.shift_vectors) if mode == "structured" else 1)
    if budget <= 0:
        return SearchResult(None, None, 0, space, budget, mode)
    workers = max(1, min(workers, len(cols[0])))
    shards = np.array_split(cols[0], workers)
    share = -(-budget // workers)
    jobs = [(F, cols, classes[-1].indices, H.shift_vectors, N, share, sh, mode) for sh in shards]
    if workers == 1:
        results = [_scan_shard(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_shard, jobs))
    evals = sum(r[2] for r in results)
    found = [r for r in results if r[0] is not None]
    if not found:
        return SearchResult(None, None, evals, space, budget, mode)
    # earliest in the single-worker scan order: shift vector first (structured
    # mode scans c outermost), then shard, since shards split coordinate 0 in order
    order = {c: i for i, c in enumerate(H.shift_vectors)}
    key = (lambda i: (order[results[i][1]], i)) if mode == "structured" else (lambda i: i)
    best = results[min((i for i, r in enumerate(results) if r[0] is not None), key=key)]
    witness = tuple(F.from_index(i) for i in best[0])
    return SearchResult(witness, best[1], evals, space, budget, mode)
