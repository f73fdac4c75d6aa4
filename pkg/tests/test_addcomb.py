import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from isogeny_census.addcomb import (
    CyclicGroup, FieldMultiplicativeGroup, GroundSet, Q_value, build_hypersurface,
    check_dot_product_bound, check_ruzsa, distinct_pair_products, dot_product_exhaustive,
    dot_product_sweep, evaluate_R, expander_image, hypersurface_search, ruzsa_sweep, set_op,
    subfield_concentration, sum_product_stats)
from isogeny_census.finite_field import FieldError, make_field

FIELDS = [(5, 1), (7, 1), (13, 1), (2, 3), (3, 2), (2, 4)]


@st.composite
def field_sets(draw, count=2):
    p, k = draw(st.sampled_from(FIELDS))
    F = make_field(p, k)
    sets = [draw(st.sets(st.integers(0, F.q - 1), min_size=1, max_size=F.q)) for _ in range(count)]
    return F, sets


def brute(F, A, B, op):
    els_a = [F.from_index(i) for i in A]
    els_b = [F.from_index(i) for i in B]
    if op == "sum":
        return {int(a + b) for a in els_a for b in els_b}
    if op == "difference":
        return {int(a - b) for a in els_a for b in els_b}
    if op == "product":
        return {int(a * b) for a in els_a for b in els_b}
    if op == "quotient":
        return {int(a / b) for a in els_a for b in els_b if not b.is_zero()}
    return {int((a + 1) * (b + 1)) for a in els_a for b in els_b}


@given(field_sets(), st.sampled_from(["sum", "difference", "product", "quotient", "shifted_product"]))
def test_set_ops_match_brute_force(data, op):
    F, (A, B) = data
    got = set_op(GroundSet(F, A), GroundSet(F, B), op).tolist()
    assert got == sorted(brute(F, A, B, op))


def test_set_op_examples():
    F = make_field(7)
    A = GroundSet(F, [1, 2])
    assert set_op(A, A, "sum").tolist() == [2, 3, 4]
    assert set_op(A, A, "product").tolist() == [1, 2, 4]
    assert set_op(A, GroundSet(F, [0]), "quotient").tolist() == []
    with pytest.raises(ValueError):
        set_op(A, A, "xor")
    with pytest.raises(FieldError):
        set_op(A, GroundSet(make_field(5), [1]), "sum")
    assert A.shifted(6).tolist() == [0, 1]
    assert F(2) in A and 3 not in A


def test_ruzsa_examples():
    Z = CyclicGroup(10)
    r = check_ruzsa([0, 1, 2], [0, 5], "+-", group=Z)
    assert (r.lhs, r.rhs, r.holds) == (5 * 2, 6 * 6, True)
    with pytest.raises(ValueError):
        check_ruzsa([], [1], "++", group=Z)
    with pytest.raises(ValueError):
        check_ruzsa([1], [1], "+++", group=Z)


@given(st.integers(2, 40), st.data())
def test_ruzsa_triangle_cyclic(m, data):
    sets = [data.draw(st.sets(st.integers(0, m - 1), min_size=1)) for _ in range(3)]
    signs = data.draw(st.tuples(*[st.sampled_from("+-")] * 3))
    r = check_ruzsa(list(sets[0]), list(sets[1]), signs, C=list(sets[2]), group=CyclicGroup(m))
    assert r.holds


def test_multiplicative_group_combine():
    F = make_field(2, 3)
    G = FieldMultiplicativeGroup(F)
    a, b = np.array([2, 3]), np.array([5])
    expect = sorted({int(F.from_index(int(x)) * F.from_index(int(y))) for x in a for y in b})
    assert sorted(G.combine(a, b, 1).tolist()) == expect
    expect_div = sorted({int(F.from_index(int(x)) / F.from_index(int(y))) for x in a for y in b})
    assert sorted(G.combine(a, b, -1).tolist()) == expect_div


def test_ruzsa_sweeps_small():
    for fam in ("cyclic", "multiplicative"):
        for form in ("corollary", "triangle"):
            r = ruzsa_sweep(300, seed=7, family=fam, form=form)
            assert r.ok and r.checks == 300 * (4 if form == "corollary" else 8)
    with pytest.raises(ValueError):
        ruzsa_sweep(1, family="rings")


def test_subfield_concentration():
    F = make_field(2, 4)
    sub = [int(x) for x in F.elements() if x ** 4 == x]
    assert subfield_concentration(GroundSet(F, sub), 2) == 4
    # a dilate c * F_4 with c outside F_4 still concentrates 4 elements
    c = next(x for x in F.elements() if x ** 4 != x)
    line = [int(c * F.from_index(i)) for i in sub]
    assert subfield_concentration(GroundSet(F, line), 2) == 4
    with pytest.raises(FieldError):
        subfield_concentration(GroundSet(F, sub), 3)


@given(st.sampled_from([(2, 4), (3, 2), (2, 6)]), st.data())
def test_subfield_concentration_brute(pk, data):
    F = make_field(*pk)
    d = data.draw(st.sampled_from([d for d in range(1, F.k) if F.k % d == 0]))
    A = data.draw(st.sets(st.integers(0, F.q - 1), min_size=1))
    sub = [x for x in F.elements() if x ** (F.p ** d) == x]
    best = max(len({int(c * s) for s in sub} & A) for c in F.elements() if not c.is_zero())
    assert subfield_concentration(GroundSet(F, A), d) == best


def test_sum_product_stats():
    F = make_field(101)
    A = GroundSet(F, range(1, 11))
    st_ = sum_product_stats(A)
    assert (st_.sumset, st_.size) == (19, 10)
    assert st_.threshold == pytest.approx(12 / 11 - 0.1)
    assert st_.meets_threshold
    with pytest.raises(ValueError):
        sum_product_stats(GroundSet(F, [3]))


def test_expander_and_pair_products():
    F = make_field(7)
    A = GroundSet(F, [0, 1])
    img = expander_image(A, A, A, 0)
    assert img.tolist() == sorted({(a * b + c) % 7 for a in (0, 1) for b in (0, 1) for c in (0, 1)})
    size, pairs, distinct, ok = distinct_pair_products(GroundSet(F, [1, 2]), 1, 1)
    assert (size, pairs) == (2, 3)
    assert distinct == len({(a * b) % 7 for a, b in [(2, 2), (2, 3), (3, 3)]})


def test_dot_product_examples():
    r = check_dot_product_bound([[1, 0]], [[1, 1]], 2, 2)
    assert r.avoids and r.product == 1 and r.bound == 16 and r.holds
    assert not check_dot_product_bound([[1, 0]], [[0, 1]], 2, 2).avoids
    with pytest.raises(ValueError):
        check_dot_product_bound([[0, 0]], [[1, 1]], 2, 2)
    # extension field coordinates are indices
    r = check_dot_product_bound([[2]], [[3]], 4, 1)
    assert r.avoids


def test_dot_product_sweeps():
    assert dot_product_exhaustive(2, 1).ok
    ex = dot_product_exhaustive(2, 2)
    assert ex.ok and ex.checks == 49
    r = dot_product_sweep(500, seed=3)
    assert r.ok and r.checks == 500


# --- R -------------------------------------------------------------------------

def sympy_R(N):
    xs = sympy.symbols(f"x0:{6 * N}")
    factors = []
    for c in itertools.product((0, 1), repeat=2 * N):
        total = 0
        for i in range(N):
            s, t = c[2 * i], c[2 * i + 1]
            b = 6 * i
            p1 = (xs[b] + s) * (xs[b + 1] + s) + xs[b + 2] + s
            p2 = (xs[b + 3] + t) * (xs[b + 4] + t) + xs[b + 5] + t
            total += p1 * p2
        factors.append(total)
    return xs, factors


def test_build_hypersurface():
    H = build_hypersurface(1)
    assert (H.arity, H.factor_count, H.degree) == (6, 4, 16)
    assert build_hypersurface(2).factor_count == 16
    xs, factors = sympy_R(1)
    assert sympy.Poly(sympy.Mul(*factors), *xs).total_degree() == 16
    with pytest.raises(ValueError):
        build_hypersurface(0)


def test_R_examples():
    F = make_field(5)
    H = build_hypersurface(1)
    assert evaluate_R(H, [0] * 6, F) == (F.zero, (0, 0))
    ones = [F.one] * 6
    assert [int(Q_value(H, c, ones)) for c in H.shift_vectors] == [4, 2, 2, 1]
    val, wit = evaluate_R(H, ones)
    assert val == F(16) and wit is None
    with pytest.raises(ValueError):
        evaluate_R(H, ones[:5])


@pytest.mark.parametrize("N,p", [(1, 5), (1, 11), (2, 7)])
def test_Q_matches_sympy_expansion(N, p):
    F = make_field(p)
    H = build_hypersurface(N)
    xs, factors = sympy_R(N)
    rng = np.random.default_rng(p)
    for _ in range(30):
        pt = [int(v) for v in rng.integers(0, p, H.arity)]
        sub = dict(zip(xs, pt))
        for c, fac in zip(H.shift_vectors, factors):
            assert int(Q_value(H, c, [F(v) for v in pt])) == int(fac.subs(sub)) % p


@given(st.integers(0, 10**6))
def test_R_zero_iff_vanishing_factor(seed):
    F = make_field(7)
    H = build_hypersurface(1)
    rng = np.random.default_rng(seed)
    pt = [F(int(v)) for v in rng.integers(0, 7, 6)]
    val, wit = evaluate_R(H, pt, early_exit=False)
    assert val.is_zero() == (wit is not None)
    if wit is not None:
        assert Q_value(H, wit, pt).is_zero()


# --- search --------------------------------------------------------------------

def brute_exists(F, H, classes):
    for pt in itertools.product(*[c.elements for c in classes]):
        if evaluate_R(H, list(pt))[0].is_zero():
            return True
    return False


def test_search_examples():
    F = make_field(101)
    H = build_hypersurface(1)
    zero = [GroundSet(F, [0])] * 6
    for mode in ("structured", "lex"):
        r = hypersurface_search(zero, H, mode=mode)
        assert r.found and [int(w) for w in r.witness] == [0] * 6
    r = hypersurface_search(zero, H, budget=0)
    assert not r.found and r.evaluations == 0 and r.searched_fraction == 0
    with pytest.raises(ValueError):
        hypersurface_search(zero[:5], H)
    with pytest.raises(ValueError):
        hypersurface_search([GroundSet(F, [])] + zero[1:], H)


@given(st.integers(0, 10**6))
def test_search_complete_against_brute_force(seed):
    F = make_field(5)
    H = build_hypersurface(1)
    rng = np.random.default_rng(seed)
    classes = [GroundSet(F, rng.choice(5, size=int(rng.integers(1, 3)), replace=False)) for _ in range(6)]
    exists = brute_exists(F, H, classes)
    for mode in ("structured", "lex"):
        r = hypersurface_search(classes, H, budget=10**6, mode=mode)
        assert r.found == exists
        if r.found:
            assert evaluate_R(H, r.witness)[0].is_zero()
            assert all(w in c for w, c in zip(r.witness, classes))


def test_lex_mode_returns_least_tuple():
    F = make_field(7)
    H = build_hypersurface(1)
    classes = [GroundSet(F, range(7))] * 6
    r = hypersurface_search(classes, H, mode="lex")
    first = next(pt for pt in itertools.product(range(7), repeat=6)
                 if evaluate_R(H, pt, F)[0].is_zero())
    assert tuple(int(w) for w in r.witness) == first


def test_search_deterministic_and_worker_invariant():
    F = make_field(31)
    H = build_hypersurface(1)
    rng = np.random.default_rng(5)
    classes = [GroundSet(F, rng.choice(31, size=4, replace=False)) for _ in range(6)]
    for mode in ("structured", "lex"):
        a = hypersurface_search(classes, H, mode=mode, seed=9)
        b = hypersurface_search(classes, H, mode=mode, seed=9)
        c = hypersurface_search(classes, H, mode=mode, seed=9, workers=2)
        assert a.found and a.witness == b.witness == c.witness and a.shift == c.shift


def test_search_N2():
    F = make_field(11)
    H = build_hypersurface(2)
    rng = np.random.default_rng(2)
    classes = [GroundSet(F, rng.choice(11, size=3, replace=False)) for _ in range(12)]
    r = hypersurface_search(classes, H, budget=10**6)
    assert r.found and evaluate_R(H, r.witness)[0].is_zero()
