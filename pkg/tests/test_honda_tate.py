from fractions import Fraction
from functools import cache
from math import isqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isogeny_census.honda_tate import (
    FunctionalEquationError, WeilPolynomialRecord, census_scaling, check_functional_equation,
    enumerate_weil_polynomials, is_ordinary, is_weil_polynomial, newton_polygon)

EXAMPLE = (1, -1, 2, -5, 25)


def numeric_weil(coeffs, q, tol=1e-3):
    r = np.roots(np.array(coeffs, dtype=float))
    return bool(np.all(np.abs(np.abs(r) - np.sqrt(q)) < tol * np.sqrt(q)))


def test_examples():
    assert is_weil_polynomial(EXAMPLE, 5)
    assert is_weil_polynomial((1, 0, 5), 5)
    assert not is_weil_polynomial((1, 5, 5), 5)
    with pytest.raises(FunctionalEquationError):
        is_weil_polynomial((1, 0, -5), 5)
    with pytest.raises(FunctionalEquationError):
        check_functional_equation((1, 1, 1, 1), 5)


def test_newton_polygons():
    half = Fraction(1, 2)
    assert newton_polygon((1, 0, -5), 5) == [half, half]
    assert newton_polygon((1, 0, 5), 5) == [half, half]
    assert newton_polygon(EXAMPLE, 5) == [0, 0, 1, 1]
    # p-rank one: middle coefficient divisible by p, a1 not
    assert newton_polygon((1, 1, 5, 5, 25), 5) == [0, half, half, 1]
    # over F_25 the slopes are normalised by v_p(q) = 2
    assert newton_polygon((1, -1, 25), 25) == [0, 1]
    r = WeilPolynomialRecord.from_coeffs(EXAMPLE, 5)
    assert r.ordinary and r.g == 2 and r.real_polynomial == [1, -1, -8]
    assert not WeilPolynomialRecord.from_coeffs((1, 0, 5), 5).ordinary


def test_g1_census_example():
    recs = enumerate_weil_polynomials(1, 5)
    assert len(recs) == 9
    assert sum(r.ordinary for r in recs) == 8
    assert [r.coeffs[1] for r in recs] == list(range(-4, 5))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25])
def test_g1_count(q):
    assert len(enumerate_weil_polynomials(1, q)) == 2 * isqrt(4 * q) + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_g2_census_against_numeric_roots(q):
    exact = {r.coeffs for r in enumerate_weil_polynomials(2, q)}
    numeric = set()
    b1 = 4 * isqrt(q) + 4
    for a1 in range(-b1, b1 + 1):
        for a2 in range(-6 * q - 2, 6 * q + 3):
            c = (1, a1, a2, q * a1, q * q)
            if numeric_weil(c, q):
                numeric.add(c)
    assert exact == numeric


def test_g2_census_invariants():
    recs = enumerate_weil_polynomials(2, 5)
    assert [r.coeffs for r in recs] == sorted(r.coeffs for r in recs)
    assert all(is_weil_polynomial(r.coeffs, 5) for r in recs)
    ords = enumerate_weil_polynomials(2, 5, ordinary_only=True)
    assert {r.coeffs for r in ords} == {r.coeffs for r in recs if r.ordinary}


def test_unsupported_genus():
    with pytest.raises(ValueError):
        enumerate_weil_polynomials(3, 5)
    with pytest.raises(ValueError):
        enumerate_weil_polynomials(1, 6)


def test_scaling():
    r = census_scaling(1, [25, 121, 625])
    assert abs(r.slope - 0.5) <= 0.15
    with pytest.raises(ValueError):
        census_scaling(1, [5, 7])


@cache
def census(q):
    return enumerate_weil_polynomials(2, q)


@given(st.sampled_from([2, 3, 4, 5, 7, 9, 11, 13]), st.data())
def test_slopes_symmetric(q, data):
    recs = census(q)
    r = data.draw(st.sampled_from(recs))
    s = r.newton_slopes
    assert list(s) == sorted(s)
    assert sum(s) == r.g
    assert sorted(1 - x for x in s) == list(s)
    assert r.ordinary == is_ordinary(r.coeffs, q) == (s == (0, 0, 1, 1))


@given(st.integers(-20, 20), st.integers(-60, 60))
def test_weil_test_matches_product_of_g1(a, b):
    # (x^2 - a x + 5)(x^2 - b x + 5) is Weil iff both factors are
    q = 5
    f = np.polymul([1, -a, q], [1, -b, q]).astype(int).tolist()
    expect = a * a <= 4 * q and b * b <= 4 * q
    assert is_weil_polynomial(f, q) == expect
