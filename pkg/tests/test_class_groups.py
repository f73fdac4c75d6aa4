from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st
from sympy import jacobi_symbol

from isogeny_census.class_groups import (
    DiscriminantError, OrderDescriptor, class_number_forms, class_number_fundamental,
    class_number_order, class_number_order_as_printed, fundamental_decomposition,
    fundamental_discriminants, is_fundamental, kronecker_symbol, reduced_forms)

# the thirteen negative discriminants of class number one (Heegner, Baker, Stark)
CLASS_NUMBER_ONE = [-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163]

# frozen from the reduced-forms count
KNOWN = {-15: 2, -20: 2, -23: 3, -47: 5, -71: 7, -167: 11, -191: 13, -199: 9, -56: 4, -84: 4}


def test_kronecker_examples():
    assert kronecker_symbol(-23, 2) == 1
    assert kronecker_symbol(-4, 2) == 0
    assert kronecker_symbol(-3, 2) == -1
    assert kronecker_symbol(-3, 1) == 1
    with pytest.raises(ValueError):
        kronecker_symbol(5, 0)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4).map(lambda k: 2 * k + 1))
def test_kronecker_matches_jacobi_for_odd_m(D, m):
    assert kronecker_symbol(D, m) == jacobi_symbol(D, m)


@given(st.integers(-2000, -1), st.integers(1, 300), st.integers(1, 300))
def test_kronecker_multiplicative_in_m(D, m, n):
    assume(D % 4 in (0, 1))
    assert kronecker_symbol(D, m * n) == kronecker_symbol(D, m) * kronecker_symbol(D, n)


def test_forms_examples():
    assert class_number_forms(-3) == 1
    assert class_number_forms(-23) == 3
    assert class_number_forms(-16) == 1
    assert reduced_forms(-23) == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    with pytest.raises(DiscriminantError):
        class_number_forms(-5)
    with pytest.raises(DiscriminantError):
        class_number_forms(5)


def test_class_number_one_list():
    ones = [D for D in range(-3, -2000, -1) if D % 4 in (0, 1) and class_number_forms(D) == 1]
    assert ones == CLASS_NUMBER_ONE


@pytest.mark.parametrize("D,h", sorted(KNOWN.items()))
def test_known_class_numbers(D, h):
    assert class_number_forms(D) == h
    f, D_K = fundamental_decomposition(D)
    assert class_number_order(D_K, f) == h


def test_dirichlet_route_fundamental():
    for D in fundamental_discriminants(-999, -3):
        assert class_number_fundamental(D) == class_number_forms(D)


def test_conductor_examples():
    assert class_number_order(-4, 4) == 2
    assert class_number_order(-3, 2) == 1
    assert class_number_order(-3, 3) == 1
    assert class_number_order(-23, 2) == 3
    assert OrderDescriptor(-4, 4).disc == -64
    assert OrderDescriptor.from_disc(-64) == OrderDescriptor(-4, 4)


def test_printed_formula_differs_from_forms():
    # without 1/p in the Euler factor the count collapses, e.g. to 0 when (D/p) = 1
    assert class_number_order_as_printed(-23, 2) == Fraction(0)
    assert class_number_forms(-92) == 3
    assert class_number_order_as_printed(-4, 3) == Fraction(3)
    assert class_number_forms(-36) == 2


def test_fundamental_predicate():
    assert [D for D in range(-1, -25, -1) if is_fundamental(D)] == \
        [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]
    with pytest.raises(DiscriminantError):
        OrderDescriptor(-12, 1)
    with pytest.raises(ValueError):
        class_number_order(-4, 0)


@given(st.sampled_from(fundamental_discriminants(-400, -3)), st.integers(1, 30))
def test_conductor_formula_matches_forms(D_K, f):
    assert class_number_order(D_K, f) == class_number_forms(f * f * D_K)


@given(st.integers(-10**5, -3))
def test_decomposition_roundtrip(disc):
    assume(disc % 4 in (0, 1))
    f, D_K = fundamental_decomposition(disc)
    assert f * f * D_K == disc and is_fundamental(D_K)


@given(st.sampled_from(fundamental_discriminants(-300, -3)), st.integers(1, 12), st.integers(1, 12))
def test_class_number_divisibility_along_conductors(D_K, f, g):
    # the surjection Pic(O_{fg}) -> Pic(O_f) means h(O_f) | h(O_{fg})
    assert class_number_order(D_K, f * g) % class_number_order(D_K, f) == 0
