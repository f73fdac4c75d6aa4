import numpy as np
import pytest
from hypothesis import given, strategies as st

from isogeny_census.finite_field import (
    FieldError, default_modulus, field_arithmetic, field_of_order, is_irreducible,
    make_field, subfield_elements, subfield_membership)

FIELDS = [(2, 1), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2), (2, 4), (7, 2)]


def test_small_prime_arithmetic():
    F = make_field(7)
    assert F(3) * F(5) == F(1)
    assert F(3) / F(5) == F(2)
    assert F(3) ** 6 == F(1)
    assert -F(3) == F(4)
    assert F(10) == F(3)


def test_extension_arithmetic_f4():
    # F_4 = F_2[x]/(x^2 + x + 1): x^2 = x + 1, x^3 = 1
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)
    x = F.gen
    assert x * x == x + 1
    assert x ** 3 == F.one
    assert x.inverse() == x + 1


def test_default_modulus_is_least_irreducible():
    assert default_modulus(3, 2) == (1, 0, 1)   # x^2 + 1 over F_3
    assert default_modulus(2, 3) == (1, 0, 1, 1)  # 1 + x^2 + x^3 beats 1 + x + x^3
    assert default_modulus(5, 2) == (1, 1, 1)   # x^2 + 1 splits mod 5


def test_irreducibility():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)     # (x + 1)^2
    assert not is_irreducible((4, 0, 1), 5)     # x^2 - 1


def test_rejects_bad_input():
    with pytest.raises(FieldError):
        make_field(6)
    with pytest.raises(FieldError):
        make_field(2, 2, modulus=(1, 0, 1))
    with pytest.raises(FieldError):
        make_field(2, 64)
    with pytest.raises(FieldError):
        field_of_order(12)


def test_division_by_zero():
    F = make_field(5, 2)
    with pytest.raises(ZeroDivisionError):
        F.one / F.zero


@pytest.mark.parametrize("p,k", FIELDS)
def test_multiplicative_group_cyclic_of_order_q_minus_1(p, k):
    F = make_field(p, k)
    nz = F.all_indices()[1:]
    assert np.all(F.vpow(nz, F.q - 1) == int(F.one))
    assert np.all(F.vmul(nz, F.vinv(nz)) == int(F.one))
    # some element has exact order q - 1
    from sympy import factorint
    primes = list(factorint(F.q - 1))
    gens = [a for a in nz if all(F.vpow(np.array([a]), (F.q - 1) // r)[0] != int(F.one) for r in primes)]
    assert gens


@pytest.mark.parametrize("p,k", FIELDS)
def test_vector_ops_match_scalar(p, k):
    F = make_field(p, k)
    idx = F.all_indices()
    a, b = np.meshgrid(idx, idx)
    a, b = a.ravel(), b.ravel()
    scalar_mul = [int(F.from_index(int(x)) * F.from_index(int(y))) for x, y in zip(a, b)]
    scalar_add = [int(F.from_index(int(x)) + F.from_index(int(y))) for x, y in zip(a, b)]
    assert F.vmul(a, b).tolist() == scalar_mul
    assert F.vadd(a, b).tolist() == scalar_add


@pytest.mark.parametrize("p,k", FIELDS)
def test_frobenius_is_identity_after_k(p, k):
    F = make_field(p, k)
    for e in F.elements():
        assert e.frobenius(k) == e
        assert e.frobenius() == e ** p


def test_subfields():
    F = make_field(2, 4)
    assert len(subfield_elements(F, 2)) == 4
    assert len(subfield_elements(F, 1)) == 2
    assert sum(subfield_membership(x, 2) for x in F.elements()) == 4
    with pytest.raises(FieldError):
        subfield_elements(F, 3)


def test_quadratic_character():
    F = make_field(11)
    chi = F.quadratic_character
    squares = {(x * x) % 11 for x in range(1, 11)}
    assert [int(c) for c in chi] == [0] + [1 if x in squares else -1 for x in range(1, 11)]


def test_field_arithmetic_op():
    F = make_field(3, 2)
    x = F.gen
    assert field_arithmetic(x, x, "mul") == x * x
    assert field_arithmetic(F.one, x, "div") * x == F.one
    assert field_arithmetic(x, 3, "pow") == x ** 3
    assert field_arithmetic(x, None, "frobenius") == x ** 3
    with pytest.raises(FieldError):
        field_arithmetic(x, make_field(5).one, "add")
    with pytest.raises(ValueError):
        field_arithmetic(x, x, "xor")


@st.composite
def triples(draw):
    p, k = draw(st.sampled_from(FIELDS))
    F = make_field(p, k)
    xs = [F.from_index(draw(st.integers(0, F.q - 1))) for _ in range(3)]
    return F, xs


@given(triples())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero
    if not a.is_zero():
        assert a * a.inverse() == F.one
    # Frobenius is additive
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()


@given(st.sampled_from(FIELDS), st.data())
def test_index_roundtrip(pk, data):
    F = make_field(*pk)
    i = data.draw(st.integers(0, F.q - 1))
    assert F.encode(F.decode(i)) == i
    assert int(F.from_index(i)) == i
