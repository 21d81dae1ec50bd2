from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from lgorbifold.scalars import (CycScalar, FieldMismatch, cyclotomic_poly, embed_scalar,
                                euler_phi, field_arith, field_inverse, zeta_power)

from conftest import ORDERS, scalars

t = sympy.Symbol("t")


def to_sympy(a):
    return sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(a.coeffs))


def sympy_reduce(expr, n):
    r = sympy.rem(sympy.expand(expr), sympy.cyclotomic_poly(n, t), t)
    return sympy.Poly(r, t).all_coeffs()[::-1] if r != 0 else []


def same(a, coeffs):
    padded = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs]
    padded += [Fraction(0)] * (euler_phi(a.order) - len(padded))
    return list(a.coeffs) == padded


def test_zeta_times_zeta_squared_is_one():
    z = zeta_power(1, 3)
    assert field_arith(z, zeta_power(2, 3), "mul") == CycScalar.one(3)


def test_add_unit_and_zero():
    assert field_arith(CycScalar.one(3), CycScalar.zero(3), "add") == CycScalar.one(3)


def test_product_of_zeta_minus_one_and_zeta_plus_two():
    # oracle: sympy remainder modulo Phi_3
    z = zeta_power(1, 3)
    got = field_arith(z - 1, z + 2, "mul")
    assert same(got, sympy_reduce((t - 1) * (t + 2), 3))
    assert got == CycScalar.rational(-3, 3)


def test_inverses():
    z = zeta_power(1, 3)
    assert field_inverse(CycScalar.one(3)) == CycScalar.one(3)
    assert field_inverse(z) == zeta_power(2, 3)
    assert field_inverse(z - 1) == -(z + 2) / 3
    assert (z - 1) * field_inverse(z - 1) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inverse(CycScalar.zero(5))


def test_zeta_power_wraps():
    assert zeta_power(0, 5) == CycScalar.one(5)
    assert zeta_power(5, 5) == CycScalar.one(5)
    assert zeta_power(3, 3) == CycScalar.one(3)
    assert zeta_power(-1, 7) == zeta_power(6, 7)


def test_order_mismatch():
    with pytest.raises(FieldMismatch):
        field_arith(CycScalar.one(3), CycScalar.one(5), "add")


def test_cyclotomic_poly_matches_sympy():
    for n in range(1, 31):
        ours = [int(c) for c in cyclotomic_poly(n)]
        ref = [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(n, t), t).all_coeffs()[::-1]]
        assert ours == ref


def test_embedding_is_a_ring_map():
    a, b = zeta_power(1, 3) + 2, zeta_power(2, 3) - Fraction(1, 2)
    assert embed_scalar(a * b, 6) == embed_scalar(a, 6) * embed_scalar(b, 6)
    assert embed_scalar(zeta_power(1, 3), 6) == zeta_power(2, 6)
    with pytest.raises(FieldMismatch):
        embed_scalar(zeta_power(1, 3), 4)


@given(scalars())
def test_inverse_property(a):
    if a:
        assert a * field_inverse(a) == 1


@given(st.sampled_from(ORDERS), st.integers(-50, 50))
def test_zeta_power_is_a_root_of_unity(n, k):
    z = zeta_power(k, n)
    assert z ** n == 1
    if 0 < k % n and sympy.gcd(k, n) == 1:
        assert z != 1


@given(st.sampled_from(ORDERS).flatmap(lambda n: st.tuples(scalars(n), scalars(n), scalars(n))))
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a


@given(st.sampled_from(ORDERS).flatmap(lambda n: st.tuples(scalars(n), scalars(n))))
def test_multiplication_matches_sympy(ab):
    a, b = ab
    assert same(a * b, sympy_reduce(to_sympy(a) * to_sympy(b), a.order))


@given(scalars())
def test_json_round_trip(a):
    assert CycScalar.from_json(a.to_json()) == a
