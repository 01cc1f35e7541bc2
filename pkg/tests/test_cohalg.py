from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbl.cohalg import (BLOWUP_RHO, BLOWUP_XI, InvalidDimension, NilAlgebra, NotNilpotent, alg_blowup_p2,
                        alg_point, alg_projective, alg_tensor, integrate_top, nilpotent_series_eval, taylor_eval)

ALGEBRAS = [alg_point(), alg_projective(3), alg_blowup_p2(),
            alg_tensor(alg_projective(2, "e"), alg_projective(3, "x"))]
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@pytest.mark.parametrize("A", ALGEBRAS, ids=lambda A: A.name)
def test_structure_checks(A):
    assert A.check_commutative()
    assert A.check_associative()
    assert A.check_unit()
    assert A.check_nilpotent()


def test_blowup_relations():
    A = alg_blowup_p2()
    xi, rho = A.basis(BLOWUP_XI), A.basis(BLOWUP_RHO)
    assert xi * xi == xi * rho
    assert rho * rho == A.zero()
    assert integrate_top(xi * xi) == 1
    assert (xi + rho * 2).nilpotency_index() == 3


def test_projective_invalid():
    with pytest.raises(InvalidDimension):
        alg_projective(0)


def test_tensor_indexing():
    P, Q = alg_projective(2, "e"), alg_projective(3, "x")
    T = alg_tensor(P, Q)
    assert T.dim == 6
    assert T.basis(1) * T.basis(3) == T.basis(4)  # x * e = e x
    assert alg_tensor(alg_point(), Q) is Q


def test_inverse():
    A = alg_projective(3)
    u = A.one() * 2 + A.basis(1)
    assert u * u.inverse() == A.one()
    with pytest.raises(ArithmeticError):
        A.basis(1).inverse()


def test_series_eval():
    A = alg_projective(3)
    s = A.basis(1)
    # exp(s) = 1 + s + s^2/2
    e = nilpotent_series_eval([1, 1, Fraction(1, 2)], s)
    assert e == A.element([1, 1, Fraction(1, 2)])
    with pytest.raises(ValueError):
        nilpotent_series_eval([1, 1], s)
    with pytest.raises(NotNilpotent):
        nilpotent_series_eval([1, 1, 1], A.one())


def test_taylor_eval_polynomial():
    A = alg_projective(3)
    a = A.one() * 2 + A.basis(1)
    # f(x) = x^3 at 2 + s: 8 + 12 s + 6 s^2
    d = {0: 8, 1: 12, 2: 12, 3: 6}
    assert taylor_eval(lambda k: d.get(k, 0), a) == A.element([8, 12, 6])


def test_json_roundtrip():
    A = alg_blowup_p2()
    B = NilAlgebra.from_json(A.to_json())
    assert B == A


@settings(max_examples=40, deadline=None)
@given(st.lists(fracs, min_size=12, max_size=12))
def test_associativity_random(v):
    A = alg_blowup_p2()
    a, b, c = A.element(v[0:4]), A.element(v[4:8]), A.element(v[8:12])
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a.nil_part().is_nilpotent()


@settings(max_examples=40, deadline=None)
@given(st.lists(fracs, min_size=8, max_size=8))
def test_series_eval_multiplicative(v):
    # exp(a) exp(b) = exp(a + b) on nilpotent elements
    A = alg_blowup_p2()
    a = A.element([0] + v[1:4])
    b = A.element([0] + v[5:8])
    coeffs = [Fraction(1, 1), 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    ex = lambda x: nilpotent_series_eval(coeffs, x)
    assert ex(a) * ex(b) == ex(a + b)
