from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbl.exactlin import (GaussRational, Poly, RatFun, RatFunMatrix, SingularMatrix, ratfun_det,
                          ratfun_mat_inverse)

small = st.integers(-6, 6)
polys = st.lists(small, min_size=1, max_size=3).map(Poly)


def mats(n):
    return st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda rows: RatFunMatrix([[RatFun(p) for p in r] for r in rows]))


def test_poly_arithmetic():
    p = Poly([1, 2, 1])  # (1+z)^2
    q = Poly([1, 1])
    assert p.exact_div(q) == q
    assert p.gcd(Poly([-1, 0, 1])) == q
    assert p.deriv() == Poly([2, 2])
    assert p(Fraction(1, 2)) == Fraction(9, 4)
    assert Poly([0, 0, 3]).valuation() == 2


def test_poly_to_str():
    assert Poly([-24, 283]).to_str() == "283*z-24"
    assert Poly([0, Fraction(1, 2)]).to_str() == "(1/2)*z"
    assert Poly().to_str() == "0"


def test_ratfun_normal_form():
    r = RatFun(Poly([2, 2]), Poly([4, 4]))
    assert r == RatFun(Fraction(1, 2))
    r = RatFun(Poly([0, 1]), Poly([24, -283]))
    assert r.den.lead() == 1


def test_ratfun_string_roundtrip():
    r = RatFun(Poly([204, -105, 9, 8]), Poly([0, 0, -24, 283]))
    assert RatFun.from_str(r.to_str()) == r


def test_gauss_rational():
    i = GaussRational(0, 1)
    assert i * i == GaussRational(-1)
    assert (GaussRational(1, 1) / GaussRational(1, -1)) == i
    assert complex(GaussRational(Fraction(1, 2), 3)) == 0.5 + 3j


def test_inverse_exact():
    z = RatFun.z()
    M = RatFunMatrix([[1, z], [z * z, RatFun(2) + z]])
    Mi = ratfun_mat_inverse(M)
    assert M @ Mi == RatFunMatrix.identity(2)
    assert Mi @ M == RatFunMatrix.identity(2)


def test_singular():
    z = RatFun.z()
    M = RatFunMatrix([[1, z], [z, z * z]])
    assert ratfun_det(M).is_zero()
    with pytest.raises(SingularMatrix):
        ratfun_mat_inverse(M)


@settings(max_examples=30, deadline=None)
@given(mats(3), mats(3))
def test_det_multiplicative(A, B):
    assert ratfun_det(A @ B) == ratfun_det(A) * ratfun_det(B)


@settings(max_examples=30, deadline=None)
@given(mats(3))
def test_inverse_roundtrip(A):
    if ratfun_det(A).is_zero():
        return
    assert A @ ratfun_mat_inverse(A) == RatFunMatrix.identity(3)
