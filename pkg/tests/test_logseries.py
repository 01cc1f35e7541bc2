import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from qbl.exactlin import Poly
from qbl.logseries import (KindMismatch, LogSeries, ThetaOperator, TruncationWarning, ls_eval, ls_mul,
                           ls_promote, ls_theta, op_apply)

keys = st.tuples(st.integers(0, 6), st.integers(0, 2))
series = st.dictionaries(keys, st.fractions(min_value=-4, max_value=4, max_denominator=5), max_size=6).map(
    lambda d: LogSeries(d, 6))


def test_construction_drops_zero_and_untrusted():
    s = LogSeries({(0, 0): 1, (3, 1): 0, (9, 0): 5}, 6)
    assert s.coeffs == {(0, 0): Fraction(1)}
    assert s.kind == "exact"


def test_product_trusted_order():
    a = LogSeries({(2, 0): 1}, 6)
    b = LogSeries({(1, 0): 1, (0, 1): 1}, 5)
    p = ls_mul(a, b)
    assert p.ord_valid == min(6 + 0, 5 + 2)
    assert p[(3, 0)] == 1 and p[(2, 1)] == 1


def test_kind_mismatch():
    a = LogSeries({(0, 0): 1}, 3)
    with pytest.raises(KindMismatch):
        a + ls_promote(a)
    with pytest.raises(KindMismatch):
        a * 0.5


def test_theta_on_log():
    s = LogSeries({(2, 1): 1}, 5)  # z^2 log z
    t = ls_theta(s)
    assert t.coeffs == {(2, 1): 2, (2, 0): 1}


def test_eval_and_warning():
    s = LogSeries({(m, 0): Fraction(1, math.factorial(m)) for m in range(30)}, 29)
    assert abs(ls_eval(s, mp.log(0.5)) - mp.exp(0.5)) < 1e-30
    short = s.truncate(3)
    with pytest.warns(TruncationWarning):
        ls_eval(short, mp.log(0.5), tol=1e-10)


def test_operator_p1():
    L = ThetaOperator([Poly([0, 0, -4]), Poly(), Poly([1])])
    s = LogSeries({(2 * k, 0): Fraction(1, math.factorial(k) ** 2) for k in range(11)}, 20)
    r = op_apply(L, s)
    assert r.is_zero() and r.ord_valid == 20
    assert str(L) == "(1)θ^2 + (-4*z^2)"


def test_op_apply_trusted_order_uses_lowest_power():
    L = ThetaOperator([Poly([0, 0, 3]), Poly([0, 1])])
    s = LogSeries({(0, 0): 1}, 10)
    assert op_apply(L, s).ord_valid == 11


def test_json_csv_roundtrip():
    s = ls_promote(LogSeries({(0, 1): Fraction(1, 3), (2, 0): -2}, 4))
    back = LogSeries.from_json(s.to_json())
    assert back.ord_valid == 4 and abs(back[(0, 1)] - mp.mpf(1) / 3) < 1e-14
    assert s.to_csv().splitlines()[0] == "m,j,re,im"


@settings(max_examples=60, deadline=None)
@given(series, series)
def test_theta_leibniz(a, b):
    lhs = ls_theta(a * b)
    rhs = ls_theta(a) * b + a * ls_theta(b)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(series, series)
def test_eval_multiplicative(a, b):
    with mp.workdps(30):
        zl = mp.log(mp.mpf("0.3"))
        lhs = ls_eval(a * b, zl)
        # truncation: compare against the product of the truncated inputs
        n = (a * b).ord_valid
        ta = LogSeries({k: v for k, v in a.coeffs.items() if k[0] <= n}, n)
        tb = LogSeries({k: v for k, v in b.coeffs.items() if k[0] <= n}, n)
        full = LogSeries({}, 0)
        prod = 0
        for (m1, j1), c1 in ta.coeffs.items():
            for (m2, j2), c2 in tb.coeffs.items():
                if m1 + m2 <= n:
                    prod += mp.mpf(c1.numerator) / c1.denominator * mp.mpf(c2.numerator) / c2.denominator \
                        * mp.exp((m1 + m2) * zl) * zl ** (j1 + j2)
        assert abs(lhs - prod) < mp.mpf(10) ** -25
