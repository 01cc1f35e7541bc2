import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbl import borel
from qbl.cohalg import AlgebraMismatch, alg_blowup_p2, alg_projective
from qbl.logseries import ls_eval

# (U1, E0) at z = 0.3 by direct mpmath quadrature of the Hankel integral of
# I_0(2 sqrt(z) lam^(1/2)) exp(z^2/lam) e^lam / lam
U1E0_AT_03 = "1.120372709544698777789494658966128071226"


def test_weights():
    w = borel.BLOWUP_WEIGHTS
    assert w.alpha == (Fraction(-4), Fraction(1, 2))
    assert w.beta == (Fraction(-1, 2), Fraction(1))
    assert [w.scale(l) for l in range(2)] == [Fraction(1, 2), Fraction(2)]
    with pytest.raises(ValueError):
        borel.BorelWeights((1,), (0,))


def test_formal_frozen_value():
    s = borel.formal_pair(1, 0, 30)
    assert abs(ls_eval(s, mp.log(mp.mpf("0.3"))) - mp.mpf(U1E0_AT_03)) < mp.mpf(10) ** -30


def test_numeric_frozen_value():
    v = borel.borel_numeric([borel.ups_evaluator(1, 0), borel.ek_evaluator(0)], borel.BLOWUP_WEIGHTS,
                            math.log(0.3))
    assert abs(v - float(mp.mpf(U1E0_AT_03))) < 1e-12


@pytest.mark.parametrize("i,k", [(1, 0), (2, 0), (1, 1), (2, 1), (1, 2)])
@pytest.mark.parametrize("z", [0.1, 0.4])
def test_formal_matches_numeric(i, k, z):
    f = complex(ls_eval(borel.formal_pair(i, k, 20), mp.log(z)))
    ev = borel.ups_evaluator(1, 0) if i == 1 else borel.ups_evaluator(0, 1)
    n = borel.borel_numeric([ev, borel.ek_evaluator(k)], borel.BLOWUP_WEIGHTS, math.log(z))
    assert abs(f - n) < 1e-9


def test_upsilon_series_analytifies_to_p1_basis():
    from qbl.qde import p1_basis
    a = borel.analytify(borel.upsilon_series(12))
    assert a[0] == p1_basis(1, 0, 6).truncate(a[0].ord_valid)
    assert a[1] == p1_basis(0, 1, 6).truncate(a[1].ord_valid)


def test_e_series_is_ek():
    from qbl.specfun import ek_value
    s = borel.builtin_series("ek:2", 30)
    a = borel.analytify(s)
    z = mp.mpf("0.6")
    # E(s) = sum_j E_j s^j / j!, so the x^2 component is E_2 / 2
    assert abs(ls_eval(a[2], mp.log(z)) * 2 - ek_value(2, mp.log(z))) < mp.mpf(10) ** -30


def test_builtin_names():
    assert borel.builtin_series("eP", 3).alg == alg_blowup_p2()
    with pytest.raises(ValueError):
        borel.builtin_series("nope", 3)
    with pytest.raises(ValueError):
        borel.builtin_evaluator("jp1")


def test_arity_and_algebra_checks():
    u = borel.upsilon_series(4)
    with pytest.raises(ValueError):
        borel.borel_formal([u], borel.BLOWUP_WEIGHTS)
    e = borel.builtin_series("ek:1", 4)
    with pytest.raises(AlgebraMismatch):
        borel.borel_formal([u, e], borel.BLOWUP_WEIGHTS)


def _series(draw_terms, A, kappa):
    terms = {}
    for n, nil, c in draw_terms:
        terms[(n, A.element([0, nil]))] = A.element(c)
    return borel.RibenboimSeries(A, terms, 5, kappa)


term = st.tuples(st.integers(0, 5), st.fractions(-2, 2, max_denominator=3),
                 st.lists(st.fractions(-3, 3, max_denominator=4), min_size=2, max_size=2))
rib = st.builds(lambda ts, k: _series(ts, alg_projective(2, "e"), k),
                st.lists(term, max_size=4), st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(2)]))


@settings(max_examples=40, deadline=None)
@given(rib, rib, rib)
def test_ribenboim_product_laws(f, g, h):
    mul = borel.ribenboim_mul
    assert mul(f, g) == mul(g, f)
    assert mul(mul(f, g), h) == mul(f, mul(g, h))


@settings(max_examples=10, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_numeric_multilinear(a, b):
    z = math.log(0.25)
    w = borel.BLOWUP_WEIGHTS
    e = borel.ek_evaluator(1)
    f, g = borel.ups_evaluator(1, 0), borel.ups_evaluator(0, 1)
    comb = lambda L: a * f(L) + b * g(L)
    lhs = borel.borel_numeric([comb, e], w, z)
    rhs = a * borel.borel_numeric([f, e], w, z) + b * borel.borel_numeric([g, e], w, z)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
