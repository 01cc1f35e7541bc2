import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import loggamma

from qbl.contour import (HankelContour, NoConvergence, ParabolicContour, TailTooFat, hankel_integral,
                         mellin_barnes_integral)


def rgamma_integrand(z):
    return lambda lam: np.exp((1 - z) * np.log(lam))


@pytest.mark.parametrize("z", [-1.5, -0.5, 0.5, 1.0, 2.5, 4.0])
def test_hankel_reciprocal_gamma(z):
    assert abs(hankel_integral(rgamma_integrand(z)) - float(mp.rgamma(z))) < 1e-12


def test_vector_integrand():
    zs = np.array([0.5, 1.5, 3.0])
    v = hankel_integral(lambda lam: np.exp(np.outer(np.log(lam), 1 - zs)))
    assert np.allclose(v, [float(mp.rgamma(z)) for z in zs], atol=1e-12)


def test_mellin_barnes_exponential():
    z = 0.4
    v = mellin_barnes_integral(lambda s: np.exp(loggamma(s) - s * math.log(z)))
    assert abs(v - math.exp(-z)) < 1e-10


def test_contour_validation():
    with pytest.raises(ValueError):
        HankelContour(eps=2.0)
    with pytest.raises(ValueError):
        HankelContour(r=2.0, R=1.5)
    with pytest.raises(ValueError):
        ParabolicContour(rho1=-1)


def test_tail_too_fat():
    # e^(lam) lam^6 with no growth allowance beyond a tiny radius
    c = HankelContour(r=0.5, R=3.0)
    with pytest.raises(TailTooFat):
        hankel_integral(lambda lam: lam ** 6, c, auto_R=False)


def test_mb_tail_test_detects_growth():
    with pytest.raises((TailTooFat, NoConvergence)):
        mellin_barnes_integral(lambda s: np.exp(-s * math.log(0.4)) * np.cosh(s), ParabolicContour(T=2))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.3, 1.2))
def test_hankel_perturbation(r, eps):
    tol = 1e-10
    base = hankel_integral(rgamma_integrand(2.5), tol=tol)
    v = hankel_integral(rgamma_integrand(2.5), HankelContour(r=r, eps=eps), tol)
    assert abs(v - base) <= 3 * tol


@settings(max_examples=15, deadline=None)
@given(st.floats(0.15, 0.4), st.floats(0.2, 1.0))
def test_parabola_perturbation(rho1, rho2):
    tol = 1e-10
    f = lambda s: np.exp(loggamma(s) - s * math.log(0.4))
    base = mellin_barnes_integral(f, tol=tol)
    v = mellin_barnes_integral(f, ParabolicContour(rho1=rho1, rho2=rho2), tol)
    assert abs(v - base) <= 3 * tol
