import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from qbl import qde
from qbl.borel import formal_pair
from qbl.exactlin import Poly, RatFun, RatFunMatrix, ratfun_mat_inverse
from qbl.logseries import LogSeries, ThetaOperator, ls_eval

# derived operator, theta^0 .. theta^4 (constant-term ascending coefficients)
DERIVED_BLOWUP = [
    "-3113*z^5-9924*z^4+1476*z^3+192*z^2",
    "-10188*z^4-1400*z^3+416*z^2",
    "-2264*z^3+192*z^2+3*z",
    "283*z^2-590*z+24",
    "283*z-24",
]


@pytest.fixture(scope="module")
def blowup_ode():
    return qde.derive_master_ode(qde.qde_blowup_data())


@pytest.fixture(scope="module")
def borel_basis():
    with mp.workdps(60):
        return qde.blowup_borel_basis(16)


def test_lambda_reference():
    fr = qde.cyclic_frame(qde.qde_blowup_data().rebase(qde.PRESENTATION_CHANGE))
    assert fr.Lambda == qde.reference_lambda_blowup()
    assert fr.detLambda == RatFun(Poly([0, 1]), Poly([24, -283]))


def test_frame_inverse_exact():
    fr = qde.cyclic_frame(qde.qde_blowup_data(2, 3))
    assert fr.E @ fr.Lambda == RatFunMatrix.identity(4)


@pytest.mark.parametrize("q", [(1, 1), (1, 2), (2, 3), (3, 1)])
def test_det_general_q(q):
    q1, q2 = q
    det = qde.cyclic_frame(qde.qde_blowup_data(q1, q2)).detLambda
    den = Poly([-24 * q1 * q2, 27 * q1 ** 2 * q2 ** 2 + 256 * q1])
    assert det == RatFun(Poly([0, -1]), den)


def test_det_shape():
    det = qde.cyclic_frame(qde.qde_blowup_data()).detLambda
    assert det.num.valuation() == det.num.degree  # pure power of z
    assert det.den.degree <= math.comb(4, 2)


def test_p1_operator():
    ode = qde.derive_master_ode(qde.qde_p1())
    assert ode.op.to_strings() == ["-4*z^2", "0", "1"]
    assert ode.provenance["companion"] == "unit superdiagonal, free last row"


def test_blowup_operator(blowup_ode):
    assert blowup_ode.op.to_strings() == DERIVED_BLOWUP
    assert blowup_ode.apparent == Poly([-24, 283])
    assert blowup_ode.apparent_count() == 1


def test_operator_basis_independent():
    a = qde.derive_master_ode(qde.qde_blowup_data())
    b = qde.derive_master_ode(qde.qde_blowup_data().rebase(qde.PRESENTATION_CHANGE))
    assert a.op == b.op


def test_compare_with_printed(blowup_ode):
    rep = qde.compare_odes(blowup_ode, qde.reference_ode_blowup())
    assert not rep["agree"]
    unequal = [r["theta_power"] for r in rep["coefficients"] if not r["equal"]]
    assert unequal == [2]
    # the stated theta^2 coefficient is the derived one divided by z
    row = rep["coefficients"][2]
    assert Poly([3, 192, -2264]) * Poly.z() == blowup_ode.op.coeffs[2]
    assert row["printed"] == "-2264*z^2+192*z+3"


def test_p1_basis_exact():
    ode = qde.derive_master_ode(qde.qde_p1())
    for a0, b0 in [(1, 0), (0, 1), (3, -2)]:
        r = qde.verify_solution(ode, qde.p1_basis(a0, b0, 20))
        assert r.passed and r.residual.is_zero() and r.trusted_order == 40


def test_non_solution_fails(blowup_ode):
    r = qde.verify_solution(blowup_ode, LogSeries({(0, 0): 1, (1, 0): 1}, 16))
    assert not r.passed
    # the z^0 part of the operator is 24 theta^3 (1 - theta), which kills 1 and z,
    # so the first nonzero residual sits at order 2
    assert r.first_failure == (2, 0)


def test_borel_basis_solutions(blowup_ode, borel_basis):
    assert borel_basis.members[0].kind == "exact"
    for s in borel_basis.members:
        r = qde.verify_solution(blowup_ode, s)
        assert r.passed and r.trusted_order >= 12
        assert r.max_abs < 1e-40


def test_borel_basis_rank(borel_basis):
    assert qde.basis_rank(borel_basis.members, 6) == 4


def test_explicit_sums_match_formal_route():
    with mp.workdps(60):
        for a0, b0, k, i in [(1, 0, 1, 1), (0, 1, 1, 2), (1, 0, 2, 1)]:
            d = qde.blowup_borel_sum(a0, b0, k, 16) - formal_pair(i, k, 16)
            assert d.max_abs() < mp.mpf(10) ** -45


def test_upsilon2_e1_alone_is_not_a_solution(blowup_ode):
    # this is why the H-integrals with k = 1 leave the solution space
    with mp.workdps(60):
        s = qde.blowup_borel_sum(0, 1, 1, 16)
    r = qde.verify_solution(blowup_ode, s)
    assert not r.passed and r.max_abs > 1


def test_i_function(blowup_ode, borel_basis):
    I = qde.i_function_blowup(14)
    assert len(I.components) == 4
    for c in I.components:
        r = qde.verify_solution(blowup_ode, c)
        assert r.passed and r.residual.is_zero()
        _, res = qde.series_span_fit(c, borel_basis.members, 10)
        assert res < 1e-40
    coef, _ = qde.series_span_fit(I.components[0], borel_basis.members, 10)
    assert abs(coef[0] - 1) < 1e-40


def test_mb_p1_span():
    u = [qde.p1_basis(1, 0, 20), qde.p1_basis(0, 1, 20)]
    zs = [0.3, 0.5, 0.4]
    B = [[complex(ls_eval(s, math.log(z))) for s in u] for z in zs]
    vals = [qde.mb_master_pn(2, 0, math.log(z)) for z in zs]
    r = qde.span_fit(vals[:2], B[:2], vals[2:], B[2:])
    assert r["check_residual"] < 1e-10
    # g^0 = -2 (U2 + gamma U1)
    assert np.allclose(r["coefficients"], [-2 * float(mp.euler), -2], atol=1e-9)


def test_mb_n1_odd_phase():
    z = 0.4
    assert abs(qde.mb_master_pn(1, 0, math.log(z)) - math.exp(z)) < 1e-10


def test_mb_n3_finite():
    v = qde.mb_master_pn(3, 0, math.log(0.4))
    assert np.isfinite(v.real) and np.isfinite(v.imag)


def test_mb_bad_index():
    with pytest.raises(qde.DimensionError):
        qde.mb_master_pn(2, 2, 0.0)


def test_h_integral_preconditions():
    with pytest.raises(qde.DimensionError):
        qde.thm_mt22_H([2], [1], [0], 3, 0.0)
    with pytest.raises(qde.DimensionError):
        qde.thm_mt22_H([2], [2], [0], 0, 0.0)
    with pytest.raises(qde.DimensionError):
        qde.thm_mt22_H([2, 2, 2], [1, 1, 1], [0, 0, 0], 0, 0.0)


def test_h_integral_k0_matches_master_function_transform():
    # k = 0: B[g^0, E_0] = -2 (B[U2,E0] + gamma B[U1,E0])
    z = 0.2
    with mp.workdps(60):
        a, b = formal_pair(1, 0, 24), formal_pair(2, 0, 24)
        ref = complex(-2 * (ls_eval(b, mp.log(z)) + mp.euler * ls_eval(a, mp.log(z))))
    v = qde.thm_mt22_H([2], [1], [0], 0, math.log(z))
    assert abs(v - ref) < 1e-9


@pytest.mark.parametrize("j", [0, 1])
def test_h_integral_k1_is_transform_of_master_function(j):
    z = 0.35
    with mp.workdps(60):
        a = complex(ls_eval(formal_pair(1, 1, 24), mp.log(z)))
        b = complex(ls_eval(formal_pair(2, 1, 24), mp.log(z)))
    g = complex(mp.euler)
    ref = -2 * b + (-2 * g + 2j * math.pi * j) * a
    assert abs(qde.thm_mt22_H([2], [1], [j], 1, math.log(z)) - ref) < 1e-8
