import math

import mpmath as mp
import pytest

from qbl import specfun as sf

# 1/Gamma derivatives from symbolic differentiation (30 digits)
C_ORACLE = {
    (1, 1): "0.577215664901532860606512090082",
    (2, 1): "-1.31175614304050776215403903029",
    (3, 1): "-0.252015810204571413174023609253",
    (1, 0.5): "1.10779190387287102317103530056",
    (2, 0.5): "-0.609003488416110682163702383072",
    (3, 0.5): "-2.63462053502146319109387998147",
    (1, 3): "-0.461392167549233569696743954959",
    (2, 3): "0.228298431127446828013212349731",
    (3, 3): "0.230825657471904276443764486461",
    (0, -1.5): "0.423142187660817215211059588671",
    (2, -1.5): "-3.75954106470805453041075908644",
    (3, -1.5): "8.32480695246779283868801611571",
    (0, -1): "0",
    (1, -1): "-1",
    (2, -1): "0.845568670196934278786975819835",
    (3, -1): "7.39856241853072045010118963137",
}

# Meijer G from mpmath.meijerg
G3 = {0.7: "0.2022577499533262640705433086622741245239", 1.5: "0.03507916273364540224385687182408670180825"}
G4 = {0.7: "0.08748557080866082777169725991411025072254", 1.5: "0.01028987600439058101939197984949739850779"}


@pytest.mark.parametrize("k,z", list(C_ORACLE))
def test_recip_gamma_recurrence_oracle(k, z):
    assert abs(sf.recip_gamma_deriv_recurrence(k, z) - mp.mpf(C_ORACLE[(k, z)])) < mp.mpf(10) ** -28


@pytest.mark.parametrize("k,z", list(C_ORACLE))
def test_recip_gamma_bell_oracle(k, z):
    assert abs(sf.recip_gamma_deriv_bell(k, z) - mp.mpf(C_ORACLE[(k, z)])) < mp.mpf(10) ** -28


@pytest.mark.parametrize("k,z", [(1, 1), (3, 0.5), (2, -1), (3, -1.5)])
def test_recip_gamma_hankel_oracle(k, z):
    assert abs(sf.recip_gamma_deriv_hankel(k, z) - float(mp.mpf(C_ORACLE[(k, z)]))) < 1e-10


def test_recip_gamma_off_lattice():
    with pytest.raises(sf.DomainError):
        sf.recip_gamma_deriv_recurrence(1, 0.3)
    z = mp.mpf("0.3")
    assert abs(sf.recip_gamma_deriv(1, z) - mp.diff(mp.rgamma, z)) < mp.mpf(10) ** -30


def test_taylor_list():
    row = sf.recip_gamma_taylor(1, 3)
    assert [mp.nstr(x, 12) for x in row] == ["1.0", "0.577215664902", "-1.31175614304", "-0.252015810205"]


def test_constants():
    assert abs(sf.zeta_int(3) - mp.zeta(3)) < mp.mpf(10) ** -45
    assert abs(sf.zeta_int(2) - mp.pi ** 2 / 6) < mp.mpf(10) ** -45
    assert abs(sf.euler_gamma() - mp.euler) < mp.mpf(10) ** -15
    assert sf.bell_complete(3, [1, 1, 1]) == 5
    assert abs(sf.polygamma_int(0) + mp.euler) < mp.mpf(10) ** -40


def test_precision_env(monkeypatch):
    monkeypatch.setenv("QBL_PRECISION", "80")
    assert sf.precision() == 80
    v = sf.zeta_int(3)
    with mp.workdps(90):
        assert abs(v - mp.zeta(3)) < mp.mpf(10) ** -75


@pytest.mark.parametrize("z,ref", [(1.0, "0.219383934395520273677163775460121649031"),
                                   (0.3, "0.9056766516758467398461090442311552443662")])
def test_gamma_upper0_oracle(z, ref):
    assert abs(sf.gamma_upper0(mp.log(z)) - mp.mpf(ref)) < mp.mpf(10) ** -38


def test_gamma_upper0_large():
    z = mp.mpf(30)
    assert abs(sf.gamma_upper0(mp.log(z)) / mp.e1(z) - 1) < mp.mpf(10) ** -40


@pytest.mark.parametrize("z", [0.25, 1.0, 2.0])
def test_e_family_closed(z):
    zl = mp.log(z)
    assert abs(sf.ek_value(0, zl) - mp.exp(z)) < 1e-40
    assert abs(sf.ek_value(1, zl) + mp.exp(z) * mp.e1(z)) < 1e-40
    assert abs(sf.ek_value(2, zl) - sf.e2_printed(zl)) < 1e-30
    assert abs(sf.ek_value(3, zl) - sf.e3_printed(zl)) < 1e-30
    assert abs(sf.ek_value(3, zl) - sf.e_closed(3, zl)) < 1e-30


def test_e_point_limits():
    z = mp.mpf("0.7")
    assert abs(sf.e_point(0, mp.log(z)) - mp.exp(z)) < 1e-40
    # E(1, z) = e^z P(1, z) = e^z (1 - e^-z)
    assert abs(sf.e_point(1, mp.log(z)) - (mp.exp(z) - 1)) < 1e-40


@pytest.mark.parametrize("x", [0.7, 1.5])
def test_meijer_relations(x):
    zl = mp.log(x)
    assert abs(x * sf.t_meijer(3, zl) - mp.mpf(G3[x])) < mp.mpf(10) ** -38
    assert abs(x * sf.t_meijer(4, zl) - mp.mpf(G4[x])) < mp.mpf(10) ** -38
    assert abs(sf.t_meijer(1, zl) - mp.exp(-x) / x) < mp.mpf(10) ** -40


def test_g0_is_gamma0():
    zl = mp.log(0.4)
    assert sf.g_m(0, zl) == sf.gamma_upper0(zl)


def test_domain_errors():
    with pytest.raises(sf.DomainError):
        sf.ek_series(-1, 5)
    with pytest.raises(sf.DomainError):
        sf.t_meijer(0, 0.0)
    with pytest.raises(sf.DomainError):
        sf.recip_gamma_deriv(-1, 1)


def test_ek_series_branch():
    # log z on another sheet changes E_1 by the log term only
    t = sf.ek_series(1, 40)
    a = t(mp.log(0.5))
    b = t(mp.log(0.5) + 2j * mp.pi)
    assert abs((b - a) - 2j * mp.pi * mp.exp(0.5)) < 1e-30
