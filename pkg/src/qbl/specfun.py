"""Scalar special functions at high precision.

Values are mpmath numbers computed at ``precision()`` significant digits
(default 50, override with the ``QBL_PRECISION`` environment variable or
the ``dps`` keyword).  Arguments where the branch of ``log z`` matters are
passed as ``zlog = log z`` so that every function lives on the universal
cover of the punctured plane.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from math import comb

import mpmath as mp
import numpy as np

from .contour import hankel_integral
from .logseries import LogSeries, ls_eval

__all__ = [
    "DomainError",
    "PrecisionLoss",
    "ConvergenceError",
    "precision",
    "euler_gamma",
    "zeta_int",
    "bell_complete",
    "beta_seq",
    "polygamma_int",
    "polygamma_half",
    "recip_gamma_deriv",
    "recip_gamma_deriv_recurrence",
    "recip_gamma_deriv_bell",
    "recip_gamma_deriv_hankel",
    "recip_gamma_taylor",
    "gamma_upper0",
    "e_point",
    "EkTable",
    "ek_series",
    "ek_value",
    "t_meijer",
    "g_m",
    "e_closed",
    "e2_printed",
    "e3_printed",
]

SERIES_CAP = 400


class DomainError(ValueError):
    pass


class PrecisionLoss(ArithmeticError):
    pass


class ConvergenceError(ArithmeticError):
    pass


def precision() -> int:
    """Working precision in decimal digits."""
    return int(os.environ.get("QBL_PRECISION", "50"))


def _dps(dps):
    return precision() if dps is None else dps


_lock = threading.Lock()
_zeta_cache: dict = {}


def euler_gamma(dps=None):
    with mp.workdps(_dps(dps) + 10):
        return +mp.euler


def _eta(n: int, dps: int):
    # Cohen-Rodriguez Villegas-Zagier acceleration of the alternating series
    # sum_{k>=0} (-1)^k / (k+1)^n.
    m = int(1.31 * dps) + 10
    d = (3 + mp.sqrt(8)) ** m
    d = (d + 1 / d) / 2
    b, c, s = mp.mpf(-1), -d, mp.mpf(0)
    for k in range(m):
        c = b - c
        s += c / mp.mpf(k + 1) ** n
        b = b * (k + m) * (k - m) / ((k + mp.mpf(0.5)) * (k + 1))
    return s / d


def zeta_int(n: int, dps=None):
    """zeta(n) for integer n >= 2 through the eta function."""
    if n < 2:
        raise DomainError("zeta_int needs n >= 2")
    dps = _dps(dps)
    key = (n, dps)
    with _lock:
        if key in _zeta_cache:
            return _zeta_cache[key]
    with mp.workdps(dps + 15):
        v = _eta(n, dps + 15) / (1 - mp.mpf(2) ** (1 - n))
    with _lock:
        _zeta_cache.setdefault(key, v)
    return v


def bell_complete(n: int, xs):
    """Complete Bell polynomial B_n(x_1..x_n) via B_{k+1} = sum_i C(k,i) B_{k-i} x_{i+1}."""
    xs = list(xs)
    if len(xs) < n:
        raise ValueError(f"need {n} arguments, got {len(xs)}")
    B = [1]
    for k in range(n):
        B.append(sum(comb(k, i) * B[k - i] * xs[i] for i in range(k + 1)))
    return B[n]


def _beta_args(n: int, dps: int):
    xs = [euler_gamma(dps)]
    for k in range(2, n + 1):
        xs.append((-1) ** (k + 1) * mp.factorial(k - 1) * zeta_int(k, dps))
    return xs


def beta_seq(n: int, dps=None):
    """beta_n = B_n(gamma, -1! zeta(2), 2! zeta(3), ...), so 1/Gamma(s) = sum beta_n s^(n+1)/n!."""
    dps = _dps(dps)
    with mp.workdps(dps + 10):
        return bell_complete(n, _beta_args(n, dps))


def polygamma_int(j: int, dps=None):
    """psi^(j)(1) from gamma and zeta."""
    dps = _dps(dps)
    if j == 0:
        return -euler_gamma(dps)
    with mp.workdps(dps + 10):
        return (-1) ** (j + 1) * mp.factorial(j) * zeta_int(j + 1, dps)


def polygamma_half(j: int, dps=None):
    """psi^(j)(1/2) from gamma, log 2 and zeta."""
    dps = _dps(dps)
    with mp.workdps(dps + 10):
        if j == 0:
            return -euler_gamma(dps) - 2 * mp.log(2)
        return (-1) ** (j + 1) * mp.factorial(j) * (mp.mpf(2) ** (j + 1) - 1) * zeta_int(j + 1, dps)


def _seed(k: int, base: str, dps: int):
    """C^i at z=1 or z=1/2 for i <= k, from polygamma seeds."""
    with mp.workdps(dps + 10):
        if base == "1":
            psis = [polygamma_int(j, dps) for j in range(k)]
            rg = mp.mpf(1)
        else:
            psis = [polygamma_half(j, dps) for j in range(k)]
            rg = 1 / mp.sqrt(mp.pi)
        xs = [-p for p in psis]
        return [rg * bell_complete(i, xs) for i in range(k + 1)]


def _as_lattice(z):
    """Return (n, base) with z = n + offset(base), or None if z is not on the (half-)integer lattice."""
    z = mp.mpmathify(z)
    if mp.im(z) != 0:
        return None
    x = mp.re(z)
    if x == mp.floor(x):
        return int(x), "1"
    if 2 * x == mp.floor(2 * x):
        return int(mp.floor(x)), "1/2"
    return None


def recip_gamma_deriv_recurrence(k: int, z, dps=None):
    """C^k_z on the integer or half-integer lattice by C^k_z = z C^k_{z+1} + k C^(k-1)_{z+1}."""
    dps = _dps(dps)
    lat = _as_lattice(z)
    if lat is None:
        raise DomainError("recurrence method needs an integer or half-integer argument")
    n, base = lat
    off = mp.mpf(0) if base == "1" else mp.mpf(1) / 2
    start = 1 if base == "1" else 0  # seed point is 1 or 1/2
    with mp.workdps(dps + 20):
        row = _seed(k, base, dps)  # C^i at start + off
        pos = start
        while pos > n:
            x = pos - 1 + off
            row = [x * row[i] + (i * row[i - 1] if i else 0) for i in range(k + 1)]
            pos -= 1
        while pos < n:
            x = pos + off
            new = []
            for i in range(k + 1):
                prev = new[i - 1] if i else 0
                new.append((row[i] - i * prev) / x)
            row = new
            pos += 1
        out = row[k]
    with mp.workdps(dps):
        return +out


def recip_gamma_deriv_bell(k: int, z, dps=None):
    """C^k_z = B_k(-psi(z), -psi'(z), ...) / Gamma(z), shifted with the Leibniz rule at poles of Gamma."""
    dps = _dps(dps)
    z = mp.mpmathify(z)
    with mp.workdps(dps + 20):
        x = mp.re(z)
        at_pole = mp.im(z) == 0 and x <= 0 and x == mp.floor(x)
        if not at_pole:
            xs = [-mp.polygamma(j, z) for j in range(k)]
            out = mp.rgamma(z) * bell_complete(k, xs)
        else:
            # 1/Gamma(z) = P(z) / Gamma(z + m + 1) with P(z) = z(z+1)...(z+m)
            m = int(-x)
            w = z + m + 1
            xs = [-mp.polygamma(j, w) for j in range(k)]
            c = [mp.rgamma(w) * bell_complete(i, xs) for i in range(k + 1)]
            poly = [mp.mpf(1)]
            for r in range(m + 1):
                poly = [(poly[i - 1] if i else 0) + (poly[i] * r if i < len(poly) else 0)
                        for i in range(len(poly) + 1)]
            # derivatives of P at z
            pd = []
            for i in range(k + 1):
                s = mp.mpf(0)
                for e in range(i, len(poly)):
                    s += poly[e] * mp.ff(e, i) * z ** (e - i)
                pd.append(s)
            out = sum(comb(k, i) * pd[i] * c[k - i] for i in range(k + 1))
    with mp.workdps(dps):
        return +out


def recip_gamma_deriv_hankel(k: int, z, tol: float = 1e-12, contour=None) -> complex:
    """C^k_z in double precision from (1/2 pi i) int (-log lam)^k lam^(-z) e^lam dlam."""
    z = complex(z)

    def f(lam):
        ll = np.log(lam)
        return (-ll) ** k * np.exp((1 - z) * ll)

    return hankel_integral(f, contour, tol)


def recip_gamma_deriv(k: int, z, dps=None):
    """C^k_z, the k-th derivative of 1/Gamma at z.

    Lattice points (integers and half-integers) use the exact recurrence;
    elsewhere the Bell-polygamma formula.
    """
    if k < 0:
        raise DomainError("derivative order must be >= 0")
    if _as_lattice(z) is not None:
        return recip_gamma_deriv_recurrence(k, z, dps)
    return recip_gamma_deriv_bell(k, z, dps)


_taylor_cache: dict = {}


def recip_gamma_taylor(z, K: int, dps=None):
    """[C^0_z, ..., C^K_z] at an integer z (cached)."""
    dps = _dps(dps)
    key = (int(z), K, dps)
    with _lock:
        hit = _taylor_cache.get(key)
    if hit is not None:
        return hit
    vals = [recip_gamma_deriv_recurrence(i, int(z), dps) for i in range(K + 1)]
    with _lock:
        _taylor_cache.setdefault(key, vals)
    return vals


def _gamma0_series(zlog, dps: int):
    z = mp.exp(zlog)
    s = mp.mpf(0)
    t = mp.mpf(1)
    eps = mp.mpf(10) ** (-dps - 5)
    for j in range(1, 100000):
        t = t * z / j
        term = t / j
        s += term if j % 2 else -term
        if abs(term) < eps * max(1, abs(s)) and j > abs(z):
            break
    return -mp.euler - zlog + s


def _gamma0_cf(zlog, dps: int):
    # principal-sheet value by continued fraction, then the monodromy of -log z
    z = mp.exp(zlog)
    lp = mp.log(z)
    v = mp.gammainc(0, z)
    return v - (zlog - lp)


def gamma_upper0(zlog, dps=None, check: bool = True):
    """Gamma(0, z) on the universal cover, z = exp(zlog).

    Small ``|z|`` (<= 8) sums the defining series; larger ``|z|`` sums it at
    boosted precision and cross-checks against the principal-branch
    continued fraction when ``Re z > 0``.
    """
    dps = _dps(dps)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 10):
        r = abs(mp.exp(zlog))
    if r <= 8:
        with mp.workdps(dps + 15):
            out = _gamma0_series(zlog, dps + 5)
    else:
        boost = int(float(r) / 2.3) + 15
        with mp.workdps(dps + boost):
            out = _gamma0_series(zlog, dps + boost)
        if check:
            with mp.workdps(dps + 15):
                z = mp.exp(zlog)
                if mp.re(z) > 0:
                    alt = _gamma0_cf(zlog, dps)
                    if abs(alt - out) > mp.mpf(10) ** (-dps + 5) * max(1, abs(out)):
                        raise PrecisionLoss(f"Gamma(0,z) methods disagree at zlog={zlog}")
    with mp.workdps(dps):
        return +out


def e_point(s, zlog, dps=None):
    """E(s, z) = sum_k z^(k+s) / Gamma(1+k+s)."""
    dps = _dps(dps)
    s = mp.mpmathify(s)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 15):
        z = mp.exp(zlog)
        zs = mp.exp(s * zlog)
        total = mp.mpf(0)
        zk = mp.mpf(1)
        eps = mp.mpf(10) ** (-dps)
        for k in range(SERIES_CAP + 1):
            term = zk * mp.rgamma(1 + k + s)
            total += term
            if k > abs(z) and abs(term) < eps * max(abs(total), eps):
                break
            zk *= z
        else:
            raise ConvergenceError("E(s,z) series hit the truncation cap")
        out = zs * total
    with mp.workdps(dps):
        return +out


@dataclass(frozen=True)
class EkTable:
    """Series data of E_k: ``series[m, k-j] = C(k, j) C^j_{1+m}``."""

    k: int
    series: LogSeries

    def __call__(self, zlog, tol=None):
        return ls_eval(self.series, zlog, tol)


def ek_series(k: int, N: int, dps=None) -> EkTable:
    """E_k = d^k/ds^k E(s, z) at s = 0, differentiated term by term."""
    if k < 0 or N < 1:
        raise DomainError("ek_series needs k >= 0 and N >= 1")
    dps = _dps(dps)
    coeffs = {}
    with mp.workdps(dps + 10):
        for m in range(N + 1):
            C = recip_gamma_taylor(1 + m, k, dps)
            for j in range(k + 1):
                coeffs[(m, k - j)] = comb(k, j) * C[j]
    return EkTable(k, LogSeries(coeffs, N, 0, "float"))


def ek_value(k: int, zlog, dps=None):
    """E_k(z) summing ``ek_series`` far enough for full precision."""
    dps = _dps(dps)
    with mp.workdps(dps + 10):
        r = float(abs(mp.exp(mp.mpmathify(zlog))))
    N = 10
    while N < SERIES_CAP:
        # r^N / N! below 10^-dps
        if N > 2 * r and float(N * mp.log10(max(r, 1e-300)) - mp.log10(mp.factorial(N))) < -dps - 5:
            break
        N += 10
    with mp.workdps(dps + 10):
        v = ls_eval(ek_series(k, N, dps).series, zlog)
    with mp.workdps(dps):
        return +v


def _gamma_one_minus_series(K: int, dps: int):
    """Taylor coefficients of Gamma(1 - e) up to e^K."""
    a = [mp.mpf(0)] * (K + 1)
    if K >= 1:
        a[1] = euler_gamma(dps)
    for n in range(2, K + 1):
        a[n] = zeta_int(n, dps) / n
    # exp of a power series
    out = [mp.mpf(1)] + [mp.mpf(0)] * K
    for n in range(1, K + 1):
        out[n] = sum(i * a[i] * out[n - i] for i in range(1, n + 1)) / n
    return out


def t_meijer(m: int, zlog, dps=None):
    """T(m, z): minus the sum of residues of (-1/(t+1))^(m-1) Gamma(-1-t) z^t.

    The multipole at t = -1 is expanded locally; the simple poles at
    t = n - 1 (n >= 1) form a convergent series.  With this orientation
    T(1, z) = exp(-z)/z and z*T(3, z), z*T(4, z) are the Meijer G functions
    G^{3,0}_{2,3}(z | 1,1; 0,0,0) and G^{4,0}_{3,4}(z | 1,1,1; 0,0,0,0).
    """
    if m < 1:
        raise DomainError("t_meijer needs m >= 1")
    dps = _dps(dps)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 10):
        r = float(abs(mp.exp(zlog)))
    boost = int(r / 2.3) + 15
    with mp.workdps(dps + boost):
        z = mp.exp(zlog)
        # [e^(m-1)] of (-1)^m Gamma(1-e) e^(e zlog) / z
        g = _gamma_one_minus_series(m - 1, dps + boost)
        ex = [zlog ** i / mp.factorial(i) for i in range(m)]
        multi = sum(g[i] * ex[m - 1 - i] for i in range(m)) * (-1) ** m / z
        tail = mp.mpf(0)
        zn = mp.mpf(1)
        eps = mp.mpf(10) ** (-dps - 5)
        prev = None
        for n in range(1, SERIES_CAP * 4):
            zn = zn * z / n  # z^n / n!
            term = (-mp.mpf(1) / n) ** (m - 1) * (-(-1) ** n) * zn / z
            tail += term
            if n > r and abs(term) < eps * max(1, abs(tail)):
                break
            prev = term
        else:
            raise ConvergenceError(f"T({m}, z) residue series did not converge")
        out = -(multi + tail)
    with mp.workdps(dps):
        return +out


def g_m(m: int, zlog, dps=None):
    """g_m(z) = log^m z Gamma(0,z) + m z sum_i (m-1)!/(m-i-1)! log^(m-i-1) z T(3+i, z)."""
    if m < 0:
        raise DomainError("g_m needs m >= 0")
    dps = _dps(dps)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 10):
        z = mp.exp(zlog)
        out = zlog ** m * gamma_upper0(zlog, dps + 10)
        for i in range(m):
            out += m * z * mp.factorial(m - 1) / mp.factorial(m - i - 1) * zlog ** (m - i - 1) \
                * t_meijer(3 + i, zlog, dps + 10)
    with mp.workdps(dps):
        return +out


def e_closed(j: int, zlog, dps=None):
    """E_j(z) = e^z (delta_0j - j! sum_n beta_n g_(j-n-1) / (n! (j-n-1)!))."""
    dps = _dps(dps)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 10):
        s = mp.mpf(1 if j == 0 else 0)
        for n in range(j):
            s -= mp.factorial(j) * beta_seq(n, dps + 10) * g_m(j - n - 1, zlog, dps + 10) \
                / (mp.factorial(n) * mp.factorial(j - n - 1))
        out = mp.exp(mp.exp(zlog)) * s
    with mp.workdps(dps):
        return +out


def e2_printed(zlog, dps=None):
    """-2 e^z (G^{3,0}_{2,3}(z|1,1;0,0,0) + (gamma + log z) Gamma(0,z))."""
    dps = _dps(dps)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 10):
        z = mp.exp(zlog)
        G3 = z * t_meijer(3, zlog, dps + 10)
        out = -2 * mp.exp(z) * (G3 + (euler_gamma(dps + 10) + zlog) * gamma_upper0(zlog, dps + 10))
    with mp.workdps(dps):
        return +out


def e3_printed(zlog, dps=None):
    """-(1/2) e^z (12 G4 + 12 (log z + gamma) G3 + (6 log z (log z + 2 gamma) + 6 gamma^2 - pi^2) Gamma(0,z))."""
    dps = _dps(dps)
    zlog = mp.mpmathify(zlog)
    with mp.workdps(dps + 10):
        z = mp.exp(zlog)
        g = euler_gamma(dps + 10)
        G3 = z * t_meijer(3, zlog, dps + 10)
        G4 = z * t_meijer(4, zlog, dps + 10)
        poly = 6 * zlog * (zlog + 2 * g) + 6 * g ** 2 - mp.pi ** 2
        out = -mp.mpf(1) / 2 * mp.exp(z) * (12 * G4 + 12 * (zlog + g) * G3 + poly * gamma_upper0(zlog, dps + 10))
    with mp.workdps(dps):
        return +out
