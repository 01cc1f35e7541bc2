"""Quantum differential equations at fixed small-quantum points.

Covers the rank-4 equation of the plane blown up at a point and the rank-2
equation of the projective line: cyclic frames and Lambda matrices, exact
reduction to the scalar master equation, series bases of its solutions
(Borel multitransform sums and the hypergeometric I-function), and
Mellin-Barnes master functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import mpmath as mp
import numpy as np
from scipy import special as sps

from .borel import AlgLogSeries, ek_evaluator
from .cohalg import BLOWUP_RHO, BLOWUP_XI, alg_blowup_p2
from .contour import HankelContour, ParabolicContour, hankel_integral, mellin_barnes_integral
from .exactlin import Poly, RatFun, RatFunMatrix, ratfun_det, ratfun_mat_inverse
from .logseries import LogSeries, ThetaOperator, _to_float, op_apply
from .specfun import euler_gamma, precision, recip_gamma_taylor

__all__ = [
    "QdeData",
    "CyclicFrame",
    "MasterODE",
    "MasterBasis",
    "NotCompanion",
    "DimensionError",
    "qde_blowup_data",
    "qde_p1",
    "PRESENTATION_CHANGE",
    "reference_lambda_blowup",
    "reference_ode_blowup",
    "cyclic_frame",
    "derive_master_ode",
    "compare_odes",
    "p1_basis",
    "blowup_borel_sum",
    "blowup_borel_basis",
    "verify_solution",
    "i_function_blowup",
    "mb_master_pn",
    "thm_mt22_H",
    "span_fit",
    "series_span_fit",
    "basis_rank",
]


class NotCompanion(ArithmeticError):
    pass


class DimensionError(ValueError):
    pass


# --- data ------------------------------------------------------------------------


@dataclass(frozen=True)
class QdeData:
    """dsigma/dz = (U + mu/z) sigma with constant U and diagonal grading mu."""

    U: RatFunMatrix
    mu: RatFunMatrix
    cdim: int
    q: tuple = ()
    name: str = ""

    @property
    def rank(self) -> int:
        return self.U.rows

    def rebase(self, S: RatFunMatrix) -> "QdeData":
        """Same equation in the basis given by the columns of ``S``."""
        Si = ratfun_mat_inverse(S)
        return QdeData(Si @ self.U @ S, Si @ self.mu @ S, self.cdim, self.q, self.name + "*")


def qde_blowup_data(q1=1, q2=1) -> QdeData:
    """Small-quantum data of the blown-up plane in the basis (1, H+F, F, pt)."""
    q1, q2 = Fraction(q1), Fraction(q2)
    U = RatFunMatrix([
        [0, 2 * q1, 0, 3 * q1 * q1 * q2],
        [2, q1 * q2, q1 * q2, 0],
        [-1, -2 * q1 * q2, -2 * q1 * q2, 2 * q1],
        [0, 5, 2, 0],
    ])
    mu = RatFunMatrix.diag([-1, 0, 0, 1])
    return QdeData(U, mu, 2, (q1, q2), "blowup-p2")


def qde_p1() -> QdeData:
    """Projective line at q = 1: s*s = q and c_1 = 2s give U = [[0,2],[2,0]]."""
    U = RatFunMatrix([[0, 2], [2, 0]])
    mu = RatFunMatrix.diag([Fraction(-1, 2), Fraction(1, 2)])
    return QdeData(U, mu, 1, (Fraction(1),), "p1")


# The multiplication matrix above is written in the basis (1, T1+T2, T2, T3)
# (its first Chern class reads 2e1 - e2 and c1*T1 = 5 T3), whereas the
# reference Lambda matrix uses the presentation basis (1, T1, T2, T3).
# Columns of this matrix express the presentation basis in the former one.
PRESENTATION_CHANGE = RatFunMatrix([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, -1, 1, 0],
    [0, 0, 0, 1],
])

def _den(k: int) -> Poly:
    return Poly([-24, 283]) * Poly.z(k)


def reference_lambda_blowup() -> RatFunMatrix:
    """Reference Lambda(0, z) of the blown-up plane in the presentation basis."""
    def num(coeffs_desc):
        return Poly(list(reversed(coeffs_desc)))
    rows = [
        [RatFun(1), RatFun(num([204, -105, 9, 8]), _den(2)), RatFun(num([-408, -73, 6, -16]), _den(2)),
         RatFun(num([-218, 16, 35, -6]), _den(2))],
        [RatFun(0), RatFun(num([169, -9, -8]), _den(1)), RatFun(num([-55, -6, 16]), _den(1)),
         RatFun(num([-28, -35, 6]), _den(1))],
        [RatFun(0), RatFun(num([1, 0]), _den(0)), RatFun(num([-2, 0]), _den(0)), RatFun(num([35, -3]), _den(0))],
        [RatFun(0), RatFun(num([-8, 0]), _den(0)), RatFun(num([16, 0]), _den(0)), RatFun(num([3, 0]), _den(0))],
    ]
    return RatFunMatrix(rows)


# --- cyclic frame and master equation ------------------------------------------------


@dataclass(frozen=True)
class CyclicFrame:
    vectors: tuple
    E: RatFunMatrix
    Lambda: RatFunMatrix
    detLambda: RatFun


def _nabla(d: QdeData, v):
    """d/dz v + U v - mu v / z."""
    z_inv = RatFun.z(-1)
    Uv = d.U @ v
    muv = d.mu @ v
    return [vi.deriv() + a - b * z_inv for vi, a, b in zip(v, Uv, muv)]


def cyclic_frame(d: QdeData) -> CyclicFrame:
    n = d.rank
    e = [RatFun(1)] + [RatFun(0)] * (n - 1)
    vecs = [tuple(e)]
    for _ in range(n - 1):
        e = _nabla(d, e)
        vecs.append(tuple(e))
    E = RatFunMatrix.from_columns(vecs)
    Lam = ratfun_mat_inverse(E)
    return CyclicFrame(tuple(vecs), E, Lam, ratfun_det(Lam))


@dataclass
class MasterODE:
    op: ThetaOperator
    apparent: Poly
    provenance: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.op.order

    def apparent_count(self) -> int:
        return max(self.apparent.degree, 0)


def _stirling1(n: int):
    """Signed Stirling numbers s(i, k), 0 <= k <= i <= n: falling factorial (t)_i = sum_k s(i,k) t^k."""
    s = [[0] * (n + 1) for _ in range(n + 1)]
    s[0][0] = 1
    for i in range(1, n + 1):
        for k in range(1, i + 1):
            s[i][k] = s[i - 1][k - 1] - (i - 1) * s[i - 1][k]
    return s


def _companion_row(C: RatFunMatrix):
    """Detect the companion convention; return (coefficients, description)."""
    n = C.rows
    super_ok = all(
        C[i, j] == RatFun(1 if j == i + 1 else 0) for i in range(n - 1) for j in range(n))
    if super_ok:
        return [C[n - 1, j] for j in range(n)], "unit superdiagonal, free last row"
    sub_ok = all(
        C[i, j] == RatFun(1 if i == j + 1 else 0) for j in range(n - 1) for i in range(n))
    if sub_ok:
        return [C[i, n - 1] for i in range(n)], "unit subdiagonal, free last column"
    raise NotCompanion("companion shape check failed:\n" + "\n".join(
        "  " + " | ".join(C[i, j].to_str() for j in range(n)) for i in range(n)))


def derive_master_ode(d: QdeData) -> MasterODE:
    """Scalar equation for the first flat-covector component, written for
    Phi = z^(-cdim/2) varpi_0 in theta-form with coprime integer coefficients."""
    fr = cyclic_frame(d)
    n = d.rank
    Lam = fr.Lambda
    LamT = Lam.T()
    LamInvT = ratfun_mat_inverse(Lam).T()
    zinv = RatFun.z(-1)
    C = (LamInvT @ d.U.T() @ LamT) - (LamInvT @ d.mu @ LamT).scale(zinv) + (LamInvT.deriv() @ LamT)
    c, convention = _companion_row(C)
    # varpi^(n) = sum_i c_i varpi^(i); times z^n, with z^i D^i = falling factorial in theta
    a = [-(ci * RatFun.z(n - i)) for i, ci in enumerate(c)] + [RatFun(1)]
    st = _stirling1(n)
    b = [sum((a[i] * st[i][k] for i in range(k, n + 1)), RatFun(0)) for k in range(n + 1)]
    # varpi_0 = z^shift Phi:  theta -> theta + shift
    shift = Fraction(d.cdim, 2)
    bb = [sum((b[k] * (math.comb(k, j) * shift ** (k - j)) for k in range(j, n + 1)), RatFun(0))
          for j in range(n + 1)]
    den = reduce(lambda x, y: (x * y).exact_div(x.gcd(y)), (r.den for r in bb), Poly.const(1))
    polys = [r.num * den.exact_div(r.den) for r in bb]
    g = reduce(lambda x, y: x.gcd(y), (p for p in polys if not p.is_zero()))
    polys = [p.exact_div(g) for p in polys]
    op = ThetaOperator(polys).normalized()
    lead = op.coeffs[-1]
    v = lead.valuation()
    apparent = Poly(lead.c[v:]).primitive()
    prov = {"source": "derived", "companion": convention, "model": d.name,
            "detLambda": fr.detLambda.to_str(), "master_shift": str(shift)}
    return MasterODE(op, apparent, prov)


def reference_ode_blowup() -> MasterODE:
    """Reference operator of the blown-up plane at the origin, as stated, for comparison."""
    def desc(*c):
        return Poly(list(reversed(c)))
    z2 = Poly.z(2)
    coeffs = [
        z2 * desc(-3113, -9924, 1476, 192),
        z2 * desc(2547, 350, -104) * -4,
        desc(-2264, 192, 3),
        desc(283, -590, 24),
        desc(283, -24),
    ]
    op = ThetaOperator(coeffs)
    return MasterODE(op, desc(283, -24), {"source": "printed", "model": "blowup-p2"})


def compare_odes(derived: MasterODE, other: MasterODE) -> dict:
    """Coefficient-by-coefficient comparison of two operators."""
    rows = []
    n = max(derived.order, other.order)
    for i in range(n + 1):
        p = derived.op.coeffs[i] if i <= derived.order else Poly()
        q = other.op.coeffs[i] if i <= other.order else Poly()
        rows.append({
            "theta_power": i,
            "derived": p.to_str(),
            other.provenance.get("source", "other"): q.to_str(),
            "equal": p == q,
            "difference": (p - q).to_str(),
        })
    return {"agree": all(r["equal"] for r in rows), "coefficients": rows}


# --- series bases ---------------------------------------------------------------------


@dataclass
class MasterBasis:
    members: list
    label: str
    provenance: list

    def __len__(self):
        return len(self.members)


def _harmonic(k: int) -> Fraction:
    return sum((Fraction(1, m) for m in range(1, k + 1)), Fraction(0))


def p1_basis(a0, b0, N: int) -> LogSeries:
    """sum_{k<=N} (a_k + b_k log z) z^(2k)/(k!)^2 with a_k = a0 - b0 H_k, b_k = b0."""
    if N < 1:
        raise ValueError("N >= 1 required")
    a0, b0 = Fraction(a0), Fraction(b0)
    coeffs = {}
    for k in range(N + 1):
        f = Fraction(1, math.factorial(k) ** 2)
        coeffs[(2 * k, 0)] = (a0 - b0 * _harmonic(k)) * f
        coeffs[(2 * k, 1)] = b0 * f
    return LogSeries(coeffs, 2 * N)


def _cvals(w: int, K: int, dps: int):
    return recip_gamma_taylor(w, K, dps)


def _d_sum(a0, b0, p: int, N: int, dps: int, weights=None, exact=False):
    """Double (weights None) or triple sums of the basis expansion.

    weights None:
        sum_{k,h} [(a_k + b_k L/2) C^p_{1+h-k} - (b_k/2) C^{p+1}_{1+h-k}] z^(k+2h) / ((k!)^2 h!)
    weights w_j (j >= 1):
        same with C at 1+j+h-k, extra factor w_j and z^(k+2(j+h)).
    """
    a0, b0 = Fraction(a0), Fraction(b0)
    coeffs = {}

    def add(key, v):
        coeffs[key] = coeffs.get(key, 0) + v

    js = [0] if weights is None else range(1, N // 2 + 1)
    for k in range(N + 1):
        ak = a0 - b0 * _harmonic(k)
        bk = b0
        for j in js:
            wj = 1 if weights is None else weights(j)
            for h in range(N // 2 + 1):
                m = k + 2 * (j + h)
                if m > N:
                    break
                arg = 1 + j + h - k
                pref = Fraction(wj) / (math.factorial(k) ** 2 * math.factorial(h))
                if exact:
                    if p != 0 or bk != 0:
                        raise ValueError("exact sums need p = 0 and b0 = 0")
                    c0 = Fraction(1, math.factorial(arg - 1)) if arg >= 1 else Fraction(0)
                    add((m, 0), ak * c0 * pref)
                    continue
                C = _cvals(arg, p + 1, dps)
                pf = mp.mpf(pref.numerator) / pref.denominator
                add((m, 0), pf * (mp.mpf(ak.numerator) / ak.denominator * C[p] - mp.mpf(bk.numerator) / bk.denominator / 2 * C[p + 1]))
                if bk:
                    add((m, 1), pf * mp.mpf(bk.numerator) / bk.denominator / 2 * C[p])
    return LogSeries(coeffs, N, 0, "exact" if exact else "float")


def _w_gamma(j):
    return Fraction((-1) ** j, j * math.factorial(j))


def _w_g(l):
    return Fraction((-1) ** (1 + l), l * l * math.factorial(l))


def blowup_borel_sum(a0, b0, j: int, N: int, dps=None) -> LogSeries:
    """B[U, E_j] for U with data (a0, b0), j in {0, 1, 2}, from the explicit sums."""
    dps = precision() if dps is None else dps
    with mp.workdps(dps + 10):
        if j == 0:
            exact = Fraction(b0) == 0
            return _d_sum(a0, b0, 0, N, dps, exact=exact)
        g = euler_gamma(dps)
        L = LogSeries({(0, 1): mp.mpf(1)}, N, 0, "float")
        one = LogSeries({(0, 0): mp.mpf(1)}, N, 0, "float")
        D0 = _d_sum(a0, b0, 0, N, dps)
        D1 = _d_sum(a0, b0, 1, N, dps)
        T0 = _d_sum(a0, b0, 0, N, dps, _w_gamma)
        if j == 1:
            return (one * g + L * 2) * D0 + D1 + T0
        if j == 2:
            D2 = _d_sum(a0, b0, 2, N, dps)
            T1 = _d_sum(a0, b0, 1, N, dps, _w_gamma)
            TG = _d_sum(a0, b0, 0, N, dps, _w_g)
            pre0 = one * (g * g - mp.pi ** 2 / 6) + L * (4 * g) + L * L * 4
            pre1 = one * (2 * g) + L * 4
            return pre0 * D0 + pre1 * D1 + D2 + pre1 * T0 + T1 * 2 + TG * 2
    raise ValueError("j must be 0, 1 or 2")


def blowup_borel_basis(N: int, dps=None) -> MasterBasis:
    """B[U1,E0], B[U2,E0], B[U1,E1], 4 B[U2,E1] + B[U1,E2] through order N."""
    if N < 4:
        raise ValueError("N >= 4 required")
    dps = precision() if dps is None else dps
    m0 = blowup_borel_sum(1, 0, 0, N, dps)
    m1 = blowup_borel_sum(0, 1, 0, N, dps)
    m2 = blowup_borel_sum(1, 0, 1, N, dps)
    with mp.workdps(dps + 10):
        m3 = blowup_borel_sum(0, 1, 1, N, dps) * 4 + blowup_borel_sum(1, 0, 2, N, dps)
    prov = ["B[U1,E0]", "B[U2,E0]", "B[U1,E1]", "4B[U2,E1]+B[U1,E2]"]
    return MasterBasis([m0, m1, m2, m3], "blowup-borel", prov)


@dataclass
class Residual:
    passed: bool
    residual: LogSeries
    trusted_order: int
    max_abs: object
    first_failure: tuple | None

    def summary(self) -> dict:
        return {"passed": self.passed, "trusted_order": self.trusted_order,
                "max_abs_residual": mp.nstr(self.max_abs, 5), "first_failure": self.first_failure}


def verify_solution(ode: MasterODE, s: LogSeries, tol: float = 1e-10) -> Residual:
    """Apply the operator and inspect every trusted residual coefficient."""
    with mp.workdps(precision() + 10):
        r = op_apply(ode.op, s)
    worst = mp.mpf(0)
    first = None
    for key in sorted(r.coeffs):
        c = r.coeffs[key]
        a = abs(mp.mpmathify(c)) if r.kind == "float" else abs(complex(c))
        bad = (c != 0) if r.kind == "exact" else (a > tol)
        if a > worst:
            worst = mp.mpf(a)
        if bad and first is None:
            first = key
    return Residual(first is None, r, r.ord_valid, worst, first)


# --- I-function -----------------------------------------------------------------------


def i_function_blowup(N: int) -> AlgLogSeries:
    """Hypergeometric I-function of P(O + O(-1)) over the line at the origin.

    sum_{d,nu} J_d z^(d + 2 nu) z^(rho + 2 xi) /
        [prod_{m=1}^{nu} (xi + m) * prod_{m=1}^{nu-d} (xi - rho + m)],
    J_d = (1 - 2 H_d rho)/(d!)^2; for nu < d the second product becomes the
    numerator prod_{m=nu-d+1}^{0} (xi - rho + m).
    """
    if N < 1:
        raise ValueError("N >= 1 required")
    A = alg_blowup_p2()
    xi, rho = A.basis(BLOWUP_XI), A.basis(BLOWUP_RHO)
    one = A.one()
    c1 = rho + xi * 2
    logpow = [one]
    for j in range(1, A.dim + 1):
        logpow.append(logpow[-1] * c1 * Fraction(1, j))
    coeff = {}
    for d in range(N + 1):
        Jd = (one - rho * (2 * _harmonic(d))) * Fraction(1, math.factorial(d) ** 2)
        for nu in range((N - d) // 2 + 1):
            f = Jd
            for m in range(1, nu + 1):
                f = f * (xi + m).inverse()
            if nu >= d:
                for m in range(1, nu - d + 1):
                    f = f * (xi - rho + m).inverse()
            else:
                for m in range(nu - d + 1, 1):
                    f = f * (xi - rho + m)
            deg = d + 2 * nu
            for j, lp in enumerate(logpow):
                t = f * lp
                if t.is_zero():
                    continue
                key = (deg, j)
                coeff[key] = coeff[key] + t if key in coeff else t
    comps = []
    for i in range(A.dim):
        comps.append(LogSeries({k: v.c[i] for k, v in coeff.items()}, N))
    return AlgLogSeries(A, tuple(comps))


# --- Mellin-Barnes master functions ---------------------------------------------------


def _phase(n: int, j: int):
    odd = n % 2
    return lambda s: np.exp(2j * np.pi * j * s + (1j * np.pi * s if odd else 0))


def mb_master_pn(n: int, j: int, zlog, tol: float = 1e-10, c: ParabolicContour | None = None):
    """(1/2 pi i) int Gamma(s)^n z^(-n s) phi_j(s) ds on a parabola enclosing the poles of Gamma."""
    if not 0 <= j < n:
        raise DimensionError("need 0 <= j < n")
    zlog = complex(zlog)
    ph = _phase(n, j)

    def f(s):
        return np.exp(n * sps.loggamma(s) - n * s * zlog) * ph(s)

    return mellin_barnes_integral(f, c, tol)


def thm_mt22_H(n_list, d_list, j_list, k: int, zlog, tol: float = 1e-8,
               c: ParabolicContour | None = None, hc: HankelContour | None = None):
    """Iterated Mellin-Barnes x Hankel quadrature of

        prod_i Gamma(s_i)^n_i phi_j_i(s_i) E_k(z^2/lambda) z^(sum (d_i - n_i) s_i) e^lambda / lambda^(1 + sum d_i s_i).
    """
    h = len(n_list)
    if not (1 <= h <= 2) or len(d_list) != h or len(j_list) != h:
        raise DimensionError("supported arities are 1 and 2 with matching lists")
    for n, d, j in zip(n_list, d_list, j_list):
        if not 0 < d < n:
            raise DimensionError("need 0 < d_i < n_i")
        if not 0 <= j < n:
            raise DimensionError("need 0 <= j_i < n_i")
    if not 0 <= k <= 1 - h + sum(n_list):
        raise DimensionError(f"k must lie in [0, {1 - h + sum(n_list)}]")
    zlog = complex(zlog)
    Ek = ek_evaluator(k)
    hc = hc or HankelContour()
    inner_tol = tol / 10

    def inner(svals, dsum):
        # svals: array of sum_i d_i s_i
        def f(lam):
            ll = np.log(lam)
            e = Ek(2 * zlog - ll)
            return e[:, None] * np.exp(-np.outer(ll, svals))
        return hankel_integral(f, hc, inner_tol)

    def factor(i, s):
        n, d, j = n_list[i], d_list[i], j_list[i]
        return np.exp(n * sps.loggamma(s) + (d - n) * s * zlog) * _phase(n, j)(s)

    if h == 1:
        def g(s):
            return factor(0, s) * inner(d_list[0] * s, None)
        return mellin_barnes_integral(g, c, tol)

    def g_outer(s1):
        vals = []
        for a in np.atleast_1d(s1):
            def g_in(s2, a=a):
                tot = d_list[0] * a + d_list[1] * s2
                return factor(1, s2) * inner(tot, None)
            vals.append(factor(0, np.array([a]))[0] * mellin_barnes_integral(g_in, c, inner_tol, tail_test=False))
        return np.array(vals)

    return mellin_barnes_integral(g_outer, c, tol)


# --- span fits -------------------------------------------------------------------------


def span_fit(values_fit, basis_fit, values_check, basis_check):
    """Least-squares fit of values against basis columns at fit points; residuals at check points.

    ``basis_*`` are (points x members) arrays.  Returns a dict with
    coefficients, the condition number and the worst relative check residual.
    """
    A = np.asarray(basis_fit, dtype=complex)
    y = np.asarray(values_fit, dtype=complex)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    cond = float(np.linalg.cond(A))
    fit_res = np.abs(A @ coef - y)
    Bc = np.asarray(basis_check, dtype=complex)
    yc = np.asarray(values_check, dtype=complex)
    chk = np.abs(Bc @ coef - yc) / np.maximum(1.0, np.abs(yc))
    return {"coefficients": coef, "condition": cond, "fit_residual": float(np.max(fit_res)),
            "check_residual": float(np.max(chk))}


def _coeff_vector(s: LogSeries, keys):
    return [_to_float(s[k]) for k in keys]


def series_span_fit(target: LogSeries, basis, upto: int):
    """Express ``target`` in the span of ``basis`` using coefficients with m <= upto.

    Returns (coefficients, max residual); least squares via the normal equations
    at raised precision.
    """
    keys = sorted({k for s in [target] + list(basis) for k in s.coeffs if k[0] <= upto})
    with mp.workdps(precision() + 10):
        A = mp.matrix(len(keys), len(basis))
        for c, s in enumerate(basis):
            for r, v in enumerate(_coeff_vector(s, keys)):
                A[r, c] = v
        y = mp.matrix(_coeff_vector(target, keys))
        x = mp.lu_solve(A, y)
        res = A * x - y
        worst = max((abs(res[i]) for i in range(len(keys))), default=mp.mpf(0))
        return [x[i] for i in range(len(basis))], worst


def basis_rank(basis, upto: int, tol=1e-20) -> int:
    keys = sorted({k for s in basis for k in s.coeffs if k[0] <= upto})
    A = np.array([[float(v) for v in _coeff_vector(s, keys)] for s in basis])
    return int(np.linalg.matrix_rank(A, tol=tol * max(1.0, float(np.max(np.abs(A))))))
