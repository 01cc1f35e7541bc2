"""Borel (alpha, beta)-multitransforms.

Numeric transform::

    B[f_1..f_h](z) = 1/(2 pi i) * int_H prod_l f_l(z^(1/(a_l b_l)) lambda^(-b_l)) e^lambda dlambda/lambda

over a Hankel contour, with every f_l given as a numpy evaluator on
log-arguments.  Formal transform: on generalized power series whose
exponents are ``kappa*n + nil`` (``nil`` nilpotent in a coefficient
algebra), monomials map as

    prod_l Z^(s_l)  ->  Z^(sum_l s_l/(a_l b_l)) / Gamma(1 + sum_l b_l s_l),

where 1/Gamma is evaluated at scalar + nilpotent by its Taylor expansion.
Analytifying the formal result (Z^s -> z^s = z^scalar exp(nil log z))
reproduces the numeric transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd

import mpmath as mp
import numpy as np

from .cohalg import (
    AlgebraMismatch,
    AlgElement,
    NilAlgebra,
    NotNilpotent,
    alg_blowup_p2,
    alg_point,
    alg_projective,
    alg_tensor,
    BLOWUP_XI,
    BLOWUP_RHO,
    nilpotent_series_eval,
    taylor_eval,
)
from .contour import HankelContour, hankel_integral
from .logseries import LogSeries
from .specfun import recip_gamma_deriv, recip_gamma_taylor

__all__ = [
    "BorelWeights",
    "bundle_weights",
    "BLOWUP_WEIGHTS",
    "RibenboimSeries",
    "AlgLogSeries",
    "ribenboim_mul",
    "borel_formal",
    "analytify",
    "e_series",
    "upsilon_series",
    "jp1_series",
    "builtin_series",
    "borel_numeric",
    "ups_evaluator",
    "ek_evaluator",
    "exp_evaluator",
    "builtin_evaluator",
    "formal_pair",
]


@dataclass(frozen=True)
class BorelWeights:
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        a = tuple(Fraction(x) for x in self.alpha)
        b = tuple(Fraction(x) for x in self.beta)
        if len(a) != len(b) or not a:
            raise ValueError("alpha and beta must have the same positive length")
        if any(x == 0 for x in a + b):
            raise ValueError("weights must be nonzero")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def h(self) -> int:
        return len(self.alpha)

    def scale(self, l: int) -> Fraction:
        """Exponent rescaling 1/(alpha_l beta_l)."""
        return 1 / (self.alpha[l] * self.beta[l])


def bundle_weights(ells, ds) -> BorelWeights:
    """Weights for a bundle P(O + L_1^(-d_1) x ... ) over a product with c_1(X_j) = ell_j c_1(L_j)."""
    alpha = [Fraction(l * l, d * (d - l)) for l, d in zip(ells, ds)] + [Fraction(1, 2)]
    beta = [Fraction(-d, l) for l, d in zip(ells, ds)] + [Fraction(1)]
    return BorelWeights(tuple(alpha), tuple(beta))


BLOWUP_WEIGHTS = bundle_weights([2], [1])  # ((-4, 1/2), (-1/2, 1))


def _rgcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(gcd(a.numerator, b.numerator), a.denominator * b.denominator // gcd(a.denominator, b.denominator))


def _nil_key(x: AlgElement) -> tuple:
    for c in x.c:
        if not isinstance(c, (int, Fraction)):
            raise TypeError("nilpotent exponent parts must be exact")
    return tuple(Fraction(c) for c in x.c)


class RibenboimSeries:
    """Truncated generalized series sum f(s) Z^s, s = kappa*n + nil.

    ``terms`` maps ``(n, nil)`` to a coefficient :class:`AlgElement`; ``nil``
    is an exact coefficient tuple with zero unit part.  Terms with ``n > N``
    are dropped.
    """

    def __init__(self, alg: NilAlgebra, terms, N: int, kappa=1):
        self.alg = alg
        self.kappa = Fraction(kappa)
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        self.N = N
        clean = {}
        for (n, nil), coef in terms.items():
            if n > N or n < 0:
                continue
            nil_el = nil if isinstance(nil, AlgElement) else AlgElement(alg, nil)
            if nil_el.alg != alg or coef.alg != alg:
                raise AlgebraMismatch("term outside the series algebra")
            if nil_el.unit_part() != 0 or not nil_el.is_nilpotent():
                raise NotNilpotent("exponent nil part must be nilpotent")
            key = (n, _nil_key(nil_el))
            clean[key] = clean[key] + coef if key in clean else coef
        self.terms = {k: v for k, v in clean.items() if not v.is_zero()}

    @property
    def order(self) -> Fraction:
        """Largest trusted scalar exponent."""
        return self.kappa * self.N

    def valuation(self) -> Fraction:
        return min((self.kappa * n for n, _ in self.terms), default=self.order + 1)

    def exponent(self, key):
        n, nil = key
        return self.kappa * n, AlgElement(self.alg, nil)

    def __eq__(self, other):
        if not isinstance(other, RibenboimSeries):
            return NotImplemented
        return self.alg == other.alg and self._normal() == other._normal()

    def _normal(self):
        # exponents as exact scalars so that different kappa compare equal
        return (self.order, {(self.kappa * n, nil): tuple(c.c) for (n, nil), c in self.terms.items()})

    def __add__(self, other):
        if other.alg != self.alg:
            raise AlgebraMismatch("series over different algebras")
        k = _rgcd(self.kappa, other.kappa)
        terms = {}
        for s in (self, other):
            f = s.kappa / k
            for (n, nil), c in s.terms.items():
                key = (int(n * f), nil)
                terms[key] = terms[key] + c if key in terms else c
        N = int(min(self.order, other.order) / k)
        return RibenboimSeries(self.alg, terms, N, k)

    def scale(self, c) -> "RibenboimSeries":
        return RibenboimSeries(self.alg, {k: v * c for k, v in self.terms.items()}, self.N, self.kappa)

    def embed(self, B: NilAlgebra, images) -> "RibenboimSeries":
        """Push forward along the algebra map sending basis ``i`` to ``images[i]``."""
        def push(x: AlgElement) -> AlgElement:
            out = B.zero()
            for i, c in enumerate(x.c):
                if c != 0:
                    out = out + images[i] * c
            return out
        terms = {}
        for (n, nil), c in self.terms.items():
            terms[(n, push(AlgElement(self.alg, nil)))] = push(c)
        return RibenboimSeries(B, terms, self.N, self.kappa)

    def __repr__(self):
        return f"RibenboimSeries({self.alg.name}, kappa={self.kappa}, N={self.N}, terms={len(self.terms)})"


def ribenboim_mul(f: RibenboimSeries, g: RibenboimSeries) -> RibenboimSeries:
    """Convolution product; exponents add in the monoid, nil parts in the algebra."""
    if f.alg != g.alg:
        raise AlgebraMismatch("series over different algebras")
    k = _rgcd(f.kappa, g.kappa)
    top = min(f.order + g.valuation(), g.order + f.valuation())
    N = int(math.floor(top / k))
    ff, gf = f.kappa / k, g.kappa / k
    terms = {}
    for (n1, nil1), c1 in f.terms.items():
        for (n2, nil2), c2 in g.terms.items():
            n = int(n1 * ff + n2 * gf)
            if n > N:
                continue
            nil = tuple(a + b for a, b in zip(nil1, nil2))
            key = (n, nil)
            prod_ = c1 * c2
            terms[key] = terms[key] + prod_ if key in terms else prod_
    return RibenboimSeries(f.alg, terms, N, k)


@lru_cache(maxsize=4096)
def _rgamma_derivs(c: Fraction, K: int, dps: int):
    if c.denominator == 1:
        return tuple(recip_gamma_taylor(int(c), K, dps))
    return tuple(recip_gamma_deriv(j, mp.mpf(c.numerator) / c.denominator, dps) for j in range(K + 1))


def _recip_gamma_nil(c: Fraction, nil: AlgElement, dps: int) -> AlgElement:
    """1/Gamma(c + nil) by Taylor expansion around the scalar c."""
    K = nil.alg.dim
    d = _rgamma_derivs(c, K, dps)
    return taylor_eval(lambda j: d[j], nil)


def borel_formal(fs, w: BorelWeights, dps: int | None = None) -> RibenboimSeries:
    """Formal multitransform on truncated series over a common algebra."""
    from .specfun import precision
    dps = precision() if dps is None else dps
    fs = list(fs)
    if len(fs) != w.h:
        raise ValueError(f"{len(fs)} inputs for arity {w.h}")
    alg = fs[0].alg
    if any(f.alg != alg for f in fs):
        raise AlgebraMismatch("inputs over different algebras")
    scales = [w.scale(l) for l in range(w.h)]
    if any(s <= 0 for s in scales):
        raise ValueError("formal transform needs alpha_l beta_l > 0")
    steps = [f.kappa * s for f, s in zip(fs, scales)]
    kappa = reduce(_rgcd, steps)
    vals = [f.valuation() * s for f, s in zip(fs, scales)]
    tops = [f.order * s for f, s in zip(fs, scales)]
    top = min(tops[l] + sum(vals) - vals[l] for l in range(w.h))
    N = int(math.floor(top / kappa))
    terms = {}
    for combo in product(*[list(f.terms.items()) for f in fs]):
        scal_exp = Fraction(0)
        gam_scalar = Fraction(1)
        nil_out = alg.zero()
        gam_nil = alg.zero()
        coef = alg.one()
        for l, ((n, nil), c) in enumerate(combo):
            f = fs[l]
            s_scalar = f.kappa * n
            nil_el = AlgElement(alg, nil)
            scal_exp += s_scalar * scales[l]
            nil_out = nil_out + nil_el * scales[l]
            gam_scalar += w.beta[l] * s_scalar
            gam_nil = gam_nil + nil_el * w.beta[l]
            coef = coef * c
        n_out = scal_exp / kappa
        if n_out > N:
            continue
        coef = coef * _recip_gamma_nil(gam_scalar, gam_nil, dps)
        key = (int(n_out), _nil_key(nil_out))
        terms[key] = terms[key] + coef if key in terms else coef
    return RibenboimSeries(alg, terms, N, kappa)


@dataclass(frozen=True)
class AlgLogSeries:
    """Algebra-valued log series: one :class:`LogSeries` per basis direction."""

    alg: NilAlgebra
    components: tuple

    def __getitem__(self, i) -> LogSeries:
        return self.components[i]

    def pair(self, covector) -> LogSeries:
        out = None
        for c, s in zip(covector, self.components):
            if c == 0:
                continue
            t = s * c
            out = t if out is None else out + t
        return out if out is not None else self.components[0] * 0


def analytify(f: RibenboimSeries) -> AlgLogSeries:
    """Replace Z^(kappa n + nil) by z^(kappa n) * exp(nil * log z)."""
    exps = {f.kappa * n for n, _ in f.terms}
    fracs = {e - math.floor(e) for e in exps} or {Fraction(0)}
    if len(fracs) > 1:
        raise ValueError("scalar exponents do not share a single offset")
    sigma = fracs.pop()
    alg = f.alg
    comps = [dict() for _ in range(alg.dim)]
    Nz = int(math.floor(f.order - sigma))
    for (n, nil), c in f.terms.items():
        m = int(f.kappa * n - sigma)
        nil_el = AlgElement(alg, nil)
        p = alg.one()
        j = 0
        fact = 1
        while not p.is_zero():
            term = c * p
            for i, v in enumerate(term.c):
                if v != 0:
                    comps[i][(m, j)] = comps[i].get((m, j), 0) + v / fact
            j += 1
            fact *= j
            p = p * nil_el
    return AlgLogSeries(alg, tuple(LogSeries(cm, Nz, sigma) for cm in comps))


def e_series(A: NilAlgebra, xi: AlgElement, N: int, dps: int | None = None) -> RibenboimSeries:
    """sum_k Z^(k + xi) / Gamma(1 + k + xi)."""
    from .specfun import precision
    dps = precision() if dps is None else dps
    if xi.unit_part() != 0:
        raise NotNilpotent("xi has a unit component")
    idx = xi.nilpotency_index()
    terms = {}
    for k in range(N + 1):
        C = recip_gamma_taylor(1 + k, idx, dps)
        F = [C[j] / math.factorial(j) for j in range(idx + 1)]
        terms[(k, xi)] = nilpotent_series_eval(F, xi)
    return RibenboimSeries(A, terms, N, 1)


def _harmonic(k: int) -> Fraction:
    return sum((Fraction(1, m) for m in range(1, k + 1)), Fraction(0))


def upsilon_series(N: int) -> RibenboimSeries:
    """sum_k (1 - H_k e)/(k!)^2 Z^(2k + e) over C[e]/(e^2); analytifies to U1 + e U2."""
    A = alg_projective(2, "e")
    e = A.basis(1)
    terms = {}
    for k in range(N // 2 + 1):
        c = (A.one() - e * _harmonic(k)) * Fraction(1, math.factorial(k) ** 2)
        terms[(2 * k, e)] = c
    return RibenboimSeries(A, terms, N, 1)


def jp1_series(N: int) -> RibenboimSeries:
    """J-function of the projective line at the origin: sum_k (1 - 2 H_k s)/(k!)^2 Z^(2k + 2s)."""
    A = alg_projective(2, "s")
    s = A.basis(1)
    terms = {}
    for k in range(N // 2 + 1):
        terms[(2 * k, s * 2)] = (A.one() - s * (2 * _harmonic(k))) * Fraction(1, math.factorial(k) ** 2)
    return RibenboimSeries(A, terms, N, 1)


def builtin_series(name: str, N: int) -> RibenboimSeries:
    """Named inputs: ups1/ups2 (both the upsilon series), ek:K, jp1, eP."""
    if name in ("ups1", "ups2"):
        return upsilon_series(N)
    if name == "jp1":
        return jp1_series(N)
    if name == "eP":
        A = alg_blowup_p2()
        return e_series(A, A.basis(BLOWUP_XI), N)
    if name.startswith("ek:"):
        K = int(name[3:])
        A = alg_projective(K + 1, "x")
        return e_series(A, A.basis(1) if K else A.zero(), N)
    raise ValueError(f"unknown series {name!r}")


def formal_pair(ups_index: int, k: int, N: int, w: BorelWeights = BLOWUP_WEIGHTS) -> LogSeries:
    """B[U_i, E_k] through the formal route: (upsilon series) x (E-series in x), transformed and analytified.

    Works over C[e]/(e^2) (x) C[x]/(x^(k+1)); the e^(i-1) x^k component times k!
    is the requested transform.
    """
    P = alg_projective(2, "e")
    Q = alg_projective(k + 1, "x")
    T = alg_tensor(P, Q)
    dimQ = Q.dim
    ups = upsilon_series(2 * N).embed(T, [T.basis(0), T.basis(dimQ)])
    E = e_series(Q, Q.basis(1) if k else Q.zero(), N)
    Ee = E.embed(T, [T.basis(i) for i in range(dimQ)])
    res = analytify(borel_formal([ups, Ee], w))
    idx = (ups_index - 1) * dimQ + k
    return res[idx] * math.factorial(k)


# --- numeric transforms ---------------------------------------------------------


def _terms_needed(rmax: float, growth: int = 2, tol: float = 1e-18) -> int:
    n = 10
    while n < 2000:
        # |w|^(g n) / (n!)^g small relative to exp(g |w|)
        if n > rmax and growth * (n * math.log(max(rmax, 1e-300)) - math.lgamma(n + 1)) < math.log(tol):
            return n
        n += 5
    return n


def ups_evaluator(a0, b0):
    """numpy evaluator of sum_k (a_k + b_k L) w^(2k)/(k!)^2 at log-arguments L."""
    a0, b0 = complex(a0), complex(b0)

    def f(L):
        L = np.asarray(L, dtype=complex)
        w2 = np.exp(2 * L)
        rmax = float(np.max(np.abs(np.exp(L)))) if L.size else 0.0
        K = _terms_needed(rmax)
        out = np.zeros_like(L)
        t = np.ones_like(L)
        H = 0.0
        for k in range(K + 1):
            if k:
                t = t * w2 / (k * k)
                H += 1.0 / k
            out = out + (a0 - b0 * H + b0 * L) * t
        return out

    return f


def exp_evaluator():
    return lambda L: np.exp(np.exp(np.asarray(L, dtype=complex)))


def ek_evaluator(k: int, dps: int = 30):
    """numpy evaluator of E_k(w) = sum_m sum_j C(k,j) C^j_(1+m) w^m L^(k-j)."""
    cache = {}

    def coeffs(M):
        if M not in cache:
            cache[M] = [[float(x) for x in recip_gamma_taylor(1 + m, k, dps)] for m in range(M + 1)]
        return cache[M]

    def f(L):
        L = np.asarray(L, dtype=complex)
        rmax = float(np.max(np.abs(np.exp(L)))) if L.size else 0.0
        M = _terms_needed(rmax, growth=1)
        C = coeffs(M)
        out = np.zeros_like(L)
        w = np.exp(L)
        wm = np.ones_like(L)
        for m in range(M + 1):
            s = np.zeros_like(L)
            for j in range(k + 1):
                s = s + math.comb(k, j) * C[m][j] * L ** (k - j)
            out = out + s * wm
            wm = wm * w
        return out

    return f


def builtin_evaluator(name: str):
    if name == "ups1":
        return ups_evaluator(1, 0)
    if name == "ups2":
        return ups_evaluator(0, 1)
    if name == "exp":
        return exp_evaluator()
    if name.startswith("ek:"):
        return ek_evaluator(int(name[3:]))
    raise ValueError(f"no pointwise evaluator for {name!r}")


def borel_numeric(fs, w: BorelWeights, zlog, c: HankelContour | None = None, tol: float = 1e-10):
    """Hankel quadrature of prod_l f_l(exp(zlog/(a_l b_l) - b_l log lambda)) e^lambda / lambda."""
    fs = list(fs)
    if len(fs) != w.h:
        raise ValueError(f"{len(fs)} evaluators for arity {w.h}")
    zlog = complex(zlog)
    sc = [float(w.scale(l)) for l in range(w.h)]
    be = [float(b) for b in w.beta]

    def integrand(lam):
        ll = np.log(lam)
        out = np.ones_like(lam)
        for f, s, b in zip(fs, sc, be):
            out = out * f(zlog * s - b * ll)
        return out

    return hankel_integral(integrand, c, tol)
