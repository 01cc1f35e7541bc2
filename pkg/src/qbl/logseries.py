"""Truncated log-Laurent series ``sum c[m, j] z^(sigma+m) (log z)^j`` and
scalar differential operators in ``theta = z d/dz``.

Coefficients are either exact (``Fraction`` / ``GaussRational``) or
high-precision floats (mpmath).  The two kinds never mix silently; use
:func:`ls_promote` to move an exact series to the float kind.

Every series carries ``ord_valid``: coefficients of ``z^(sigma+m)`` with
``m <= ord_valid`` are trusted, anything beyond is not stored.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from fractions import Fraction

import mpmath as mp

from .exactlin import GaussRational, Poly

__all__ = [
    "LogSeries",
    "ThetaOperator",
    "KindMismatch",
    "TruncationWarning",
    "ls_mul",
    "ls_theta",
    "ls_eval",
    "ls_promote",
    "op_apply",
]

EXACT = "exact"
FLOAT = "float"


class KindMismatch(TypeError):
    """Exact and float series combined without explicit promotion."""


class TruncationWarning(UserWarning):
    pass


def _kind_of(c) -> str:
    if isinstance(c, (int, Fraction, GaussRational)):
        return EXACT
    return FLOAT


def _to_float(c):
    if isinstance(c, GaussRational):
        return mp.mpc(mp.mpf(c.re.numerator) / c.re.denominator, mp.mpf(c.im.numerator) / c.im.denominator)
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    if isinstance(c, complex):
        return mp.mpc(c)
    return mp.mpmathify(c)


def _nonzero(c) -> bool:
    return c != 0


class LogSeries:
    """Immutable truncated series in ``z^(sigma+m) (log z)^j``."""

    __slots__ = ("sigma", "N", "J", "coeffs", "kind", "ord_valid")

    def __init__(self, coeffs=None, N: int = 0, sigma=0, kind: str | None = None, ord_valid: int | None = None):
        coeffs = dict(coeffs or {})
        ov = N if ord_valid is None else min(ord_valid, N)
        clean = {}
        kinds = set()
        for (m, j), c in coeffs.items():
            if m < 0 or j < 0:
                raise ValueError(f"negative index ({m}, {j})")
            if m > ov or not _nonzero(c):
                continue
            if isinstance(c, int):
                c = Fraction(c)
            kinds.add(_kind_of(c))
            clean[(m, j)] = c
        if kind is None:
            kind = FLOAT if FLOAT in kinds else EXACT
        elif kind == EXACT and FLOAT in kinds:
            raise KindMismatch("float coefficient in an exact series")
        elif kind == FLOAT:
            clean = {k: _to_float(v) for k, v in clean.items()}
        self.coeffs = clean
        self.kind = kind
        self.N = N
        self.ord_valid = ov
        self.sigma = sigma
        self.J = max((j for _, j in clean), default=0)

    # --- construction helpers ---------------------------------------------

    @classmethod
    def zero(cls, N: int, sigma=0, kind: str = EXACT):
        return cls({}, N, sigma, kind)

    @classmethod
    def constant(cls, c, N: int, kind: str | None = None):
        return cls({(0, 0): c}, N, 0, kind)

    @classmethod
    def log(cls, N: int, power: int = 1):
        return cls({(0, power): Fraction(1)}, N)

    @classmethod
    def from_poly(cls, p: Poly, N: int):
        return cls({(m, 0): c for m, c in enumerate(p.c)}, N)

    def __getitem__(self, mj):
        return self.coeffs.get(mj, Fraction(0) if self.kind == EXACT else mp.mpf(0))

    def valuation(self) -> int:
        """Lowest stored order; ``ord_valid + 1`` for a (trusted) zero series."""
        return min((m for m, _ in self.coeffs), default=self.ord_valid + 1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def log_component(self, j: int) -> dict:
        """``{m: c[m, j]}``."""
        return {m: c for (m, jj), c in self.coeffs.items() if jj == j}

    def truncate(self, n: int) -> "LogSeries":
        return LogSeries(self.coeffs, min(self.N, n), self.sigma, self.kind, min(self.ord_valid, n))

    def shift(self, k: int) -> "LogSeries":
        """Multiply by ``z^k`` (``k`` may be negative as long as no index drops below 0)."""
        return LogSeries({(m + k, j): c for (m, j), c in self.coeffs.items()}, self.N + k, self.sigma,
                         self.kind, self.ord_valid + k)

    def map(self, f) -> "LogSeries":
        return LogSeries({k: f(c) for k, c in self.coeffs.items()}, self.N, self.sigma, None, self.ord_valid)

    # --- arithmetic -------------------------------------------------------

    def _check(self, other: "LogSeries"):
        if self.kind != other.kind:
            raise KindMismatch(f"{self.kind} vs {other.kind} series; promote explicitly")
        if self.sigma != other.sigma:
            raise ValueError("series with different exponent offsets")

    def __add__(self, other):
        if not isinstance(other, LogSeries):
            other = LogSeries.constant(other, self.ord_valid, self.kind)
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        n = min(self.ord_valid, other.ord_valid)
        return LogSeries(out, n, self.sigma, self.kind)

    __radd__ = __add__

    def __neg__(self):
        return LogSeries({k: -c for k, c in self.coeffs.items()}, self.N, self.sigma, self.kind, self.ord_valid)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LogSeries):
            return ls_mul(self, other)
        if self.kind == EXACT and _kind_of(other) == FLOAT:
            raise KindMismatch("float scalar times exact series; promote explicitly")
        return LogSeries({k: c * other for k, c in self.coeffs.items()}, self.N, self.sigma, self.kind,
                         self.ord_valid)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return (self.kind, self.sigma, self.ord_valid, self.coeffs) == (
            other.kind, other.sigma, other.ord_valid, other.coeffs)

    def __hash__(self):
        return hash((self.kind, self.ord_valid, frozenset(self.coeffs.items())))

    def max_abs(self, upto: int | None = None):
        """Largest coefficient magnitude among trusted orders ``m <= upto``."""
        upto = self.ord_valid if upto is None else upto
        vals = [abs(_to_float(c)) for (m, _), c in self.coeffs.items() if m <= upto]
        return max(vals, default=mp.mpf(0))

    def __repr__(self):
        return f"LogSeries(kind={self.kind}, sigma={self.sigma}, N={self.N}, J={self.J}, " \
               f"ord_valid={self.ord_valid}, terms={len(self.coeffs)})"

    # --- export -----------------------------------------------------------

    def records(self):
        out = []
        for (m, j) in sorted(self.coeffs):
            c = _to_float(self.coeffs[(m, j)])
            out.append({"m": m, "j": j, "re": mp.nstr(mp.re(c), mp.mp.dps), "im": mp.nstr(mp.im(c), mp.mp.dps)})
        return out

    def to_json(self) -> str:
        return json.dumps({
            "sigma": str(self.sigma), "N": self.N, "J": self.J, "ord_valid": self.ord_valid,
            "kind": self.kind, "coefficients": self.records(),
        })

    @classmethod
    def from_json(cls, s: str) -> "LogSeries":
        d = json.loads(s)
        coeffs = {(r["m"], r["j"]): mp.mpc(r["re"], r["im"]) for r in d["coefficients"]}
        sig = d["sigma"]
        try:
            sig = Fraction(sig)
        except ValueError:
            sig = mp.mpc(complex(sig))
        return cls(coeffs, d["N"], sig, FLOAT, d["ord_valid"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["m", "j", "re", "im"])
        for (m, j) in sorted(self.coeffs):
            c = complex(_to_float(self.coeffs[(m, j)]))
            w.writerow([m, j, f"{c.real:.17g}", f"{c.imag:.17g}"])
        return buf.getvalue()


def ls_promote(a: LogSeries) -> LogSeries:
    """Exact series to float series at the current mpmath precision."""
    if a.kind == FLOAT:
        return a
    return LogSeries(a.coeffs, a.N, a.sigma, FLOAT, a.ord_valid)


def ls_mul(a: LogSeries, b: LogSeries) -> LogSeries:
    """Product; trusted through ``min(ov_a + val_b, ov_b + val_a)``."""
    if a.kind != b.kind:
        raise KindMismatch(f"{a.kind} vs {b.kind} series; promote explicitly")
    ov = min(a.ord_valid + b.valuation(), b.ord_valid + a.valuation())
    out = {}
    for (m1, j1), c1 in a.coeffs.items():
        for (m2, j2), c2 in b.coeffs.items():
            m = m1 + m2
            if m > ov:
                continue
            k = (m, j1 + j2)
            out[k] = out[k] + c1 * c2 if k in out else c1 * c2
    return LogSeries(out, ov, a.sigma + b.sigma, a.kind)


def ls_theta(a: LogSeries) -> LogSeries:
    """Apply ``z d/dz`` termwise."""
    out = {}
    for (m, j), c in a.coeffs.items():
        e = a.sigma + m
        if e != 0:
            out[(m, j)] = out.get((m, j), 0) + e * c
        if j:
            out[(m, j - 1)] = out.get((m, j - 1), 0) + j * c
    return LogSeries(out, a.N, a.sigma, a.kind, a.ord_valid)


def ls_eval(a: LogSeries, zlog, tol=None):
    """Sum the series at ``z = exp(zlog)``.

    Warns with :class:`TruncationWarning` if the contribution of the last
    trusted order exceeds ``tol`` (relative to the value).
    """
    zlog = mp.mpmathify(zlog)
    total = mp.mpf(0)
    last = mp.mpf(0)
    top = max((m for m, _ in a.coeffs), default=0)
    sig = _to_float(a.sigma)
    for (m, j), c in a.coeffs.items():
        t = _to_float(c) * mp.exp((sig + m) * zlog) * zlog ** j
        total += t
        if m == top:
            last += t
    if tol is not None and abs(last) > tol * max(1, abs(total)):
        warnings.warn(f"last included order contributes {mp.nstr(abs(last), 3)}", TruncationWarning,
                      stacklevel=2)
    return total


class ThetaOperator:
    """``sum_i p_i(z) theta^i`` with polynomial coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [p if isinstance(p, Poly) else Poly(p) for p in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def normalized(self) -> "ThetaOperator":
        """Coprime integer coefficients, leading polynomial with positive top coefficient."""
        if not self.coeffs:
            return self
        from math import gcd
        from functools import reduce
        dens = [a.denominator for p in self.coeffs for a in p.c]
        lcm = reduce(lambda x, y: x * y // gcd(x, y), dens, 1)
        ints = [p * lcm for p in self.coeffs]
        g = reduce(gcd, (a.numerator for p in ints for a in p.c), 0)
        out = [p * Fraction(1, g) for p in ints]
        if out[-1].lead() < 0:
            out = [-p for p in out]
        return ThetaOperator(out)

    def degree(self) -> int:
        return max(p.degree for p in self.coeffs)

    def low_power(self) -> int:
        """Lowest power of ``z`` appearing in any coefficient."""
        return min((p.valuation() for p in self.coeffs if not p.is_zero()), default=0)

    def __eq__(self, other):
        return isinstance(other, ThetaOperator) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_strings(self):
        return [p.to_str() for p in self.coeffs]

    def __str__(self):
        parts = []
        for i in range(self.order, -1, -1):
            p = self.coeffs[i]
            if p.is_zero():
                continue
            t = "" if i == 0 else ("θ" if i == 1 else f"θ^{i}")
            parts.append(f"({p.to_str()}){t}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"ThetaOperator({self})"


def op_apply(L: ThetaOperator, a: LogSeries) -> LogSeries:
    """``sum_i p_i(z) theta^i a``.

    Order ``m`` of the result only involves orders ``m - d`` of ``a`` where
    ``d`` runs over powers present in the ``p_i``; so the result is trusted
    through ``ord_valid(a) + low_power(L)``.
    """
    ov = a.ord_valid + L.low_power()
    out = {}
    t = a
    for i, p in enumerate(L.coeffs):
        if i:
            t = ls_theta(t)
        for d, pd in enumerate(p.c):
            if pd == 0:
                continue
            if a.kind == FLOAT:
                pd = _to_float(pd)
            for (m, j), c in t.coeffs.items():
                mm = m + d
                if mm > ov:
                    continue
                out[(mm, j)] = out.get((mm, j), 0) + pd * c
    return LogSeries(out, ov, a.sigma, a.kind)
