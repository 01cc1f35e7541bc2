"""Exact arithmetic kernel: rationals, Gaussian rationals, polynomials and
rational functions in ``z``, and matrices of rational functions.

Rationals are plain :class:`fractions.Fraction`.  Everything here is
immutable; matrix inversion and determinants use fraction-free (Bareiss)
elimination on polynomial matrices so that no intermediate rational-function
gcds are needed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
import re

__all__ = [
    "GaussRational",
    "Poly",
    "RatFun",
    "RatFunMatrix",
    "SingularMatrix",
    "poly_normalize",
    "ratfun_mat_inverse",
    "ratfun_det",
]


class SingularMatrix(ArithmeticError):
    """Raised when a matrix of rational functions has identically zero determinant."""


class GaussRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return (GaussRational(1) / self) ** (-k)
        out = GaussRational(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}*I)"


def _exact(c):
    if isinstance(c, GaussRational):
        return c.re if c.im == 0 else c
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


def poly_normalize(coeffs) -> tuple:
    """Strip trailing zero coefficients.  Content is left alone."""
    cs = [_exact(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Poly:
    """Univariate polynomial in ``z`` with exact coefficients, ascending degree."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        self.c = poly_normalize(coeffs)

    @classmethod
    def const(cls, a):
        return cls([a])

    @classmethod
    def z(cls, k: int = 1):
        return cls([0] * k + [1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # zero polynomial -> -1

    def is_zero(self) -> bool:
        return not self.c

    def valuation(self) -> int:
        """Lowest power of ``z`` carrying a nonzero coefficient (-1 for zero)."""
        for i, a in enumerate(self.c):
            if a != 0:
                return i
        return -1

    def lead(self):
        return self.c[-1] if self.c else Fraction(0)

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        n = max(len(self.c), len(other.c))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = _exact(other)
            return Poly([a * other for a in self.c])
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q = [Fraction(0)] * max(len(rem) - len(other.c) + 1, 0)
        lead = other.lead()
        dl = other.degree
        for i in range(len(rem) - 1, dl - 1, -1):
            if rem[i] == 0:
                continue
            f = rem[i] / lead
            q[i - dl] = f
            for j, b in enumerate(other.c):
                rem[i - dl + j] = rem[i - dl + j] - f * b
        return Poly(q), Poly(rem[:dl] if dl > 0 else [])

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if any(isinstance(a, GaussRational) for a in self.c):
            raise TypeError("content is defined for rational polynomials only")
        if not self.c:
            return Fraction(0)
        nums = reduce(gcd, (a.numerator for a in self.c))
        dens = reduce(lambda x, y: x * y // gcd(x, y), (a.denominator for a in self.c))
        return Fraction(abs(nums), dens)

    def primitive(self) -> "Poly":
        """Integer polynomial with coprime coefficients and positive leading term."""
        if self.is_zero():
            return self
        p = self * (1 / self.content())
        return -p if p.lead() < 0 else p

    def deriv(self) -> "Poly":
        return Poly([i * a for i, a in enumerate(self.c)][1:])

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def to_str(self, var: str = "z") -> str:
        if not self.c:
            return "0"
        out = ""
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a == 0:
                continue
            if isinstance(a, Fraction):
                sign, mag = ("-" if a < 0 else "+"), abs(a)
                s = str(mag) if mag.denominator == 1 else f"({mag})"
            else:
                sign, s = "+", str(a)
            term = s if k == 0 else f"{s}*{var}" + (f"^{k}" if k > 1 else "")
            out += sign + term
        return out[1:] if out[0] == "+" else out

    def __repr__(self):
        return f"Poly({self.to_str()})"


_TERM = re.compile(r"([+-]?)\s*(?:\(?(-?\d+(?:/\d+)?)\)?)?\s*\*?\s*(z(?:\^(\d+))?)?")


def _poly_from_str(s: str) -> Poly:
    s = s.replace(" ", "")
    if s in ("", "0"):
        return Poly()
    out = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {s!r}")
        sign, coef, mon, power = m.groups()
        c = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if mon is None else (int(power) if power else 1)
        out[k] = out.get(k, 0) + c
        pos = m.end()
    deg = max(out)
    return Poly([out.get(i, 0) for i in range(deg + 1)])


def _unwrap(s: str) -> str:
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        for i, ch in enumerate(s):
            depth += (ch == "(") - (ch == ")")
            if depth == 0 and i < len(s) - 1:
                return s
        s = s[1:-1]
    return s


class RatFun:
    """Rational function ``num/den`` normalized to coprime form with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lead = den.lead()
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    @classmethod
    def z(cls, k: int = 1):
        return cls(Poly.z(k)) if k >= 0 else cls(Poly.const(1), Poly.z(-k))

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.degree == 0

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(other)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(other)
        return self + (-other)

    def __rsub__(self, other):
        return RatFun(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFun(1) / (self ** (-k))
        return RatFun(self.num ** k, self.den ** k)

    def deriv(self) -> "RatFun":
        return RatFun(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def to_str(self) -> str:
        """Serialize as ``"(num)/(den)"`` with sparse ``c*z^k`` sums."""
        return f"({self.num.to_str()})/({self.den.to_str()})"

    @classmethod
    def from_str(cls, s: str) -> "RatFun":
        s = s.replace(" ", "")
        depth = 0
        for i, ch in enumerate(s):
            depth += (ch == "(") - (ch == ")")
            if ch == "/" and depth == 0:
                return cls(_poly_from_str(_unwrap(s[:i])), _poly_from_str(_unwrap(s[i + 1:])))
        return cls(_poly_from_str(_unwrap(s)))

    def __repr__(self):
        return f"RatFun({self.to_str()})"


class RatFunMatrix:
    """Dense matrix of :class:`RatFun` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        ent = tuple(tuple(e if isinstance(e, RatFun) else RatFun(e) for e in row) for row in entries)
        if not ent or any(len(r) != len(ent[0]) for r in ent):
            raise ValueError("ragged or empty matrix")
        self.entries = ent
        self.rows = len(ent)
        self.cols = len(ent[0])

    @classmethod
    def identity(cls, n: int):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns):
        n = len(columns[0])
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def __eq__(self, other):
        return isinstance(other, RatFunMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        return RatFunMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return RatFunMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return RatFunMatrix([[-a for a in r] for r in self.entries])

    def scale(self, c) -> "RatFunMatrix":
        return RatFunMatrix([[a * c for a in r] for r in self.entries])

    def __matmul__(self, other):
        if isinstance(other, RatFunMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = RatFun(0)
                    for k in range(self.cols):
                        a = self.entries[i][k]
                        if a.is_zero():
                            continue
                        b = other.entries[k][j]
                        if not b.is_zero():
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return RatFunMatrix(out)
        # column vector given as a list
        return [sum((self.entries[i][k] * other[k] for k in range(self.cols)), RatFun(0)) for i in range(self.rows)]

    def T(self) -> "RatFunMatrix":
        return RatFunMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def deriv(self) -> "RatFunMatrix":
        return RatFunMatrix([[a.deriv() for a in r] for r in self.entries])

    def __call__(self, x):
        return [[a(x) for a in r] for r in self.entries]

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.rows) for j in range(self.cols) if i != j)

    def to_strings(self):
        return [[a.to_str() for a in r] for r in self.entries]

    def __repr__(self):
        return "RatFunMatrix(" + repr(self.to_strings()) + ")"

    # --- fraction-free elimination ----------------------------------------

    def _poly_rows(self):
        """Rows scaled to polynomials: returns (P, dens) with self = diag(dens)^-1 P."""
        P, dens = [], []
        for row in self.entries:
            d = reduce(lambda a, b: (a * b).exact_div(a.gcd(b)), (e.den for e in row), Poly.const(1))
            P.append([e.num * d.exact_div(e.den) for e in row])
            dens.append(d)
        return P, dens


def _bareiss_gauss_jordan(A, ncols_left):
    """In-place fraction-free Gauss-Jordan on a list-of-lists polynomial matrix.

    Returns (det_sign, final_pivot).  After completion the left block is
    ``final_pivot * I`` (up to the recorded row swaps) and any augmented
    columns hold ``final_pivot * inverse``.
    """
    n = len(A)
    prev = Poly.const(1)
    sign = 1
    for k in range(ncols_left):
        p = next((i for i in range(k, n) if not A[i][k].is_zero()), None)
        if p is None:
            raise SingularMatrix("determinant is identically zero")
        if p != k:
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(n):
            if i == k:
                continue
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(len(row_i)):
                if j == k:
                    continue
                row_i[j] = (akk * row_i[j] - aik * row_k[j]).exact_div(prev)
            row_i[k] = Poly()
        prev = akk
    return sign, prev


def ratfun_det(M: RatFunMatrix) -> RatFun:
    """Exact determinant by Bareiss elimination on the polynomial-scaled rows."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    P, dens = M._poly_rows()
    A = [list(r) for r in P]
    try:
        sign, piv = _bareiss_gauss_jordan(A, M.cols)
    except SingularMatrix:
        return RatFun(0)
    den = reduce(lambda a, b: a * b, dens, Poly.const(1))
    return RatFun(piv * sign, den)


def ratfun_mat_inverse(M: RatFunMatrix) -> RatFunMatrix:
    """Exact inverse via fraction-free Gauss-Jordan on ``[P | I]``.

    Raises :class:`SingularMatrix` when ``det M`` vanishes identically.
    """
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    n = M.rows
    P, dens = M._poly_rows()
    A = [list(P[i]) + [Poly.const(1) if i == j else Poly() for j in range(n)] for i in range(n)]
    _, piv = _bareiss_gauss_jordan(A, n)
    # M = D^-1 P  =>  M^-1 = P^-1 D, and the right block is piv * P^-1
    return RatFunMatrix(
        [[RatFun(A[i][n + j] * dens[j], piv) for j in range(n)] for i in range(n)]
    )
