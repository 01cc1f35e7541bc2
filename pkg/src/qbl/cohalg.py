"""Finite-dimensional graded commutative algebras given by structure constants.

Used for the classical cohomology rings that appear as coefficient rings of
formal series: truncated polynomial rings C[s]/(s^n), their tensor products,
and the ring of the one-point blow-up of the plane.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

__all__ = [
    "NilAlgebra",
    "AlgElement",
    "InvalidDimension",
    "NotNilpotent",
    "AlgebraMismatch",
    "alg_point",
    "alg_projective",
    "alg_tensor",
    "alg_blowup_p2",
    "BLOWUP_XI",
    "BLOWUP_RHO",
    "nilpotent_series_eval",
    "taylor_eval",
    "integrate_top",
]

# In the blow-up ring the hyperplane class of the bundle is T1 and the pulled
# back point class of the base line is T2: the relation xi^2 = rho*xi matches
# T1^2 = T1*T2.
BLOWUP_XI = 1
BLOWUP_RHO = 2


class InvalidDimension(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class AlgebraMismatch(ValueError):
    pass


def _is_zero(x) -> bool:
    return x == 0


class NilAlgebra:
    """Commutative algebra with basis ``labels`` and products ``mult[a][b]`` (coefficient tuples)."""

    def __init__(self, labels, grading, mult, unit: int = 0, top: int | None = None, name: str = ""):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.grading = tuple(grading)
        self.mult = tuple(tuple(tuple(Fraction(c) for c in v) for v in row) for row in mult)
        self.unit = unit
        self.top = self.dim - 1 if top is None else top
        self.name = name
        if len(self.grading) != self.dim or len(self.mult) != self.dim:
            raise InvalidDimension("inconsistent algebra data")

    def __repr__(self):
        return f"NilAlgebra({self.name or self.labels})"

    def __eq__(self, other):
        return isinstance(other, NilAlgebra) and (self.labels, self.mult) == (other.labels, other.mult)

    def __hash__(self):
        return hash((self.labels, self.mult))

    def basis(self, i: int) -> "AlgElement":
        return AlgElement(self, [1 if j == i else 0 for j in range(self.dim)])

    def one(self) -> "AlgElement":
        return self.basis(self.unit)

    def zero(self) -> "AlgElement":
        return AlgElement(self, [0] * self.dim)

    def scalar(self, c) -> "AlgElement":
        return AlgElement(self, [c if j == self.unit else 0 for j in range(self.dim)])

    def element(self, coeffs) -> "AlgElement":
        return AlgElement(self, coeffs)

    # --- checks -----------------------------------------------------------

    def check_commutative(self) -> bool:
        return all(self.mult[a][b] == self.mult[b][a] for a in range(self.dim) for b in range(self.dim))

    def check_associative(self) -> bool:
        B = [self.basis(i) for i in range(self.dim)]
        return all((x * y) * w == x * (y * w) for x, y, w in product(B, repeat=3))

    def check_unit(self) -> bool:
        one = self.one()
        return all(one * self.basis(i) == self.basis(i) for i in range(self.dim))

    def check_nilpotent(self) -> bool:
        for i in range(self.dim):
            if self.grading[i] > 0 and not (self.basis(i) ** self.dim).is_zero():
                return False
        return True

    def to_json(self) -> str:
        triples = []
        for a in range(self.dim):
            for b in range(a, self.dim):
                for g, c in enumerate(self.mult[a][b]):
                    if c != 0:
                        triples.append([a, b, g, str(c)])
        return json.dumps({
            "name": self.name,
            "labels": list(self.labels),
            "grading": list(self.grading),
            "unit": self.unit,
            "top": self.top,
            "structure_constants": triples,
        })

    @classmethod
    def from_json(cls, s: str) -> "NilAlgebra":
        d = json.loads(s)
        n = len(d["labels"])
        mult = [[[0] * n for _ in range(n)] for _ in range(n)]
        for a, b, g, c in d["structure_constants"]:
            mult[a][b][g] = Fraction(c)
            mult[b][a][g] = Fraction(c)
        return cls(d["labels"], d["grading"], mult, d["unit"], d["top"], d.get("name", ""))


class AlgElement:
    """Element of a :class:`NilAlgebra`, stored as a coefficient vector."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: NilAlgebra, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != alg.dim:
            raise InvalidDimension(f"expected {alg.dim} coefficients, got {len(coeffs)}")
        self.alg = alg
        self.c = tuple(Fraction(x) if isinstance(x, int) else x for x in coeffs)

    def _same(self, other):
        if not isinstance(other, AlgElement):
            return self.alg.scalar(other)
        if other.alg is not self.alg and other.alg != self.alg:
            raise AlgebraMismatch("elements of different algebras")
        return other

    def __getitem__(self, i):
        return self.c[i]

    def __iter__(self):
        return iter(self.c)

    def __add__(self, other):
        o = self._same(other)
        return AlgElement(self.alg, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return AlgElement(self.alg, [-a for a in self.c])

    def __sub__(self, other):
        o = self._same(other)
        return AlgElement(self.alg, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if not isinstance(other, AlgElement):
            return AlgElement(self.alg, [a * other for a in self.c])
        o = self._same(other)
        out = [0] * self.alg.dim
        mult = self.alg.mult
        for a, x in enumerate(self.c):
            if _is_zero(x):
                continue
            for b, y in enumerate(o.c):
                if _is_zero(y):
                    continue
                xy = x * y
                for g, s in enumerate(mult[a][b]):
                    if s:
                        out[g] = out[g] + s * xy
        return AlgElement(self.alg, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, AlgElement):
            return self * other.inverse()
        return AlgElement(self.alg, [a / other for a in self.c])

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.alg.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            other = self.alg.scalar(other)
        return self.alg == other.alg and all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(self.c)

    def is_zero(self) -> bool:
        return all(_is_zero(a) for a in self.c)

    def unit_part(self):
        return self.c[self.alg.unit]

    def nil_part(self) -> "AlgElement":
        return AlgElement(self.alg, [0 if i == self.alg.unit else a for i, a in enumerate(self.c)])

    def is_nilpotent(self) -> bool:
        return _is_zero(self.unit_part()) and (self ** self.alg.dim).is_zero()

    def nilpotency_index(self) -> int:
        """Smallest ``m`` with ``self**m == 0``."""
        if not _is_zero(self.unit_part()):
            raise NotNilpotent("element has a unit component")
        p = self.alg.one()
        for m in range(1, self.alg.dim + 2):
            p = p * self
            if p.is_zero():
                return m
        raise NotNilpotent("element is not nilpotent")

    def inverse(self) -> "AlgElement":
        c = self.unit_part()
        if _is_zero(c):
            raise ZeroDivisionError("element with zero unit part is not invertible")
        n = self.nil_part() / c
        out = self.alg.one()
        term = self.alg.one()
        for _ in range(self.alg.dim):
            term = -(term * n)
            if term.is_zero():
                break
            out = out + term
        return out / c

    def map(self, f) -> "AlgElement":
        return AlgElement(self.alg, [f(a) for a in self.c])

    def __repr__(self):
        terms = [f"{a}*{self.alg.labels[i]}" for i, a in enumerate(self.c) if not _is_zero(a)]
        return "AlgElement(" + (" + ".join(terms) or "0") + ")"


def alg_projective(n: int, label: str = "s") -> NilAlgebra:
    """C[s]/(s^n), the cohomology ring of projective (n-1)-space."""
    if n < 1:
        raise InvalidDimension("projective algebra needs n >= 1")
    mult = [[[1 if g == a + b else 0 for g in range(n)] for b in range(n)] for a in range(n)]
    labels = ["1"] + [label if i == 1 else f"{label}^{i}" for i in range(1, n)]
    return NilAlgebra(labels, [2 * i for i in range(n)], mult, 0, n - 1, name=f"P{n - 1}")


def alg_point() -> NilAlgebra:
    return alg_projective(1)


def alg_tensor(A: NilAlgebra, B: NilAlgebra) -> NilAlgebra:
    """Graded tensor product with basis index ``a*dim(B) + b``."""
    if A.dim == 1:
        return B
    if B.dim == 1:
        return A
    n = A.dim * B.dim
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    for a1, b1, a2, b2 in product(range(A.dim), range(B.dim), range(A.dim), range(B.dim)):
        i, j = a1 * B.dim + b1, a2 * B.dim + b2
        for g1, x in enumerate(A.mult[a1][a2]):
            if not x:
                continue
            for g2, y in enumerate(B.mult[b1][b2]):
                if y:
                    mult[i][j][g1 * B.dim + g2] += x * y
    labels = [f"{la}⊗{lb}" for la in A.labels for lb in B.labels]
    grading = [ga + gb for ga in A.grading for gb in B.grading]
    return NilAlgebra(labels, grading, mult, A.unit * B.dim + B.unit, A.top * B.dim + B.top,
                      name=f"{A.name}x{B.name}")


def alg_blowup_p2() -> NilAlgebra:
    """Cohomology of the plane blown up at a point: C[T1,T2]/(T2^2, T1^2 - T1 T2), T3 = T1 T2."""
    table = {(1, 1): 3, (1, 2): 3}
    mult = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for a in range(4):
        mult[0][a][a] = mult[a][0][a] = 1
    for (a, b), g in table.items():
        mult[a][b][g] = mult[b][a][g] = 1
    return NilAlgebra(["T0", "T1", "T2", "T3"], [0, 2, 2, 4], mult, 0, 3, name="Bl1P2")


def nilpotent_series_eval(F, alpha: AlgElement) -> AlgElement:
    """Finite sum ``sum_k F[k] alpha^k`` for nilpotent ``alpha``."""
    if not _is_zero(alpha.unit_part()):
        raise NotNilpotent("argument has a nonzero unit component")
    F = list(F)
    out = alpha.alg.zero()
    p = alpha.alg.one()
    for k, a in enumerate(F):
        if p.is_zero():
            return out
        if not _is_zero(a):
            out = out + p * a
        p = p * alpha
    if not p.is_zero():
        raise ValueError(f"series of length {len(F)} is shorter than the nilpotency index")
    return out


def taylor_eval(derivs, alpha: AlgElement) -> AlgElement:
    """Evaluate ``f(c + n)`` from derivatives ``f^(k)(c)`` where ``c`` is the unit part of ``alpha``.

    ``derivs`` is a callable ``k -> f^(k)(c)``.
    """
    n = alpha.nil_part()
    out = alpha.alg.zero()
    p = alpha.alg.one()
    fact = 1
    for k in range(alpha.alg.dim + 1):
        if p.is_zero():
            break
        if k:
            fact *= k
        out = out + p * (derivs(k) / fact)
        p = p * n
    return out


def integrate_top(v: AlgElement):
    """Coefficient of the top-degree class."""
    return v.c[v.alg.top]
