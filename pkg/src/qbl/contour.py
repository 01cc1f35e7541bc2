"""Composite Gauss-Legendre quadrature on Hankel and parabolic contours.

Integrands are callbacks taking a numpy complex array of contour points and
returning an array of values (optionally with trailing dimensions for
vector-valued integrands).  Callbacks must be free of side effects.
Results are returned in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "HankelContour",
    "ParabolicContour",
    "NoConvergence",
    "TailTooFat",
    "hankel_integral",
    "mellin_barnes_integral",
    "gl_nodes",
]

NODES = 32
MAX_LEVELS = 8


class NoConvergence(ArithmeticError):
    pass


class TailTooFat(ArithmeticError):
    pass


_GL = {}


def gl_nodes(n: int = NODES):
    if n not in _GL:
        _GL[n] = np.polynomial.legendre.leggauss(n)
    return _GL[n]


def _default_R(eps: float, r: float) -> float:
    # exp(-R cos eps) < 1e-22
    return max(22 * math.log(10) / math.cos(eps) + 1.0, 4 * r)


@dataclass(frozen=True)
class HankelContour:
    """Incoming ray at arg -(pi-eps), circle |lambda| = r, outgoing ray at arg pi-eps."""

    r: float = 1.0
    eps: float = math.pi / 6
    R: float | None = None
    panels: int = 4

    def __post_init__(self):
        if not 0 < self.eps < math.pi / 2:
            raise ValueError("eps must lie in (0, pi/2)")
        if self.r <= 0:
            raise ValueError("radius must be positive")
        if self.R is None:
            object.__setattr__(self, "R", _default_R(self.eps, self.r))
        if self.R <= self.r:
            raise ValueError("R must exceed r")

    def segments(self):
        """Pieces ``(point(t), dpoint/dt(t), a, b, orientation)``; the incoming ray runs from R to r."""
        th = math.pi - self.eps
        em, ep = np.exp(-1j * th), np.exp(1j * th)
        r, R = self.r, self.R
        return [
            (lambda t: t * em, lambda t: em * np.ones_like(t), r, R, -1),
            (lambda p: r * np.exp(1j * p), lambda p: 1j * r * np.exp(1j * p), -th, th, 1),
            (lambda t: t * ep, lambda t: ep * np.ones_like(t), r, R, 1),
        ]


@dataclass(frozen=True)
class ParabolicContour:
    """s(t) = -rho1 t^2 + rho2 + i t for t in [-T, T], traversed upward."""

    rho1: float = 0.25
    rho2: float = 0.5
    T: float = 8.0
    panels: int = 16

    def __post_init__(self):
        if self.rho1 <= 0 or self.rho2 <= 0:
            raise ValueError("rho1 and rho2 must be positive")

    def point(self, t):
        return -self.rho1 * t * t + self.rho2 + 1j * t

    def dpoint(self, t):
        return -2 * self.rho1 * t + 1j


def _panel_sum(g, point, dpoint, a, b, panels):
    x, w = gl_nodes()
    edges = np.linspace(a, b, panels + 1)
    mids = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    t = (mids[:, None] + half[:, None] * x[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    lam = point(t)
    vals = np.asarray(g(lam))
    jac = dpoint(t) * ww
    return np.tensordot(jac, vals, axes=(0, 0))


def _close(a, b, tol):
    diff = np.max(np.abs(np.asarray(a) - np.asarray(b)))
    scale = max(1.0, float(np.max(np.abs(np.asarray(b)))))
    return diff <= tol * scale, diff


def _as_result(v):
    v = np.asarray(v)
    if v.ndim == 0:
        return complex(v)
    return v.astype(complex)


def hankel_integral(f, c: HankelContour | None = None, tol: float = 1e-10, auto_R: bool = True):
    """(1/2 pi i) * integral over the Hankel contour of f(lambda) e^lambda dlambda / lambda.

    Panels are doubled until two successive values agree to ``tol`` (relative
    to max(1, |value|)).  The ray tail beyond ``R`` is estimated from the
    integrand at ``R`` and compared with the same scale; with ``auto_R`` the
    radius is enlarged (by 1.5x, at most 6 times) before giving up with
    :class:`TailTooFat`.
    """
    c = c or HankelContour()

    def g(lam):
        v = np.asarray(f(lam))
        wgt = np.exp(lam) / lam
        return v * wgt.reshape(wgt.shape + (1,) * (v.ndim - 1))

    for _ in range(7):
        val = _hankel_panels(g, c, tol)
        th = math.pi - c.eps
        edge = np.array([c.R * np.exp(1j * th), c.R * np.exp(-1j * th)])
        tail = np.max(np.abs(g(edge)), axis=0) * c.R / math.cos(c.eps) / (2 * math.pi)
        excess = np.max(tail / np.maximum(1.0, np.abs(val)))
        if excess <= tol * 1e-2:
            return _as_result(val)
        if not auto_R:
            break
        c = replace(c, R=c.R * 1.5)
    raise TailTooFat(f"ray tail estimate {excess:.3g} (relative) at R={c.R:.4g}")


def _hankel_panels(g, c, tol):
    prev = None
    panels = c.panels
    for _ in range(MAX_LEVELS):
        total = 0
        for point, dpoint, a, b, sign in c.segments():
            total = total + sign * _panel_sum(g, point, dpoint, a, b, panels)
        val = total / (2j * math.pi)
        if prev is not None and _close(val, prev, tol)[0]:
            return val
        prev = val
        panels *= 2
    raise NoConvergence("Hankel quadrature did not settle under panel doubling")


def mellin_barnes_integral(f, c: ParabolicContour | None = None, tol: float = 1e-10, tail_test: bool = True):
    """(1/2 pi i) * integral of f(s) ds along the upward parabola.

    With ``tail_test`` the value is recomputed with ``T`` doubled and
    :class:`TailTooFat` is raised when the two disagree beyond ``tol``.
    """
    c = c or ParabolicContour()

    def run(cc):
        prev = None
        panels = cc.panels
        for _ in range(MAX_LEVELS):
            val = _panel_sum(f, cc.point, cc.dpoint, -cc.T, cc.T, panels) / (2j * math.pi)
            if prev is not None and _close(val, prev, tol)[0]:
                return val
            prev = val
            panels *= 2
        raise NoConvergence("Mellin-Barnes quadrature did not settle under panel doubling")

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        val = run(c)
        if tail_test:
            big = run(replace(c, T=2 * c.T, panels=2 * c.panels))
            ok, diff = _close(big, val, tol)
            if not ok or not np.all(np.isfinite(big)):
                raise TailTooFat(f"doubling T changed the value by {diff:.3g}")
            val = big
    return _as_result(val)
