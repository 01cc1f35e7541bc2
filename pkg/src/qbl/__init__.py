"""Quantum differential equations of P^1-bundles: exact reduction, Borel multitransforms
and the special functions they need.

Submodules
----------
exactlin   polynomial and rational-function matrices over Q(i)
cohalg     finite nilpotent cohomology algebras
specfun    reciprocal-gamma derivatives, E_k functions, Meijer-type kernels
logseries  truncated log-Laurent series and theta operators
contour    Hankel and parabolic Mellin-Barnes quadrature
borel      formal and numerical Borel multitransforms
qde        cyclic frames, master equations and solution bases
acceptance end-to-end criteria
"""

__version__ = "0.1.0"

from . import borel, cohalg, contour, exactlin, logseries, qde, specfun  # noqa: F401
