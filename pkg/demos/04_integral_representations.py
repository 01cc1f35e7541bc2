"""
Mellin-Barnes and Hankel representations
========================================

Master functions of P^1 as Mellin-Barnes integrals, and the iterated
Mellin-Barnes x Hankel integrals for the blown-up plane, fitted against the
series bases.
"""

import cmath

import numpy as np

from qbl import qde
from qbl.logseries import ls_eval


def values(members, zs):
    return [[complex(ls_eval(s, cmath.log(z))) for s in members] for z in zs]


p1 = [qde.p1_basis(1, 0, 20), qde.p1_basis(0, 1, 20)]
fit, check = (0.3, 0.5), (0.4,)
for j in (0, 1):
    vf = [qde.mb_master_pn(2, j, cmath.log(z)) for z in fit]
    vc = [qde.mb_master_pn(2, j, cmath.log(z)) for z in check]
    r = qde.span_fit(vf, values(p1, fit), vc, values(p1, check))
    print(f"g^{j} = {np.round(r['coefficients'], 8)} . (U1, U2)   check {r['check_residual']:.1e}")

basis = qde.blowup_borel_basis(24).members
fit, check = (0.1, 0.2, 0.3, 0.4), (0.15, 0.35)
Bf, Bc = values(basis, fit), values(basis, check)
for j in (0, 1):
    for k in (0, 1):
        vf = [qde.thm_mt22_H([2], [1], [j], k, cmath.log(z)) for z in fit]
        vc = [qde.thm_mt22_H([2], [1], [j], k, cmath.log(z)) for z in check]
        r = qde.span_fit(vf, Bf, vc, Bc)
        print(f"H j={j} k={k}: check residual {r['check_residual']:.1e}")

# With k = 1 the integral is the transform of a master function against E_1,
# which drags in B[U2,E1] on its own; that series does not solve the equation.
