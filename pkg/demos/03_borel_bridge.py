"""
Formal versus numerical Borel multitransforms
=============================================

The formal route works on series: rescale exponents and divide each term by
Gamma(1 + sum of beta-weighted exponents), with nilpotent parts expanded in
Taylor series.  The numerical route integrates over a Hankel loop.
"""

import math

import mpmath as mp

from qbl import borel, qde
from qbl.logseries import ls_eval

w = borel.BLOWUP_WEIGHTS
print("alpha =", w.alpha, " beta =", w.beta)

for i, k in [(1, 0), (2, 0), (1, 1), (1, 2)]:
    s = borel.formal_pair(i, k, 20)
    ev = [borel.ups_evaluator(1, 0) if i == 1 else borel.ups_evaluator(0, 1), borel.ek_evaluator(k)]
    for z in (0.1, 0.4):
        f = complex(ls_eval(s, mp.log(z)))
        n = borel.borel_numeric(ev, w, math.log(z))
        print(f"B[U{i},E{k}]({z}): formal {f.real:+.15f}  numeric {n.real:+.15f}  gap {abs(f - n):.1e}")

# Four combinations of these transforms solve the scalar equation of the
# blown-up plane; the check is coefficientwise on the residual series.
ode = qde.derive_master_ode(qde.qde_blowup_data())
with mp.workdps(60):
    basis = qde.blowup_borel_basis(16)
for lab, s in zip(basis.provenance, basis.members):
    print(lab, qde.verify_solution(ode, s).summary())
