"""
Derivatives of 1/Gamma, three ways
==================================

The Borel transforms below divide by Gamma at shifted nilpotent arguments,
so everything rests on the numbers C^k_z = (d/dz)^k 1/Gamma(z).
"""

import numpy as np
import mpmath as mp

from qbl import specfun

mp.mp.dps = 30

# On the integer/half-integer lattice there is an exact recurrence seeded by
# polygamma values at 1 and 1/2.
for z in (1, 0.5, -1, -1.5):
    row = [specfun.recip_gamma_deriv_recurrence(k, z) for k in range(4)]
    print(z, [mp.nstr(c, 15) for c in row])

# Off the lattice we fall back to complete Bell polynomials in -psi^(j).
z = mp.mpf("0.3")
print("bell   ", mp.nstr(specfun.recip_gamma_deriv_bell(2, z), 20))
print("mpmath ", mp.nstr(mp.diff(mp.rgamma, z, 2), 20))

# The Hankel loop reproduces the same numbers in double precision, zeros
# at the non-positive integers included.
for z in (-1.0, 0.0, 2.5):
    print(z, specfun.recip_gamma_deriv_hankel(0, z), float(mp.rgamma(z)))

# a quick sweep
ks = np.arange(5)
err = max(abs(complex(specfun.recip_gamma_deriv(k, 2.5)) - specfun.recip_gamma_deriv_hankel(k, 2.5)) for k in ks)
print("max recurrence/Hankel gap at z=2.5:", err)
