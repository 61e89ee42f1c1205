"""Physical constants and default atomic parameters for the Rb D1 line.

All angular frequencies inside the package are in rad/s; every value that
crosses an I/O boundary is ordinary frequency in Hz and is converted by 2*pi
at that boundary only.
"""

import math

from scipy.constants import c, epsilon_0, hbar, k as k_B, atomic_mass

TWO_PI = 2.0 * math.pi

#: Rb-87 atomic mass, kg
M_RB87 = 86.909180532 * atomic_mass

#: D1 wavelength, m
LAMBDA_D1 = 795e-9

#: Excited-state decay rate Gamma/(2*pi) for the Rb D1 line, Hz.
#: Standard literature value; not part of the measured data set.
GAMMA_TOTAL_HZ = 5.75e6

#: Effective signal-transition dipole moment, C*m (reduced D1 matrix
#: element 2.992 e*a0 scaled by 1/sqrt(3) for an isotropic average).
DIPOLE_D1 = 1.465e-29

__all__ = [
    "c",
    "epsilon_0",
    "hbar",
    "k_B",
    "atomic_mass",
    "TWO_PI",
    "M_RB87",
    "LAMBDA_D1",
    "GAMMA_TOTAL_HZ",
    "DIPOLE_D1",
]
