"""Physical constants, pinned to CODATA-2018 so outputs are bit-reproducible.

All values are SI.  h, e and k_B are exact in the 2019 SI redefinition;
the derived values below are therefore exact up to floating-point rounding.
"""

import math

PLANCK = 6.62607015e-34  # J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C
BOLTZMANN = 1.380649e-23  # J / K

HBAR = PLANCK / (2.0 * math.pi)  # J s
FLUX_QUANTUM = PLANCK / (2.0 * ELEMENTARY_CHARGE)  # Wb, h/2e

TWO_PI = 2.0 * math.pi
