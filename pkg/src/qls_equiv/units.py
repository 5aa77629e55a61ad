"""Unit conventions.

Frequencies are wavenumbers (cm^-1) and times are femtoseconds.  Wherever a
product of a frequency and a time enters a phase, the time is first converted
to an "angular" length ``2*pi*c*t`` (in cm) so that ``omega * t_angular`` is in
radians.
"""

import numpy as np

SPEED_OF_LIGHT_CM_PER_FS = 2.99792458e-5


def angular_time(t_fs):
    """Convert a time in fs to the angular length 2*pi*c*t (cm)."""
    return 2.0 * np.pi * SPEED_OF_LIGHT_CM_PER_FS * np.asarray(t_fs, dtype=float)
