"""dB / linear power conversions.

Zero linear power maps to ``-inf`` dB and back; that value doubles as the
below-floor marker throughout the package.
"""

from __future__ import annotations

import math
from typing import Iterable

#: In-memory representation of a below-floor (or zero-power) RSS value.
BELOW_FLOOR = float("-inf")

SPEED_OF_LIGHT = 299_792_458.0  # m/s


def db_to_lin(x_db: float) -> float:
    """Power ratio in dB to linear. ``-inf`` maps to 0."""
    if x_db == BELOW_FLOOR:
        return 0.0
    return 10.0 ** (x_db / 10.0)


def lin_to_db(x: float) -> float:
    """Linear power ratio to dB. 0 maps to ``-inf``."""
    if x < 0:
        raise ValueError(f"negative linear power {x!r}")
    if x == 0.0:
        return BELOW_FLOOR
    return 10.0 * math.log10(x)


def dbm_to_mw(p_dbm: float) -> float:
    return db_to_lin(p_dbm)


def mw_to_dbm(p_mw: float) -> float:
    return lin_to_db(p_mw)


def wavelength(frequency_hz: float) -> float:
    """Free-space wavelength in meters."""
    return SPEED_OF_LIGHT / frequency_hz


def power_mean_dbm(values_dbm: Iterable[float]) -> float:
    """Average dBm values in the linear (mW) domain and convert back.

    >>> round(power_mean_dbm([-70.0, -72.0]), 3)
    -70.886
    """
    vals = [dbm_to_mw(v) for v in values_dbm]
    if not vals:
        raise ValueError("power_mean_dbm() of an empty sequence")
    return mw_to_dbm(math.fsum(vals) / len(vals))


def is_below_floor(x: float) -> bool:
    return x == BELOW_FLOOR
