"""Two antennas per terminal (one vertical, one horizontal) with receive selection.

Both transmit antennas send the same signal and their contributions add in
power at each receive antenna:

    vertical rx:   cos^2(a) + cos(a) sin(a)    (VV + VH terms)
    horizontal rx: sin^2(a) + cos(a) sin(a)    (HH + HV terms)

The receiver keeps whichever branch is stronger. Only the analytic doughnut
pattern is supported here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .antenna import Orientation, analytic_gain
from .link import LinkBudget, LinkGeometry, elevation_angle, rss_from_gain
from .units import mw_to_dbm


@dataclass(frozen=True)
class DualAntennaGains:
    gain_rx_vertical: float
    gain_rx_horizontal: float
    selected: Orientation
    selected_gain: float


def _branch_gains(alpha: float) -> tuple[float, float]:
    v = analytic_gain(Orientation.VERTICAL, alpha)
    h = analytic_gain(Orientation.HORIZONTAL, alpha)
    return v * v + v * h, h * h + v * h


def composite_gain_vertical(alpha: float) -> float:
    """Total gain at the vertical receive antenna."""
    return _branch_gains(alpha)[0]


def composite_gain_horizontal(alpha: float) -> float:
    """Total gain at the horizontal receive antenna."""
    return _branch_gains(alpha)[1]


def selection_gain(alpha: float) -> DualAntennaGains:
    """Evaluate both receive branches and select the stronger.

    Exact ties go to the vertical antenna. The selected gain can exceed 1
    since two transmit contributions are summed.
    """
    gv, gh = _branch_gains(alpha)
    if gv >= gh:
        return DualAntennaGains(gv, gh, Orientation.VERTICAL, gv)
    return DualAntennaGains(gv, gh, Orientation.HORIZONTAL, gh)


def rss_vhvh_mw(budget: LinkBudget, geom: LinkGeometry) -> float:
    gain = selection_gain(elevation_angle(geom)).selected_gain
    return rss_from_gain(budget, geom, gain)


def rss_vhvh(budget: LinkBudget, geom: LinkGeometry) -> float:
    """Received power (dBm) of the dual-antenna link with receive selection."""
    return mw_to_dbm(rss_vhvh_mw(budget, geom))
