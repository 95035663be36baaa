"""Link geometry, received signal strength and critical distances.

The received power follows the free-space style product

    P_RX = P_TX * G_TX(alpha) * G_RX(alpha) * (lambda / (4 pi d)) ** gamma

with the whole bracket raised to the path-loss exponent. ``alpha`` is the
elevation angle of the drone seen from the ground unit and ``d`` the slant
distance between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .antenna import HORIZONTAL, VERTICAL, AntennaConfig, gain_product
from .errors import DomainError, NoMaximumError
from .units import BELOW_FLOOR, dbm_to_mw, mw_to_dbm, wavelength

DEFAULT_FREQUENCY_HZ = 4.0e9
DEFAULT_GAMMA = 2.0
TRIPOD_HEIGHT_M = 1.27

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LinkGeometry:
    """Drone above a ground unit, separated horizontally by ``horizontal_distance``."""

    drone_height: float
    receiver_height: float = 0.0
    horizontal_distance: float = 0.0

    def __post_init__(self) -> None:
        for name in ("drone_height", "receiver_height", "horizontal_distance"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.drone_height <= 0:
            raise DomainError(f"drone_height must be > 0, got {self.drone_height!r}")
        if self.receiver_height < 0:
            raise DomainError(f"receiver_height must be >= 0, got {self.receiver_height!r}")
        if self.horizontal_distance < 0:
            raise DomainError(
                f"horizontal_distance must be >= 0, got {self.horizontal_distance!r}"
            )
        if self.drone_height <= self.receiver_height:
            raise DomainError(
                f"drone ({self.drone_height} m) must be above receiver ({self.receiver_height} m)"
            )

    @property
    def delta_h(self) -> float:
        return self.drone_height - self.receiver_height

    @property
    def slant_distance(self) -> float:
        return math.hypot(self.delta_h, self.horizontal_distance)

    @property
    def elevation_deg(self) -> float:
        return elevation_angle(self)

    def at(self, horizontal_distance: float) -> "LinkGeometry":
        return LinkGeometry(self.drone_height, self.receiver_height, horizontal_distance)


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power (dBm), carrier frequency (Hz) and path-loss exponent."""

    tx_power_dbm: float = 0.0
    carrier_frequency: float = DEFAULT_FREQUENCY_HZ
    path_loss_exponent: float = DEFAULT_GAMMA

    def __post_init__(self) -> None:
        if not math.isfinite(self.tx_power_dbm):
            raise DomainError(f"tx_power_dbm must be finite, got {self.tx_power_dbm!r}")
        if not (self.carrier_frequency > 0 and math.isfinite(self.carrier_frequency)):
            raise DomainError(
                f"carrier_frequency must be > 0, got {self.carrier_frequency!r}"
            )
        if not (self.path_loss_exponent > 0 and math.isfinite(self.path_loss_exponent)):
            raise DomainError(
                f"path_loss_exponent must be > 0, got {self.path_loss_exponent!r}"
            )

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_frequency)

    def path_gain(self, distance: float) -> float:
        """``(lambda / (4 pi d)) ** gamma`` as a linear factor."""
        if not distance > 0:
            raise DomainError(f"slant distance must be > 0, got {distance!r}")
        return (self.wavelength / (4.0 * math.pi * distance)) ** self.path_loss_exponent


def elevation_angle(geom: LinkGeometry) -> float:
    """Elevation of the drone seen from the receiver, in degrees.

    Exactly 90 when the drone is overhead.
    """
    if geom.horizontal_distance == 0.0:
        return 90.0
    return math.degrees(math.atan2(geom.delta_h, geom.horizontal_distance))


def rss_from_gain(budget: LinkBudget, geom: LinkGeometry, gain: float) -> float:
    """Received power in mW for a given combined linear antenna gain."""
    if gain < 0:
        raise DomainError(f"antenna gain must be >= 0, got {gain!r}")
    return dbm_to_mw(budget.tx_power_dbm) * gain * budget.path_gain(geom.slant_distance)


def rss_mw(budget: LinkBudget, geom: LinkGeometry, tx: AntennaConfig, rx: AntennaConfig) -> float:
    """Received power in mW (linear)."""
    alpha = elevation_angle(geom)
    return rss_from_gain(budget, geom, gain_product(tx, rx, alpha))


def rss(budget: LinkBudget, geom: LinkGeometry, tx: AntennaConfig, rx: AntennaConfig) -> float:
    """Received power in dBm; ``-inf`` when either antenna has zero gain."""
    return mw_to_dbm(rss_mw(budget, geom, tx, rx))


def rss_derivative_sign(budget: LinkBudget, geom: LinkGeometry) -> int:
    """Sign of dP_RX/dl for the analytic VV link.

    For cos^2 gains the derivative is a positive factor times
    ``2 dh^2 - l^2 gamma``, so only that numerator is evaluated.
    """
    l = geom.horizontal_distance
    if l <= 0:
        raise DomainError("derivative is singular at horizontal distance 0")
    numer = 2.0 * geom.delta_h ** 2 - l * l * budget.path_loss_exponent
    return (numer > 0) - (numer < 0)


def critical_distance_analytic(delta_h: float, gamma: float = DEFAULT_GAMMA) -> float:
    """Horizontal distance maximizing analytic VV RSS: ``sqrt(2 dh^2 / gamma)``."""
    if not delta_h > 0:
        raise DomainError(f"delta_h must be > 0, got {delta_h!r}")
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma!r}")
    return math.sqrt(2.0 * delta_h * delta_h / gamma)


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-6
) -> float:
    """Maximizer of a unimodal ``f`` on ``[a, b]`` to within ``tol``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def distance_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid ``start, start+step, ...`` up to ``stop``.

    Points are rounded to 1e-9 m so decimal steps print cleanly.
    """
    if not step > 0:
        raise DomainError(f"step must be > 0, got {step!r}")
    if not stop > start:
        raise DomainError(f"range [{start}, {stop}] is degenerate")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 9) for i in range(n + 1)]


def critical_distance_numeric(
    budget: LinkBudget,
    delta_h: float,
    tx: AntennaConfig = VERTICAL,
    rx: AntennaConfig = VERTICAL,
    search_range: tuple[float, float] = (0.0, 200.0),
    resolution: float = 0.1,
    tol: float = 1e-6,
) -> float:
    """Horizontal distance maximizing RSS for any antenna pair.

    A grid scan at ``resolution`` finds the best sample, then golden-section
    search refines it between the neighbouring grid points. If the best
    sample is an end of the range the RSS is treated as monotone and that
    end is returned.

    Raises
    ------
    NoMaximumError
        If RSS is zero at every grid point.
    """
    l_min, l_max = search_range
    if l_min < 0:
        raise DomainError(f"search range must start at >= 0, got {l_min!r}")
    grid = distance_grid(l_min, l_max, resolution)
    geom = LinkGeometry(delta_h, 0.0, 0.0)

    def power(l: float) -> float:
        return rss_mw(budget, geom.at(l), tx, rx)

    values = [power(l) for l in grid]
    best = max(range(len(grid)), key=values.__getitem__)
    if values[best] <= 0.0:
        raise NoMaximumError(f"RSS is zero over [{l_min}, {l_max}]")
    if best == 0 or best == len(grid) - 1:
        return grid[best]
    return golden_section_max(power, grid[best - 1], grid[best + 1], tol)


__all__ = [
    "BELOW_FLOOR",
    "HORIZONTAL",
    "LinkBudget",
    "LinkGeometry",
    "TRIPOD_HEIGHT_M",
    "VERTICAL",
    "critical_distance_analytic",
    "critical_distance_numeric",
    "distance_grid",
    "elevation_angle",
    "golden_section_max",
    "rss",
    "rss_derivative_sign",
    "rss_from_gain",
    "rss_mw",
]
