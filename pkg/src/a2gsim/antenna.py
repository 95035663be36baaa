"""Antenna radiation patterns and orientation-dependent gain lookup.

Two pattern kinds are supported, both independent of azimuth:

* :class:`AnalyticDoughnut` -- the circular (in the vertical plane) model,
  ``cos(alpha)`` for a vertically mounted antenna and ``sin(alpha)`` for a
  horizontally mounted one.
* :class:`TabulatedPattern` -- samples of gain (dB, peak-normalized) versus
  elevation angle, e.g. read off a manufacturer datasheet.

All angles are in degrees. All gains returned to callers are linear power
gains in ``[0, 1]``; dB values are ``10 log10`` of those.
"""

from __future__ import annotations

import bisect
import enum
import logging
import math
import os
from dataclasses import dataclass, field
from typing import TextIO, Union

from .errors import DomainError, PatternFormatError, PatternRangeError
from .units import BELOW_FLOOR, db_to_lin, lin_to_db

logger = logging.getLogger(__name__)

PATTERN_HEADER = ("angle_deg", "gain_db")


class Orientation(enum.Enum):
    VERTICAL = "V"
    HORIZONTAL = "H"

    @classmethod
    def parse(cls, text: str) -> "Orientation":
        key = text.strip().upper()
        for member in cls:
            if key in (member.value, member.name):
                return member
        raise ValueError(f"unknown orientation {text!r}")


def _check_alpha(alpha: float) -> None:
    if not (0.0 <= alpha <= 90.0):
        raise DomainError(f"elevation angle {alpha!r} deg outside [0, 90]")


def _cos_deg(alpha: float) -> float:
    # Exact values at the ends so nulls are true zeros.
    if alpha == 90.0 or alpha == -90.0:
        return 0.0
    if alpha == 0.0:
        return 1.0
    return math.cos(math.radians(alpha))


def _sin_deg(alpha: float) -> float:
    if alpha == 0.0:
        return 0.0
    if alpha == 90.0:
        return 1.0
    return math.sin(math.radians(alpha))


def analytic_gain(orientation: Orientation, alpha: float) -> float:
    """Linear gain of the doughnut model at elevation ``alpha`` (degrees).

    A vertical antenna sees ``cos(alpha)``, a horizontal one ``sin(alpha)``.

    Raises
    ------
    DomainError
        If ``alpha`` is outside ``[0, 90]``.
    """
    _check_alpha(alpha)
    if orientation is Orientation.VERTICAL:
        return _cos_deg(alpha)
    return _sin_deg(alpha)


@dataclass(frozen=True)
class AnalyticDoughnut:
    """Unit-peak circular pattern in the vertical plane."""

    frequency_label: str = "analytic"

    def gain_at(self, elevation: float) -> float:
        """Gain at a signed elevation in ``[-90, 90]`` measured from broadside."""
        if not (-90.0 <= elevation <= 90.0):
            raise DomainError(f"elevation {elevation!r} deg outside [-90, 90]")
        return abs(_cos_deg(elevation))


@dataclass(frozen=True)
class TabulatedPattern:
    """Elevation-angle samples of a vertical-plane radiation pattern.

    ``gains_db`` are renormalized on construction so the largest sample is
    exactly 0 dB; the shift that was applied is kept in ``offset_db``
    (positive when the input peak was above 0 dB). ``-inf`` marks a null.

    ``interpolation`` selects how gains between samples are filled in:
    ``"linear"`` interpolates linear power gain, ``"db"`` interpolates the
    dB values (falling back to linear power next to a null).
    """

    angles_deg: tuple[float, ...]
    gains_db: tuple[float, ...]
    frequency_label: str = ""
    offset_db: float = 0.0
    interpolation: str = "linear"
    _gains_lin: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        angles = tuple(float(a) for a in self.angles_deg)
        gains = tuple(float(g) for g in self.gains_db)
        if len(angles) != len(gains):
            raise PatternFormatError("angle and gain sample counts differ")
        if len(angles) < 2:
            raise PatternFormatError("a tabulated pattern needs at least 2 samples")
        for i, a in enumerate(angles):
            if not math.isfinite(a) or not (-180.0 <= a <= 180.0):
                raise PatternFormatError(f"sample {i}: angle {a!r} outside [-180, 180]")
            if i and a <= angles[i - 1]:
                raise PatternFormatError(
                    f"sample {i}: angle {a!r} not greater than previous {angles[i - 1]!r}"
                )
        for i, g in enumerate(gains):
            if math.isnan(g) or g == math.inf:
                raise PatternFormatError(f"sample {i}: gain {g!r} dB is not allowed")
        finite = [g for g in gains if g != BELOW_FLOOR]
        if not finite:
            raise PatternFormatError("pattern has no finite gain samples")
        if self.interpolation not in ("linear", "db"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        peak = max(finite)
        if peak != 0.0:
            gains = tuple(g - peak for g in gains)
        object.__setattr__(self, "angles_deg", angles)
        object.__setattr__(self, "gains_db", gains)
        object.__setattr__(self, "offset_db", self.offset_db + peak)
        object.__setattr__(self, "_gains_lin", tuple(db_to_lin(g) for g in gains))

    @property
    def angle_range(self) -> tuple[float, float]:
        return self.angles_deg[0], self.angles_deg[-1]

    def gain_at(self, elevation: float) -> float:
        return tabulated_gain(self, elevation)


RadiationPattern = Union[AnalyticDoughnut, TabulatedPattern]


def tabulated_gain(pattern: TabulatedPattern, alpha: float) -> float:
    """Linear gain of ``pattern`` at ``alpha`` degrees.

    Exact at sample angles. No extrapolation: angles outside the sampled
    range raise :class:`PatternRangeError`.
    """
    angles = pattern.angles_deg
    lo, hi = angles[0], angles[-1]
    if not (lo <= alpha <= hi):
        raise PatternRangeError(
            f"angle {alpha!r} deg outside sampled range [{lo}, {hi}]"
        )
    j = bisect.bisect_left(angles, alpha)
    if angles[j] == alpha:
        return pattern._gains_lin[j]
    i = j - 1
    t = (alpha - angles[i]) / (angles[j] - angles[i])
    g0, g1 = pattern.gains_db[i], pattern.gains_db[j]
    if pattern.interpolation == "db" and g0 != BELOW_FLOOR and g1 != BELOW_FLOOR:
        return db_to_lin(g0 + (g1 - g0) * t)
    p0, p1 = pattern._gains_lin[i], pattern._gains_lin[j]
    return p0 + (p1 - p0) * t


@dataclass(frozen=True)
class AntennaConfig:
    """An antenna mounted in a given orientation on one terminal.

    The pattern describes the antenna in its vertical mounting. Mounting it
    horizontally rotates the pattern by 90 degrees in the link plane, so
    the gain at elevation ``alpha`` is the pattern's gain at ``90 - alpha``.
    """

    orientation: Orientation
    pattern: RadiationPattern = AnalyticDoughnut()

    def gain(self, alpha: float) -> float:
        _check_alpha(alpha)
        if isinstance(self.pattern, AnalyticDoughnut):
            return analytic_gain(self.orientation, alpha)
        if self.orientation is Orientation.VERTICAL:
            return tabulated_gain(self.pattern, alpha)
        return tabulated_gain(self.pattern, 90.0 - alpha)

    @property
    def is_analytic(self) -> bool:
        return isinstance(self.pattern, AnalyticDoughnut)


VERTICAL = AntennaConfig(Orientation.VERTICAL)
HORIZONTAL = AntennaConfig(Orientation.HORIZONTAL)


def gain_product(tx: AntennaConfig, rx: AntennaConfig, alpha: float) -> float:
    """``G_TX(alpha) * G_RX(alpha)`` as a linear gain."""
    return tx.gain(alpha) * rx.gain(alpha)


# -- pattern files -----------------------------------------------------------


def _parse_float(token: str, what: str, lineno: int, path: str) -> float:
    tok = token.strip()
    if what == "gain" and tok.lower() == "-inf":
        return BELOW_FLOOR
    try:
        value = float(tok)
    except ValueError:
        raise PatternFormatError(f"{path}:{lineno}: cannot parse {what} {tok!r}") from None
    if not math.isfinite(value):
        raise PatternFormatError(f"{path}:{lineno}: non-finite {what} {tok!r}")
    return value


def load_pattern(
    path: Union[str, os.PathLike],
    frequency_label: str | None = None,
    interpolation: str = "linear",
) -> TabulatedPattern:
    """Read a ``angle_deg,gain_db`` CSV into a peak-normalized pattern.

    Lines starting with ``#`` and blank lines are ignored. A gain of
    ``-inf`` marks a null. If the largest gain is not 0 dB, every sample is
    shifted and the shift is logged and stored in ``offset_db``.
    """
    path = os.fspath(path)
    angles: list[float] = []
    gains: list[float] = []
    header_seen = False
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            cols = [c.strip() for c in text.split(",")]
            if not header_seen:
                if tuple(cols) != PATTERN_HEADER:
                    raise PatternFormatError(
                        f"{path}:{lineno}: expected header 'angle_deg,gain_db', got {text!r}"
                    )
                header_seen = True
                continue
            if len(cols) != 2:
                raise PatternFormatError(f"{path}:{lineno}: expected 2 columns, got {len(cols)}")
            angle = _parse_float(cols[0], "angle", lineno, path)
            gain = _parse_float(cols[1], "gain", lineno, path)
            if angles and angle <= angles[-1]:
                raise PatternFormatError(
                    f"{path}:{lineno}: angle {angle} not greater than previous {angles[-1]}"
                )
            angles.append(angle)
            gains.append(gain)
    if not header_seen:
        raise PatternFormatError(f"{path}: empty pattern file")
    if frequency_label is None:
        frequency_label = os.path.splitext(os.path.basename(path))[0]
    try:
        pattern = TabulatedPattern(tuple(angles), tuple(gains), frequency_label,
                                   interpolation=interpolation)
    except PatternFormatError as exc:
        raise PatternFormatError(f"{path}: {exc}") from None
    if pattern.offset_db != 0.0:
        logger.info("%s: renormalized gains by %+.6g dB to a 0 dB peak", path, -pattern.offset_db)
    return pattern


def format_db(x: float) -> str:
    return "-inf" if x == BELOW_FLOOR else repr(float(x))


def save_pattern(pattern: TabulatedPattern, out: Union[str, os.PathLike, TextIO]) -> None:
    """Write ``pattern`` as pattern CSV to a path or an open text stream."""
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", newline="") as fh:
            save_pattern(pattern, fh)
        return
    out.write(f"# {pattern.frequency_label}\n")
    out.write(",".join(PATTERN_HEADER) + "\n")
    for a, g in zip(pattern.angles_deg, pattern.gains_db):
        out.write(f"{a!r},{format_db(g)}\n")


def digitize_doughnut(
    step: float = 1.0, start: float = -90.0, stop: float = 90.0
) -> TabulatedPattern:
    """Sample the analytic doughnut into a :class:`TabulatedPattern`.

    This is how the test fixtures are produced; no measured datasheet
    pattern is shipped.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    if not (-90.0 <= start < stop <= 90.0):
        raise DomainError("digitization range must lie within [-90, 90]")
    n = int(math.floor((stop - start) / step + 1e-9))
    angles: list[float] = [round(start + i * step, 9) for i in range(n + 1)]
    if angles[-1] < stop:
        angles.append(stop)
    doughnut = AnalyticDoughnut()
    gains = [lin_to_db(doughnut.gain_at(a)) for a in angles]
    return TabulatedPattern(tuple(angles), tuple(gains), f"doughnut-{step:g}deg")

