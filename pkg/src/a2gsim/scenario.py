"""Flyby sweeps, RSS traces and model-versus-measurement comparison.

Trace CSV (one flyby)::

    distance_m,rss_dbm
    0.0,-inf
    0.5,-61.2

Sweep CSV (several flybys, one block per height)::

    distance_m,rss_dbm,rss_norm_db,height_m,config,alpha_deg

``-inf`` marks a sample below the sensitivity floor. Lines starting with
``#`` are comments. Either file may be tab separated instead of comma
separated; the header decides.
"""

from __future__ import annotations

import bisect
import enum
import math
import os
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple, Optional, Sequence, TextIO, Union

from .antenna import AntennaConfig, Orientation, TabulatedPattern
from .errors import (
    ComparisonError,
    DomainError,
    EmptyTraceError,
    TraceFormatError,
    UnsupportedCombinationError,
)
from .link import (
    TRIPOD_HEIGHT_M,
    LinkBudget,
    LinkGeometry,
    distance_grid,
    elevation_angle,
    rss,
)
from .multiantenna import rss_vhvh
from .units import BELOW_FLOOR, power_mean_dbm

PathLike = Union[str, os.PathLike]

TRACE_HEADER = ("distance_m", "rss_dbm")
SWEEP_HEADER = ("distance_m", "rss_dbm", "rss_norm_db", "height_m", "config", "alpha_deg")
DEFAULT_HEIGHTS = (10.0, 20.0, 30.0, 50.0)


class Configuration(enum.Enum):
    """Antenna orientations as (ground antenna, drone antenna)."""

    VV = "VV"
    VH = "VH"
    HH = "HH"
    VHVH = "VHVH"

    @property
    def rx(self) -> Orientation:
        return Orientation.parse(self.value[0])

    @property
    def tx(self) -> Orientation:
        return Orientation.parse(self.value[1])

    @property
    def single_antenna(self) -> bool:
        return self is not Configuration.VHVH


class RssSample(NamedTuple):
    distance_m: float
    rss: float


@dataclass(frozen=True)
class RssTrace:
    """Ordered ``(distance, rss)`` samples from one flyby.

    ``rss`` is in dBm for raw traces and dB for normalized ones. Samples at
    or below ``sensitivity_floor`` are stored as ``-inf``.
    """

    label: str
    samples: tuple[RssSample, ...]
    normalized: bool = False
    sensitivity_floor: Optional[float] = None
    height_m: Optional[float] = None
    receiver_height_m: Optional[float] = None
    config: Optional[str] = None

    def __post_init__(self) -> None:
        samples = tuple(RssSample(float(d), float(v)) for d, v in self.samples)
        for i, (d, v) in enumerate(samples):
            if not math.isfinite(d):
                raise TraceFormatError(f"{self.label}: sample {i} has distance {d!r}")
            if math.isnan(v) or v == math.inf:
                raise TraceFormatError(f"{self.label}: sample {i} has rss {v!r}")
            if i and d <= samples[i - 1].distance_m:
                raise TraceFormatError(
                    f"{self.label}: distances not strictly increasing at sample {i} ({d})"
                )
        if self.sensitivity_floor is not None:
            floor = self.sensitivity_floor
            samples = tuple(
                RssSample(d, BELOW_FLOOR if v <= floor else v) for d, v in samples
            )
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def distances(self) -> list[float]:
        return [s.distance_m for s in self.samples]

    @property
    def values(self) -> list[float]:
        return [s.rss for s in self.samples]

    def finite_indices(self) -> list[int]:
        return [i for i, s in enumerate(self.samples) if s.rss != BELOW_FLOOR]

    def peak_index(self) -> int:
        idx = self.finite_indices()
        if not idx:
            raise EmptyTraceError(f"{self.label}: no finite samples")
        return max(idx, key=lambda i: self.samples[i].rss)

    @property
    def peak_distance(self) -> float:
        return self.samples[self.peak_index()].distance_m


@dataclass(frozen=True)
class SweepSpec:
    drone_heights: tuple[float, ...] = DEFAULT_HEIGHTS
    receiver_height: float = TRIPOD_HEIGHT_M
    l_range: tuple[float, float] = (0.0, 200.0)
    step: float = 0.5
    configuration: Configuration = Configuration.VV
    pattern: Optional[TabulatedPattern] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "drone_heights", tuple(float(h) for h in self.drone_heights))
        if not self.drone_heights:
            raise DomainError("at least one drone height is required")
        if not self.step > 0:
            raise DomainError(f"step must be > 0, got {self.step!r}")
        start, stop = self.l_range
        if not (0 <= start < stop):
            raise DomainError(f"distance range [{start}, {stop}] must satisfy 0 <= start < stop")
        if self.pattern is not None and self.configuration is Configuration.VHVH:
            raise UnsupportedCombinationError(
                "the VHVH configuration is only defined for the analytic pattern"
            )

    @property
    def distances(self) -> list[float]:
        return distance_grid(self.l_range[0], self.l_range[1], self.step)

    def antennas(self) -> tuple[AntennaConfig, AntennaConfig]:
        """``(tx, rx)`` antenna configs for a single-antenna configuration."""
        if not self.configuration.single_antenna:
            raise UnsupportedCombinationError("VHVH has no single antenna pair")
        kw = {} if self.pattern is None else {"pattern": self.pattern}
        return (AntennaConfig(self.configuration.tx, **kw),
                AntennaConfig(self.configuration.rx, **kw))


def run_sweep(spec: SweepSpec, budget: LinkBudget) -> list[RssTrace]:
    """Raw RSS (dBm) along a straight flyby, one trace per drone height."""
    traces = []
    cfg = spec.configuration
    for h in spec.drone_heights:
        base = LinkGeometry(h, spec.receiver_height, 0.0)
        samples = []
        for l in spec.distances:
            geom = base.at(l)
            if cfg is Configuration.VHVH:
                value = rss_vhvh(budget, geom)
            else:
                tx, rx = spec.antennas()
                value = rss(budget, geom, tx, rx)
            samples.append(RssSample(l, value))
        traces.append(
            RssTrace(
                label=f"{cfg.value} h={h:g}m",
                samples=tuple(samples),
                height_m=h,
                receiver_height_m=spec.receiver_height,
                config=cfg.value,
            )
        )
    return traces


def apply_floor(trace: RssTrace, floor: Optional[float]) -> RssTrace:
    """Mark samples at or below ``floor`` as below-floor."""
    if floor is None:
        return trace
    return replace(trace, sensitivity_floor=floor)


def normalize_trace(trace: RssTrace) -> RssTrace:
    """Shift a trace so its largest finite sample sits at exactly 0 dB.

    Below-floor markers and the floor (shifted alongside) are preserved.
    Normalizing a normalized trace returns an equal trace.
    """
    peak = trace.samples[trace.peak_index()].rss
    samples = tuple(
        RssSample(d, v if v == BELOW_FLOOR else v - peak) for d, v in trace.samples
    )
    floor = None if trace.sensitivity_floor is None else trace.sensitivity_floor - peak
    return replace(trace, samples=samples, normalized=True, sensitivity_floor=floor)


# -- comparison ----------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    """Model-versus-trace agreement.

    ``peak_distance_error`` is signed, model minus trace. Coverage intervals
    are ``None`` when no sample is above the floor.
    """

    rmse_db: float
    n_points: int
    peak_distance_model: float
    peak_distance_trace: float
    peak_distance_error: float
    coverage_interval_model: Optional[tuple[float, float]]
    coverage_interval_trace: Optional[tuple[float, float]]
    sensitivity_floor: Optional[float] = None

    def as_rows(self) -> list[tuple[str, str]]:
        def interval(iv):
            return "" if iv is None else f"{iv[0]!r}:{iv[1]!r}"

        return [
            ("rmse_db", repr(self.rmse_db)),
            ("n_points", str(self.n_points)),
            ("peak_distance_model_m", repr(self.peak_distance_model)),
            ("peak_distance_trace_m", repr(self.peak_distance_trace)),
            ("peak_distance_error_m", repr(self.peak_distance_error)),
            ("coverage_interval_model_m", interval(self.coverage_interval_model)),
            ("coverage_interval_trace_m", interval(self.coverage_interval_trace)),
            ("sensitivity_floor", "" if self.sensitivity_floor is None
             else repr(self.sensitivity_floor)),
        ]


def resample(trace: RssTrace, distances: Sequence[float]) -> list[Optional[float]]:
    """Values of ``trace`` at ``distances``, interpolated linearly in dB.

    ``None`` outside the trace's distance support; ``-inf`` where either
    bracketing sample is below floor.
    """
    xs = trace.distances
    ys = trace.values
    out: list[Optional[float]] = []
    for x in distances:
        if x < xs[0] or x > xs[-1]:
            out.append(None)
            continue
        j = bisect.bisect_left(xs, x)
        if xs[j] == x:
            out.append(ys[j])
            continue
        y0, y1 = ys[j - 1], ys[j]
        if y0 == BELOW_FLOOR or y1 == BELOW_FLOOR:
            out.append(BELOW_FLOOR)
            continue
        t = (x - xs[j - 1]) / (xs[j] - xs[j - 1])
        out.append(y0 + (y1 - y0) * t)
    return out


def coverage_interval(trace: RssTrace) -> Optional[tuple[float, float]]:
    """Widest contiguous distance span whose samples are all above floor."""
    best = None
    run_start = None
    samples = trace.samples
    for i, s in enumerate(samples + (RssSample(math.inf, BELOW_FLOOR),)):
        if s.rss != BELOW_FLOOR:
            if run_start is None:
                run_start = i
            continue
        if run_start is not None:
            span = (samples[run_start].distance_m, samples[i - 1].distance_m)
            if best is None or span[1] - span[0] > best[1] - best[0]:
                best = span
            run_start = None
    return best


def compare(
    model: RssTrace, measured: RssTrace, sensitivity_floor: Optional[float] = None
) -> ComparisonReport:
    """Compare a model trace against a measured trace.

    The model is resampled onto the measured distances (measurements are
    never resampled). Both traces must be in the same units: both
    normalized or both raw.
    """
    if model.normalized != measured.normalized:
        raise ComparisonError("cannot compare a normalized trace with a raw one")
    model = apply_floor(model, sensitivity_floor)
    measured = apply_floor(measured, sensitivity_floor)
    predicted = resample(model, measured.distances)
    overlap = [(p, m.rss) for p, m in zip(predicted, measured.samples) if p is not None]
    if not overlap:
        raise ComparisonError(
            f"no overlapping distance support between {model.label!r} and {measured.label!r}"
        )
    pairs = [(p, m) for p, m in overlap if p != BELOW_FLOOR and m != BELOW_FLOOR]
    if not pairs:
        raise ComparisonError("no distances where both traces are above floor")
    rmse = math.sqrt(math.fsum((p - m) ** 2 for p, m in pairs) / len(pairs))
    pm, pt = model.peak_distance, measured.peak_distance
    return ComparisonReport(
        rmse_db=rmse,
        n_points=len(pairs),
        peak_distance_model=pm,
        peak_distance_trace=pt,
        peak_distance_error=pm - pt,
        coverage_interval_model=coverage_interval(model),
        coverage_interval_trace=coverage_interval(measured),
        sensitivity_floor=sensitivity_floor,
    )


# -- CSV I/O -------------------------------------------------------------------


def format_value(x: float, digits: Optional[int] = None) -> str:
    """Shortest round-trip repr, or ``digits`` significant digits."""
    if x == BELOW_FLOOR:
        return "-inf"
    if digits is None:
        return repr(float(x))
    return f"{x:.{digits}g}"


def _parse_number(tok: str, what: str, where: str, allow_neg_inf: bool) -> float:
    tok = tok.strip()
    if allow_neg_inf and tok == "-inf":
        return BELOW_FLOOR
    try:
        value = float(tok)
    except ValueError:
        raise TraceFormatError(f"{where}: cannot parse {what} {tok!r}") from None
    if not math.isfinite(value):
        raise TraceFormatError(f"{where}: non-finite {what} {tok!r} (only '-inf' is allowed)")
    return value


@dataclass
class _Row:
    lineno: int
    distance: float
    rss: float
    height: Optional[float] = None
    config: Optional[str] = None


def _read_rows(path: PathLike) -> tuple[list[_Row], tuple[str, ...]]:
    name = os.fspath(path)
    rows: list[_Row] = []
    header: Optional[tuple[str, ...]] = None
    delim = ","
    with open(name, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.rstrip("\r\n")
            if not text.strip() or text.lstrip().startswith("#"):
                continue
            where = f"{name}:{lineno}"
            if header is None:
                delim = "\t" if "\t" in text else ","
                header = tuple(c.strip() for c in text.split(delim))
                if header[:2] != TRACE_HEADER:
                    raise TraceFormatError(
                        f"{where}: header must start with 'distance_m,rss_dbm', got {text!r}"
                    )
                continue
            cols = [c.strip() for c in text.split(delim)]
            if len(cols) != len(header):
                raise TraceFormatError(
                    f"{where}: expected {len(header)} columns, got {len(cols)}"
                )
            row = _Row(
                lineno,
                _parse_number(cols[0], "distance", where, allow_neg_inf=False),
                _parse_number(cols[1], "rss", where, allow_neg_inf=True),
            )
            if "height_m" in header:
                row.height = _parse_number(cols[header.index("height_m")], "height", where, False)
            if "config" in header:
                row.config = cols[header.index("config")]
            rows.append(row)
    if header is None:
        raise TraceFormatError(f"{name}: empty trace file")
    if not rows:
        raise TraceFormatError(f"{name}: trace file has a header but no samples")
    return rows, header


def _rows_to_trace(rows: Sequence[_Row], label: str, name: str) -> RssTrace:
    samples: list[RssSample] = []
    group: list[float] = []
    for k, row in enumerate(rows):
        if k and row.distance < rows[k - 1].distance:
            raise TraceFormatError(
                f"{name}:{row.lineno}: distance {row.distance} decreases "
                f"(previous {rows[k - 1].distance})"
            )
        if k and row.distance == rows[k - 1].distance:
            group.append(row.rss)
            continue
        if group:
            samples.append(_collapse(samples.pop(), group, name))
            group = []
        samples.append(RssSample(row.distance, row.rss))
    if group:
        samples.append(_collapse(samples.pop(), group, name))
    return RssTrace(label=label, samples=tuple(samples))


def _collapse(first: RssSample, extra: list[float], name: str) -> RssSample:
    values = [first.rss, *extra]
    merged = power_mean_dbm(values)
    warnings.warn(
        f"{name}: {len(values)} samples at distance {first.distance_m} averaged "
        f"in the power domain to {merged:.6g} dBm",
        stacklevel=4,
    )
    return RssSample(first.distance_m, merged)


def load_trace(
    path: PathLike, height: Optional[float] = None, config: Optional[str] = None
) -> RssTrace:
    """Read and validate an RSS trace file.

    Sweep files with several heights (or configurations) need ``height``
    (and ``config``) to pick one block. Duplicate distances are averaged in
    the power domain with a warning; decreasing distances are rejected.
    """
    name = os.fspath(path)
    rows, header = _read_rows(path)
    if height is not None:
        if "height_m" not in header:
            raise TraceFormatError(f"{name}: no height_m column to select height {height}")
        rows = [r for r in rows if r.height == height]
    if config is not None and "config" in header:
        rows = [r for r in rows if r.config == config]
    if not rows:
        raise TraceFormatError(f"{name}: no samples for height={height} config={config}")
    if len({r.height for r in rows}) > 1 or len({r.config for r in rows}) > 1:
        raise TraceFormatError(
            f"{name}: file holds several flybys; select one with height/config "
            "or use read_sweep()"
        )
    label = os.path.splitext(os.path.basename(name))[0]
    trace = _rows_to_trace(rows, label, name)
    return replace(trace, height_m=rows[0].height, config=rows[0].config)


def read_sweep(path: PathLike) -> list[RssTrace]:
    """All flybys of a sweep file, in file order."""
    name = os.fspath(path)
    rows, header = _read_rows(path)
    groups: dict[tuple, list[_Row]] = {}
    for r in rows:
        groups.setdefault((r.height, r.config), []).append(r)
    traces = []
    for (h, cfg), grp in groups.items():
        label = f"{cfg or 'trace'} h={h:g}m" if h is not None else (cfg or "trace")
        trace = _rows_to_trace(grp, label, name)
        traces.append(replace(trace, height_m=h, config=cfg))
    return traces


def save_trace(
    trace: RssTrace, path: PathLike, delimiter: str = ",", digits: Optional[int] = None
) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(delimiter.join(TRACE_HEADER) + "\n")
        for d, v in trace.samples:
            fh.write(f"{format_value(d)}{delimiter}{format_value(v, digits)}\n")


def write_sweep(
    traces: Iterable[RssTrace],
    out: Union[TextIO, PathLike],
    delimiter: str = ",",
    normalized: bool = False,
    digits: Optional[int] = None,
) -> None:
    """Write raw sweep traces as sweep CSV/TSV.

    ``rss_norm_db`` holds the per-trace peak-normalized value when
    ``normalized`` is set and is left empty otherwise.
    """
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", newline="") as fh:
            write_sweep(traces, fh, delimiter, normalized, digits)
        return
    out.write(delimiter.join(SWEEP_HEADER) + "\n")
    for trace in traces:
        norm = normalize_trace(trace) if normalized else None
        h = trace.height_m
        for k, (d, v) in enumerate(trace.samples):
            if h is not None and trace.receiver_height_m is not None:
                geom = LinkGeometry(h, trace.receiver_height_m, d)
                alpha = format_value(elevation_angle(geom), digits)
            else:
                alpha = ""
            cols = [
                format_value(d),
                format_value(v, digits),
                "" if norm is None else format_value(norm.samples[k].rss, digits),
                "" if h is None else format_value(h),
                trace.config or "",
                alpha,
            ]
            out.write(delimiter.join(cols) + "\n")


__all__ = [
    "ComparisonReport",
    "Configuration",
    "DEFAULT_HEIGHTS",
    "RssSample",
    "RssTrace",
    "SweepSpec",
    "apply_floor",
    "compare",
    "coverage_interval",
    "format_value",
    "load_trace",
    "normalize_trace",
    "read_sweep",
    "resample",
    "run_sweep",
    "save_trace",
    "write_sweep",
]
