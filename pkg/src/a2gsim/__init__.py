"""Air-to-ground drone link simulation under 3D antenna radiation patterns."""

from .antenna import (
    AnalyticDoughnut,
    AntennaConfig,
    Orientation,
    TabulatedPattern,
    analytic_gain,
    digitize_doughnut,
    gain_product,
    load_pattern,
    save_pattern,
    tabulated_gain,
)
from .errors import (
    A2GError,
    ComparisonError,
    DomainError,
    EmptyTraceError,
    NoMaximumError,
    PatternFormatError,
    PatternRangeError,
    TraceFormatError,
    UnsupportedCombinationError,
)
from .link import (
    LinkBudget,
    LinkGeometry,
    critical_distance_analytic,
    critical_distance_numeric,
    elevation_angle,
    rss,
    rss_derivative_sign,
    rss_mw,
)
from .multiantenna import (
    DualAntennaGains,
    composite_gain_horizontal,
    composite_gain_vertical,
    rss_vhvh,
    selection_gain,
)
from .scenario import (
    ComparisonReport,
    Configuration,
    RssSample,
    RssTrace,
    SweepSpec,
    compare,
    load_trace,
    normalize_trace,
    read_sweep,
    run_sweep,
    save_trace,
    write_sweep,
)
from .units import BELOW_FLOOR

__version__ = "0.1.0"
