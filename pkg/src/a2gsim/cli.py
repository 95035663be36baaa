"""Command-line interface.

    a2gsim sweep    --config VV --heights 10,20,30,50 [--normalized] [--plot out.png]
    a2gsim critical --config VV --heights 10,20,30,50
    a2gsim select   --alphas 0,30,45,60,90
    a2gsim compare  --config VV --height 20 --trace measured.csv [--normalized]
    a2gsim patterns --step 1 --output doughnut.csv

Exit status: 0 on success, 1 on computation or file errors, 2 on bad flags.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from typing import Iterator, Optional, Sequence, TextIO

from . import __version__
from .antenna import (
    TabulatedPattern,
    digitize_doughnut,
    load_pattern,
    save_pattern,
)
from .errors import A2GError, UnsupportedCombinationError
from .link import (
    DEFAULT_FREQUENCY_HZ,
    DEFAULT_GAMMA,
    TRIPOD_HEIGHT_M,
    LinkBudget,
    critical_distance_analytic,
    critical_distance_numeric,
)
from .multiantenna import selection_gain
from .scenario import (
    DEFAULT_HEIGHTS,
    Configuration,
    SweepSpec,
    apply_floor,
    compare,
    format_value,
    load_trace,
    normalize_trace,
    run_sweep,
    write_sweep,
)


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- argument types --------------------------------------------------------------


def _float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def positive_float(text: str) -> float:
    value = _float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def nonnegative_float(text: str) -> float:
    value = _float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def float_list(text: str) -> list[float]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return [_float(t) for t in items]


def height_list(text: str) -> list[float]:
    values = float_list(text)
    for v in values:
        if v <= 0:
            raise argparse.ArgumentTypeError(f"heights must be > 0, got {v:g}")
    return values


def distance_range(text: str) -> tuple[float, float]:
    values = float_list(text)
    if len(values) != 2 or not (0 <= values[0] < values[1]):
        raise argparse.ArgumentTypeError(f"expected START,STOP with 0 <= START < STOP, got {text!r}")
    return values[0], values[1]


def pattern_mode(text: str) -> Optional[str]:
    if text == "analytic":
        return None
    if text.startswith("tabulated:") and len(text) > len("tabulated:"):
        return text[len("tabulated:"):]
    raise argparse.ArgumentTypeError("expected 'analytic' or 'tabulated:FILE'")


# -- parser ------------------------------------------------------------------------


def _budget_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("link budget")
    g.add_argument("--frequency", type=positive_float, default=DEFAULT_FREQUENCY_HZ,
                   help="carrier frequency in Hz (default: %(default)g)")
    g.add_argument("--gamma", type=positive_float, default=DEFAULT_GAMMA,
                   help="path-loss exponent (default: %(default)g)")
    g.add_argument("--tx-power", type=_float, default=0.0,
                   help="transmit power in dBm (default: %(default)g)")
    g.add_argument("--receiver-height", type=nonnegative_float, default=TRIPOD_HEIGHT_M,
                   help="ground antenna height in m (default: %(default)g)")
    g.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
    return p


def _sweep_options(
    p: argparse.ArgumentParser, configs: Sequence[str], with_step: bool = True
) -> None:
    p.add_argument("--config", choices=configs, default="VV",
                   help="antenna orientations, ground then drone (default: VV)")
    p.add_argument("--range", dest="l_range", type=distance_range, default=(0.0, 200.0),
                   metavar="START,STOP", help="horizontal distance range in m (default: 0,200)")
    if with_step:
        p.add_argument("--step", type=positive_float, default=0.5,
                       help="distance step in m (default: %(default)g)")
    p.add_argument("--pattern", type=pattern_mode, default=None, metavar="MODE",
                   help="'analytic' (default) or 'tabulated:FILE'")
    p.add_argument("--interp", choices=("linear", "db"), default="linear",
                   help="interpolation between tabulated pattern samples")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="a2gsim",
        description="Air-to-ground drone link RSS under 3D antenna radiation patterns.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _budget_parent()
    all_configs = [c.value for c in Configuration]

    p = sub.add_parser("sweep", parents=[parent], help="RSS along straight flybys")
    _sweep_options(p, all_configs)
    p.add_argument("--heights", type=height_list, default=list(DEFAULT_HEIGHTS),
                   help="comma-separated drone heights in m (default: 10,20,30,50)")
    p.add_argument("--normalized", action="store_true",
                   help="fill rss_norm_db with per-trace peak-normalized values")
    p.add_argument("--floor", type=_float, default=None,
                   help="sensitivity floor in dBm; samples at or below become -inf")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")
    p.add_argument("--digits", type=int, default=None,
                   help="significant digits for dB values (default: exact round-trip)")
    p.add_argument("--plot", default=None, metavar="PATH", help="also render a figure")

    p = sub.add_parser("critical", parents=[parent], help="RSS-maximizing horizontal distance")
    _sweep_options(p, [c for c in all_configs if c != "VHVH"], with_step=False)
    p.add_argument("--heights", "--height", dest="heights", type=height_list,
                   default=list(DEFAULT_HEIGHTS))
    p.add_argument("--resolution", type=positive_float, default=0.1,
                   help="grid resolution in m before refinement (default: %(default)g)")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")

    p = sub.add_parser("select", parents=[parent], help="dual-antenna receive selection gains")
    p.add_argument("--alphas", type=float_list, default=None,
                   help="comma-separated elevation angles in degrees")
    p.add_argument("--alpha-step", type=positive_float, default=5.0,
                   help="angle step when --alphas is not given (default: %(default)g)")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")
    p.add_argument("--plot", default=None, metavar="PATH")

    p = sub.add_parser("compare", parents=[parent], help="model versus measured trace")
    _sweep_options(p, all_configs)
    p.add_argument("--height", type=positive_float, required=True, help="drone height in m")
    p.add_argument("--trace", required=True, help="measured trace CSV")
    p.add_argument("--normalized", action="store_true",
                   help="peak-normalize model and trace before comparing")
    p.add_argument("--floor", type=_float, default=None,
                   help="sensitivity floor (dB if --normalized, else dBm)")
    p.add_argument("--format", choices=("text", "csv", "tsv"), default="text")
    p.add_argument("--plot", default=None, metavar="PATH")

    p = sub.add_parser("patterns", help="write or check tabulated pattern files")
    p.add_argument("--check", default=None, metavar="FILE",
                   help="validate a pattern file and report its normalization offset")
    p.add_argument("--step", type=positive_float, default=1.0,
                   help="digitization step in degrees for the doughnut fixture")
    p.add_argument("--start", type=_float, default=-90.0)
    p.add_argument("--stop", type=_float, default=90.0)
    p.add_argument("--output", "-o", default=None)
    return parser


# -- helpers -------------------------------------------------------------------------


@contextlib.contextmanager
def _open_output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _budget(args: argparse.Namespace) -> LinkBudget:
    return LinkBudget(args.tx_power, args.frequency, args.gamma)


def _pattern(args: argparse.Namespace) -> Optional[TabulatedPattern]:
    if args.pattern is None:
        return None
    return load_pattern(args.pattern, interpolation=args.interp)


def _delim(fmt: str) -> str:
    return "\t" if fmt == "tsv" else ","


def _spec(args: argparse.Namespace, heights: Sequence[float], step: float) -> SweepSpec:
    config = Configuration(args.config)
    if config is Configuration.VHVH and args.pattern is not None:
        raise UnsupportedCombinationError(
            "VHVH is only defined for the analytic pattern; drop --pattern tabulated:..."
        )
    return SweepSpec(
        drone_heights=tuple(heights),
        receiver_height=args.receiver_height,
        l_range=args.l_range,
        step=step,
        configuration=config,
        pattern=_pattern(args),
    )


def _check_heights(heights: Sequence[float], receiver_height: float) -> None:
    for h in heights:
        if h <= receiver_height:
            raise _Exit(2, f"drone height {h:g} m must exceed receiver height {receiver_height:g} m")


def _sniff_sweep(path: str) -> bool:
    with open(path) as fh:
        for line in fh:
            if line.strip() and not line.lstrip().startswith("#"):
                return "height_m" in line
    return False


# -- commands --------------------------------------------------------------------------


def cmd_sweep(args: argparse.Namespace) -> int:
    _check_heights(args.heights, args.receiver_height)
    spec = _spec(args, args.heights, args.step)
    traces = run_sweep(spec, _budget(args))
    if args.floor is not None:
        traces = [apply_floor(t, args.floor) for t in traces]
    with _open_output(args.output) as out:
        write_sweep(traces, out, _delim(args.format), args.normalized, args.digits)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(traces, args.plot, normalized=args.normalized,
                   title=f"{spec.configuration.value}, gamma={args.gamma:g}")
    return 0


def cmd_critical(args: argparse.Namespace) -> int:
    _check_heights(args.heights, args.receiver_height)
    spec = _spec(args, args.heights, 1.0)
    budget = _budget(args)
    tx, rx = spec.antennas()
    d = _delim(args.format)
    with _open_output(args.output) as out:
        out.write(d.join(("height_m", "delta_h_m", "l_analytic_m", "l_numeric_m")) + "\n")
        for h in spec.drone_heights:
            dh = h - spec.receiver_height
            if spec.configuration is Configuration.VV:
                analytic = format_value(critical_distance_analytic(dh, args.gamma))
            else:
                analytic = ""
            numeric = critical_distance_numeric(budget, dh, tx, rx, spec.l_range,
                                                args.resolution)
            out.write(d.join((format_value(h), format_value(dh), analytic,
                              format_value(numeric))) + "\n")
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    if args.alphas is not None:
        alphas = args.alphas
    else:
        n = int(math.floor(90.0 / args.alpha_step + 1e-9))
        alphas = [round(i * args.alpha_step, 9) for i in range(n + 1)]
        if alphas[-1] != 90.0:
            alphas.append(90.0)
    rows = [selection_gain(a) for a in alphas]
    d = _delim(args.format)
    with _open_output(args.output) as out:
        out.write(d.join(("alpha_deg", "gain_rx_vertical", "gain_rx_horizontal",
                          "selected", "selected_gain")) + "\n")
        for a, g in zip(alphas, rows):
            out.write(d.join((format_value(a), format_value(g.gain_rx_vertical),
                              format_value(g.gain_rx_horizontal), g.selected.value,
                              format_value(g.selected_gain))) + "\n")
    if args.plot:
        from .plotting import plot_pattern_gains

        plot_pattern_gains(alphas, {
            "vertical rx": [g.gain_rx_vertical for g in rows],
            "horizontal rx": [g.gain_rx_horizontal for g in rows],
            "selected": [g.selected_gain for g in rows],
        }, args.plot)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    _check_heights([args.height], args.receiver_height)
    spec = _spec(args, [args.height], args.step)
    (model,) = run_sweep(spec, _budget(args))
    if _sniff_sweep(args.trace):
        measured = load_trace(args.trace, height=args.height, config=args.config)
    else:
        measured = load_trace(args.trace)
    if args.normalized:
        model, measured = normalize_trace(model), normalize_trace(measured)
    report = compare(model, measured, args.floor)
    rows = report.as_rows()
    with _open_output(args.output) as out:
        if args.format == "text":
            width = max(len(k) for k, _ in rows)
            for k, v in rows:
                out.write(f"{k:<{width}}  {v}\n")
        else:
            d = _delim(args.format)
            out.write(d.join(k for k, _ in rows) + "\n")
            out.write(d.join(v for _, v in rows) + "\n")
    if args.plot:
        from .plotting import plot_comparison

        plot_comparison(model, measured, report, args.plot)
    return 0


def cmd_patterns(args: argparse.Namespace) -> int:
    if args.check:
        pattern = load_pattern(args.check)
        lo, hi = pattern.angle_range
        with _open_output(args.output) as out:
            out.write(f"file            {args.check}\n")
            out.write(f"samples         {len(pattern.angles_deg)}\n")
            out.write(f"angle_range_deg {lo!r}:{hi!r}\n")
            out.write(f"offset_db       {pattern.offset_db!r}\n")
        return 0
    pattern = digitize_doughnut(args.step, args.start, args.stop)
    with _open_output(args.output) as out:
        save_pattern(pattern, out)
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "select": cmd_select,
    "compare": cmd_compare,
    "patterns": cmd_patterns,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _Exit as exc:
        parser.exit(exc.code, f"{parser.prog}: error: {exc}\n")
    except (A2GError, OSError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
