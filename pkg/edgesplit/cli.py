"""Command-line interface.

Exit codes:
    0 - Success
    1 - Unexpected error
    2 - Validation failure (instance, sweep or grid specification)
    3 - Degenerate domain (no model parameter fits on the downlink)
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

from .config import load_instance
from .const import (
    BASELINE_ALIASES,
    BASELINE_FIXED_STRATEGY,
    DEFAULT_FIXED_RHO,
    DEFAULT_SWEEP_CONCURRENCY,
    ENV_LOG_LEVEL,
    ENV_SWEEP_CONCURRENCY,
    EXIT_DEGENERATE,
    EXIT_ERROR,
    EXIT_INVALID,
    EXIT_OK,
    SWEEP_PARAMS,
)
from .diagnostics import get_instance_diagnostics
from .envelope import build_envelope
from .export import (
    dump_json,
    open_target,
    write_envelope_csv,
    write_result_json,
    write_sweep_csv,
    write_trace_csv,
)
from .model import (
    DegenerateDomain,
    DomainError,
    GridBudgetError,
    InstanceValidationError,
    SweepSpecError,
)
from .oracle import GridSpec, brute_force
from .solver import solve
from .sweep import (
    Baseline,
    FixedStrategyBaseline,
    NoneUpdateBaseline,
    SweepSpec,
    run_sweep,
)

_LOGGER = logging.getLogger(__name__)


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level: int | str = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = os.getenv(ENV_LOG_LEVEL, "WARNING").upper()
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _cmd_validate(args: argparse.Namespace) -> int:
    instance, options = load_instance(args.instance)
    try:
        envelope = build_envelope(instance, scan_points=options.crossing_scan_points)
    except DegenerateDomain:
        envelope = None
    with open_target(args.out) as handle:
        dump_json(get_instance_diagnostics(instance, envelope), handle)
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    instance, options = load_instance(args.instance)
    options = options.merged(
        segment_samples=args.segment_samples,
        crossing_scan_points=args.scan_points,
    )
    result = solve(instance, options)
    with open_target(args.out) as handle:
        write_result_json(result, handle)
    if result.diagnostics.no_downlink:
        return EXIT_DEGENERATE
    return EXIT_OK


def _cmd_envelope(args: argparse.Namespace) -> int:
    instance, options = load_instance(args.instance)
    options = options.merged(crossing_scan_points=args.scan_points)
    envelope = build_envelope(instance, scan_points=options.crossing_scan_points)
    with open_target(args.out) as handle:
        write_envelope_csv(envelope.sample(args.samples), handle)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    instance, options = load_instance(args.instance)
    grid = GridSpec.parse(args.grid)
    budget = args.budget if args.budget is not None else options.oracle_budget
    result = brute_force(instance, grid, budget=budget, trace=args.trace is not None)
    best = result.best
    summary = {
        "M": best.m,
        "rho": best.rho,
        "q": best.q,
        "T_u": best.t_u,
        "T_d": best.t_d,
        "mAP_star": best.map_star,
        "mAP": best.map_value,
        "evaluated": result.evaluated,
        "feasible": result.feasible,
    }
    with open_target(args.out) as handle:
        dump_json(summary, handle)
    if args.trace is not None and result.trace is not None:
        with open_target(args.trace) as handle:
            write_trace_csv(result.trace, handle)
    return EXIT_OK


def _baselines(
    args: argparse.Namespace, levels: tuple[float, ...], m_max: float
) -> tuple[Baseline, ...]:
    baselines: list[Baseline] = []
    for raw in filter(None, (name.strip() for name in args.baselines.split(","))):
        name = BASELINE_ALIASES.get(raw)
        if name is None:
            raise SweepSpecError(
                f"Unknown baseline {raw!r}, expected one of {sorted(BASELINE_ALIASES)}"
            )
        if name == BASELINE_FIXED_STRATEGY:
            baselines.append(
                FixedStrategyBaseline(
                    rho_fix=args.fixed_rho,
                    q_fix=args.fixed_q if args.fixed_q is not None else levels[0],
                    m_fix=args.fixed_m if args.fixed_m is not None else m_max / 2,
                )
            )
        else:
            baselines.append(NoneUpdateBaseline())
    return tuple(baselines)


def _cmd_sweep(args: argparse.Namespace) -> int:
    instance, options = load_instance(args.instance)
    options = options.merged(segment_samples=args.segment_samples)
    baselines = _baselines(args, instance.level_values, instance.params.max_params)
    output = Path(args.out) if args.out and args.out != "-" else None
    if args.values:
        try:
            values = tuple(float(v) for v in args.values.split(","))
        except ValueError as err:
            raise SweepSpecError(f"Bad value list {args.values!r}") from err
        spec = SweepSpec(args.param, values, baselines, output)
    else:
        if args.start is None or args.stop is None:
            raise SweepSpecError("Give --values or both --from and --to")
        spec = SweepSpec.from_range(
            args.param,
            args.start,
            args.stop,
            args.steps,
            log=args.log,
            baselines=baselines,
            output=output,
        )

    concurrency = args.concurrency or int(
        os.getenv(ENV_SWEEP_CONCURRENCY, str(DEFAULT_SWEEP_CONCURRENCY))
    )
    rows = run_sweep(instance, spec, options=options, concurrency=concurrency)
    with open_target(spec.output) as handle:
        write_sweep_csv(rows, spec.baseline_names, handle)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per verb."""
    parser = argparse.ArgumentParser(
        prog="edgesplit",
        description=(
            "Split a time-division channel between sensory-data upload and "
            "model-parameter download."
        ),
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging (-vv debug)"
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    validate = verbs.add_parser("validate", help="Check an instance file")
    validate.add_argument("instance")
    validate.add_argument("--out", help="Diagnostics JSON path (default stdout)")
    validate.set_defaults(handler=_cmd_validate)

    solve_cmd = verbs.add_parser("solve", help="Find the optimal allocation")
    solve_cmd.add_argument("instance")
    solve_cmd.add_argument("--out", help="Result JSON path (default stdout)")
    solve_cmd.add_argument("--segment-samples", type=int)
    solve_cmd.add_argument("--scan-points", type=int)
    solve_cmd.set_defaults(handler=_cmd_solve)

    envelope = verbs.add_parser("envelope", help="Sample the boundary function")
    envelope.add_argument("instance")
    envelope.add_argument("--samples", type=int, default=1001)
    envelope.add_argument("--out", help="CSV path (default stdout)")
    envelope.add_argument("--scan-points", type=int)
    envelope.set_defaults(handler=_cmd_envelope)

    oracle = verbs.add_parser("oracle", help="Exhaustive grid search")
    oracle.add_argument("instance")
    oracle.add_argument("--grid", required=True, help="nM,nRho")
    oracle.add_argument("--trace", help="Write every feasible candidate to CSV")
    oracle.add_argument("--budget", type=int)
    oracle.add_argument("--out", help="Best-candidate JSON path (default stdout)")
    oracle.set_defaults(handler=_cmd_oracle)

    sweep = verbs.add_parser("sweep", help="Solve over a range of one parameter")
    sweep.add_argument("instance")
    sweep.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    sweep.add_argument("--from", dest="start", type=float)
    sweep.add_argument("--to", dest="stop", type=float)
    sweep.add_argument("--steps", type=int, default=20)
    sweep.add_argument("--values", help="Comma-separated values instead of a range")
    sweep.add_argument("--log", action="store_true", help="Geometric spacing")
    sweep.add_argument("--baselines", default="", help="none-update,fixed")
    sweep.add_argument("--fixed-rho", type=float, default=DEFAULT_FIXED_RHO)
    sweep.add_argument("--fixed-q", type=float)
    sweep.add_argument("--fixed-m", type=float)
    sweep.add_argument("--segment-samples", type=int)
    sweep.add_argument("--concurrency", type=int)
    sweep.add_argument("--out", help="CSV path (default stdout)")
    sweep.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        return int(args.handler(args))
    except InstanceValidationError as err:
        for violation in err.violations:
            print(f"{type(violation).__name__}: {violation}", file=sys.stderr)
        return EXIT_INVALID
    except (SweepSpecError, DomainError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INVALID
    except DegenerateDomain as err:
        print(f"DegenerateDomain: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except GridBudgetError as err:
        print(f"GridBudgetError: {err}", file=sys.stderr)
        return EXIT_ERROR
    except Exception:
        _LOGGER.exception("Unexpected error")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
