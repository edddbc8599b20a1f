# A command-line harness for the rate model.
#
# Usage:
#
# python -m plnc_rate inr --snr-db 20 --lambda 0.2 --r0 0.5
# python -m plnc_rate rate --snr-db 20 --lambda 7 --r0 0.5 --scheme both
# python -m plnc_rate validate-radius --r0 0.5 --lambda 0.2
# python -m plnc_rate sweep-r0 --snr-db 30 --lambda 7 --format json
# python -m plnc_rate sweep-density --snr-db 20 --threads 4
# python -m plnc_rate crossover --snr-db 30
# python -m plnc_rate mc-validate --trials 100000 --seed 42
#
# Every subcommand writes one report (CSV unless --format json) to standard
# output or to --output. Its header holds the resolved configuration.
#
# Options can also be read from a file of "key = value" lines given with
# --config; keys are the long option names. Options on the command line
# take precedence over the file. PLNC_RATE_THREADS and PLNC_RATE_SEED in
# the environment change the defaults of --threads and --seed.

import argparse
import logging
import math
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exceptions import NumericalError, ParameterDomainError
from .experiments import (
    default_r0_grid, find_crossover_density, optimize_r0, sweep_density, sweep_reserved_radius,
    validate_radius_sweep,
)
from .interference import inr_breakdown, inr_db, inr_toroidal_at_relay_unbounded, require_min_radius
from .montecarlo import compare_with_analytic, default_validation_grid, estimate_rates
from .ratemodel import distance_from_snr_db, end_to_end_rate, snr_linear_from_distance
from .report import write_report
from .types import (
    CountModel, McConfig, QuadratureSpec, RateMode, RateResult, Scheme, SweepGrid, SystemParams,
)
from .version import __version__

logger = logging.getLogger(__name__)

Row = Dict[str, Any]
Report = Tuple[List[str], List[Row]]

# Every option a subcommand may take, by long flag. These are also the keys
# accepted in a --config file.
OPTIONS: Dict[str, Dict[str, Any]] = {
    "--snr-db": dict(dest="snr_db", type=float, metavar="DB", help="link SNR of A-B and B-C in dB"),
    "--r-n": dict(dest="r_n", type=float, help="normalized distance between adjacent nodes"),
    "--lambda": dict(dest="density", type=float, metavar="LAMBDA", help="interferer density per unit area"),
    "--r0": dict(dest="r0", type=float, help="reserved-area radius"),
    "--big-r": dict(dest="big_r", type=float, metavar="R", help="network radius"),
    "--scheme": dict(dest="scheme", choices=("cr", "plnc", "both"), help="which scheme(s) to report"),
    "--r0-start": dict(dest="r0_start", type=float, help="first r0 of the search grid"),
    "--r0-stop": dict(dest="r0_stop", type=float, help="last r0 of the search grid"),
    "--r0-step": dict(dest="r0_step", type=float, help="r0 grid spacing"),
    "--lambda-start": dict(dest="lambda_start", type=float, help="first lambda"),
    "--lambda-stop": dict(dest="lambda_stop", type=float, help="last lambda"),
    "--lambda-step": dict(dest="lambda_step", type=float, help="lambda grid spacing"),
    "--big-r-start": dict(dest="big_r_start", type=float, help="first network radius"),
    "--big-r-stop": dict(dest="big_r_stop", type=float, help="last network radius"),
    "--big-r-step": dict(dest="big_r_step", type=float, help="network radius grid spacing"),
    "--mc": dict(dest="mc", action="store_true", help="add Monte Carlo rate rows"),
    "--trials": dict(dest="trials", type=int, help="Monte Carlo placements"),
    "--seed": dict(dest="seed", type=int, help="Monte Carlo seed"),
    "--count-model": dict(dest="count_model", choices=[m.value for m in CountModel],
                          help="number of interferers per placement"),
    "--mode": dict(dest="mode", choices=[m.value for m in RateMode], help="how Monte Carlo rates are formed"),
    "--quad-epsrel": dict(dest="quad_epsrel", type=float, help="quadrature relative tolerance"),
    "--quad-epsabs": dict(dest="quad_epsabs", type=float, help="quadrature absolute tolerance"),
    "--quad-limit": dict(dest="quad_limit", type=int, help="quadrature subdivision limit"),
    "--db": dict(dest="db", action="store_true", help="report INR columns in dB"),
    "--format": dict(dest="format", choices=("csv", "json"), help="report format (default csv)"),
    "--output": dict(dest="output", metavar="FILE", help="write the report here instead of standard output"),
    "--threads": dict(dest="threads", type=int, help="worker threads"),
}

# Options that do not change any reported number and stay out of the header.
PRESENTATION_OPTIONS = ("--format", "--output", "--threads")

_LINK = ("--snr-db", "--r-n")
_QUAD = ("--quad-epsrel", "--quad-epsabs", "--quad-limit")
_R0_GRID = ("--r0-start", "--r0-stop", "--r0-step")
_MC = ("--trials", "--seed", "--count-model")
_COMMON = ("--db", "--format", "--output", "--threads")

COMMANDS: Dict[str, Tuple[str, Tuple[str, ...]]] = {
    "inr": (
        "expected INR from every interference region and the scheme composites",
        _LINK + ("--lambda", "--r0", "--big-r") + _QUAD),
    "rate": (
        "end-to-end rate per unit area at one r0",
        _LINK + ("--lambda", "--r0", "--big-r", "--scheme", "--mc", "--mode") + _MC + _QUAD),
    "validate-radius": (
        "the relay's INR against the network radius, next to an unbounded network",
        ("--lambda", "--r0", "--big-r-start", "--big-r-stop", "--big-r-step")),
    "sweep-r0": (
        "both schemes' rate per unit area along a grid of r0",
        _LINK + ("--lambda", "--big-r") + _R0_GRID + _QUAD),
    "optimize-r0": (
        "the r0 that maximizes each scheme's rate per unit area",
        _LINK + ("--lambda", "--big-r", "--scheme") + _R0_GRID + _QUAD),
    "sweep-density": (
        "both schemes' optimized rate per unit area along a grid of lambda",
        _LINK + ("--big-r", "--lambda-start", "--lambda-stop", "--lambda-step") + _R0_GRID + _QUAD),
    "crossover": (
        "the density where optimized PLNC and CR meet",
        _LINK + ("--big-r", "--lambda-start", "--lambda-stop") + _R0_GRID + _QUAD),
    "mc-validate": (
        "analytic INRs against the Monte Carlo estimate of the same regions",
        _LINK + ("--lambda", "--r0", "--big-r") + _MC + _QUAD),
}

_TRUE_WORDS = ("1", "true", "yes", "on")
_FALSE_WORDS = ("0", "false", "no", "off")


def _config_key(flag: str) -> str:
    return flag.lstrip("-").replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="count", help="log progress (-vv for debugging detail)")
    common.add_argument("--config", metavar="FILE", help="read options from a key = value file")

    parser = argparse.ArgumentParser(
        prog="plnc_rate",
        description="Rate per unit area of PLNC and CR two-way relaying under interference.",
        argument_default=argparse.SUPPRESS)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for name, (description, flags) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=description, description=description, parents=[common],
                                    argument_default=argparse.SUPPRESS)
        link = sub.add_mutually_exclusive_group() if _LINK[0] in flags else None
        for flag in flags + _COMMON:
            target = link if link is not None and flag in _LINK else sub
            target.add_argument(flag, **OPTIONS[flag])
    return parser


def read_config_file(path: str) -> Dict[str, str]:
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise ParameterDomainError(f"Cannot read the config file {path}: {e.strerror}.") from e

    values: Dict[str, str] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterDomainError(f"{path}, line {lineno}: expected key = value.")
        key, value = (part.strip() for part in line.split("=", 1))
        values["--" + key.replace("_", "-")] = value
    return values


def config_arguments(command: str, values: Dict[str, str], path: str) -> List[str]:
    """Turn config file entries into command-line arguments for `command`.
    Keys that belong to other subcommands are skipped, so one file can
    configure several of them."""
    accepted = COMMANDS[command][1] + _COMMON
    args: List[str] = []
    for flag, value in values.items():
        if flag not in OPTIONS:
            raise ParameterDomainError(f"Unknown key {_config_key(flag)!r} in the config file {path}.")
        if flag not in accepted:
            logger.debug("Ignoring %s from %s, which %s does not take", flag, path, command)
            continue
        if OPTIONS[flag].get("action") == "store_true":
            if value.lower() in _TRUE_WORDS:
                args.append(flag)
            elif value.lower() not in _FALSE_WORDS:
                raise ParameterDomainError(f"{_config_key(flag)} must be true or false, got {value!r}.")
        else:
            args.extend([flag, value])
    return args


def _environment_int(name: str, default: int) -> int:
    if name not in os.environ:
        return default
    try:
        return int(os.environ[name])
    except ValueError as e:
        raise ParameterDomainError(f"{name} must be an integer, got {os.environ[name]!r}.") from e


def default_options() -> Dict[str, Any]:
    from . import MC_SEED, MC_TRIALS, NETWORK_RADIUS, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT, THREADS
    options: Dict[str, Any] = {spec["dest"]: None for spec in OPTIONS.values()}
    options.update({
        "big_r": NETWORK_RADIUS,
        "scheme": "both",
        "mc": False,
        "trials": MC_TRIALS,
        "seed": _environment_int("PLNC_RATE_SEED", MC_SEED),
        "count_model": CountModel.POISSON.value,
        "mode": RateMode.MEAN_INR.value,
        "quad_epsrel": QUAD_EPSREL,
        "quad_epsabs": QUAD_EPSABS,
        "quad_limit": QUAD_LIMIT,
        "db": False,
        "format": "csv",
        "threads": _environment_int("PLNC_RATE_THREADS", THREADS),
        "verbose": 0,
        "config": None,
    })
    return options


def parse_options(argv: Sequence[str]) -> argparse.Namespace:
    """Module defaults, then the environment, then the config file, then
    the command line, each overriding the one before."""
    parser = build_parser()
    given = vars(parser.parse_args(argv))
    options = default_options()
    if given.get("config") is not None:
        path = given["config"]
        from_file = vars(parser.parse_args(
            [given["command"]] + config_arguments(given["command"], read_config_file(path), path)))
        if "snr_db" in given or "r_n" in given:
            from_file.pop("snr_db", None)
            from_file.pop("r_n", None)
        options.update(from_file)
    options.update(given)
    return argparse.Namespace(**options)


def resolved_config(args: argparse.Namespace) -> Dict[str, Any]:
    """The header of a report: everything that determines its numbers."""
    config: Dict[str, Any] = {"command": args.command, "version": __version__, "seed": args.seed}
    for flag in COMMANDS[args.command][1] + _COMMON:
        if flag in PRESENTATION_OPTIONS:
            continue
        value = getattr(args, OPTIONS[flag]["dest"])
        if value is not None:
            config[_config_key(flag)] = value
    return config


def _require(args: argparse.Namespace, dest: str, flag: str) -> Any:
    value = getattr(args, dest)
    if value is None:
        raise ParameterDomainError(f"{args.command} needs {flag}.")
    return value


def _link_distance(args: argparse.Namespace) -> float:
    if args.snr_db is not None:
        return distance_from_snr_db(args.snr_db)
    if args.r_n is not None:
        return float(args.r_n)
    raise ParameterDomainError(f"{args.command} needs the link: give --snr-db or --r-n.")


def _link_snr_db(args: argparse.Namespace) -> float:
    if args.snr_db is not None:
        return float(args.snr_db)
    return 10 * math.log10(snr_linear_from_distance(_link_distance(args)))


def _system_params(args: argparse.Namespace) -> SystemParams:
    params = SystemParams(
        r_n=_link_distance(args),
        r0=_require(args, "r0", "--r0"),
        big_r=args.big_r,
        density=_require(args, "density", "--lambda"))
    require_min_radius(params)
    return params


def _quadrature(args: argparse.Namespace) -> QuadratureSpec:
    return QuadratureSpec(epsrel=args.quad_epsrel, epsabs=args.quad_epsabs, limit=args.quad_limit)


def _mc_config(args: argparse.Namespace) -> McConfig:
    return McConfig(trials=args.trials, seed=args.seed, count_model=CountModel(args.count_model),
                    threads=args.threads)


def _schemes(args: argparse.Namespace) -> List[Scheme]:
    if args.scheme == "both":
        return [Scheme.CR, Scheme.PLNC]
    return [Scheme(args.scheme)]


def _inr(args: argparse.Namespace, value: float) -> float:
    return inr_db(value) if args.db else value


def _r0_grid(args: argparse.Namespace, r_n: float) -> Optional[SweepGrid]:
    if args.r0_start is None and args.r0_stop is None and args.r0_step is None:
        return None
    default = default_r0_grid(r_n)
    return SweepGrid(
        start=default.start if args.r0_start is None else args.r0_start,
        stop=default.stop if args.r0_stop is None else args.r0_stop,
        step=default.step if args.r0_step is None else args.r0_step)


def _lambda_grid(args: argparse.Namespace) -> SweepGrid:
    from . import LAMBDA_START, LAMBDA_STEP, LAMBDA_STOP
    return SweepGrid(
        start=LAMBDA_START if args.lambda_start is None else args.lambda_start,
        stop=LAMBDA_STOP if args.lambda_stop is None else args.lambda_stop,
        step=LAMBDA_STEP if args.lambda_step is None else args.lambda_step)


def _big_r_grid(args: argparse.Namespace, r0: float) -> SweepGrid:
    from . import NETWORK_RADIUS
    stop = NETWORK_RADIUS if args.big_r_stop is None else args.big_r_stop
    step = 0.5 if args.big_r_step is None else args.big_r_step
    start = args.big_r_start
    if start is None:
        # Count back from stop so that the last row is the stop radius itself.
        start = stop - (math.ceil(round((stop - r0) / step, 9)) - 1) * step
    return SweepGrid(start=start, stop=stop, step=step)


def _rate_row(args: argparse.Namespace, rate: RateResult, scheme_label: Optional[str] = None) -> Row:
    row = rate.as_row()
    row["inr_relay"] = _inr(args, row["inr_relay"])
    row["inr_end"] = _inr(args, row["inr_end"])
    if scheme_label is not None:
        row["scheme"] = scheme_label
    return row


def command_inr(args: argparse.Namespace) -> Report:
    params = _system_params(args)
    breakdown = inr_breakdown(params, _quadrature(args))
    rows = [{"quantity": name, "value": _inr(args, value)} for name, value in breakdown.as_dict().items()]
    rows.append({"quantity": "toro_at_relay_unbounded", "value": _inr(args, inr_toroidal_at_relay_unbounded(params))})
    return ["quantity", "value"], rows


def command_rate(args: argparse.Namespace) -> Report:
    params = _system_params(args)
    quad = _quadrature(args)
    rows = [_rate_row(args, end_to_end_rate(scheme, params, quad)) for scheme in _schemes(args)]
    if args.mc:
        mc = _mc_config(args)
        for scheme in _schemes(args):
            estimate = estimate_rates(params, scheme, mc, RateMode(args.mode))
            rows.append(_rate_row(args, estimate.rate, f"{scheme.value}-mc"))
    return ["scheme", "rate_ab_or_ac", "rate_cb_or_ca", "rate_per_area", "inr_relay", "inr_end", "area"], rows


def command_validate_radius(args: argparse.Namespace) -> Report:
    r0 = _require(args, "r0", "--r0")
    records = validate_radius_sweep(r0, _require(args, "density", "--lambda"), _big_r_grid(args, r0))
    rows = [{
        "big_r": record.big_r,
        "inr_finite": _inr(args, record.inr_finite),
        "inr_unbounded": _inr(args, record.inr_unbounded),
        "relative_gap": record.relative_gap,
    } for record in records]
    return ["big_r", "inr_finite", "inr_unbounded", "relative_gap"], rows


def command_sweep_r0(args: argparse.Namespace) -> Report:
    records = sweep_reserved_radius(
        _link_snr_db(args), _require(args, "density", "--lambda"), big_r=args.big_r,
        grid=_r0_grid(args, _link_distance(args)), quad=_quadrature(args), threads=args.threads)
    rows = [{
        "r0": record.x,
        "scheme": record.scheme.value,
        "rate_per_area": record.rate_per_area,
        "inr_relay": _inr(args, record.inr_at_relay),
        "inr_end": _inr(args, record.inr_at_end),
        "area": record.reserved_area,
    } for record in records]
    return ["r0", "scheme", "rate_per_area", "inr_relay", "inr_end", "area"], rows


def command_optimize_r0(args: argparse.Namespace) -> Report:
    density = _require(args, "density", "--lambda")
    search = _r0_grid(args, _link_distance(args))
    rows = []
    for scheme in _schemes(args):
        best_r0, rate = optimize_r0(_link_snr_db(args), density, args.big_r, scheme, search, _quadrature(args))
        row = _rate_row(args, rate)
        rows.append({"scheme": row["scheme"], "best_r0": best_r0, "rate_per_area": row["rate_per_area"],
                     "inr_relay": row["inr_relay"], "inr_end": row["inr_end"], "area": row["area"]})
    return ["scheme", "best_r0", "rate_per_area", "inr_relay", "inr_end", "area"], rows


def command_sweep_density(args: argparse.Namespace) -> Report:
    records = sweep_density(
        _link_snr_db(args), big_r=args.big_r, grid=_lambda_grid(args),
        search=_r0_grid(args, _link_distance(args)), quad=_quadrature(args), threads=args.threads)
    rows = [{
        "lambda": record.x,
        "scheme": record.scheme.value,
        "best_r0": record.best_r0,
        "rate_per_area": record.rate_per_area,
        "inr_relay": _inr(args, record.inr_at_relay),
        "inr_end": _inr(args, record.inr_at_end),
        "area": record.reserved_area,
    } for record in records]
    return ["lambda", "scheme", "best_r0", "rate_per_area", "inr_relay", "inr_end", "area"], rows


def command_crossover(args: argparse.Namespace) -> Report:
    from . import LAMBDA_START, LAMBDA_STOP
    low = LAMBDA_START if args.lambda_start is None else args.lambda_start
    high = LAMBDA_STOP if args.lambda_stop is None else args.lambda_stop
    result = find_crossover_density(
        _link_snr_db(args), (low, high), big_r=args.big_r,
        search=_r0_grid(args, _link_distance(args)), quad=_quadrature(args))
    rows: List[Row] = [
        {"quantity": "lambda_star", "value": "none" if result.lambda_star is None else result.lambda_star},
        {"quantity": "dominant", "value": "none" if result.dominant is None else result.dominant.value},
        {"quantity": "lambda_low", "value": low},
        {"quantity": "lambda_high", "value": high},
    ]
    return ["quantity", "value"], rows


def command_mc_validate(args: argparse.Namespace) -> Report:
    if args.r0 is None and args.density is None and args.snr_db is None and args.r_n is None:
        grid = default_validation_grid(args.big_r)
    else:
        grid = [_system_params(args)]
    rows = [row.as_row() for row in compare_with_analytic(grid, _mc_config(args), _quadrature(args))]
    return ["r_n", "r0", "big_r", "lambda", "quantity", "analytic", "mc_mean", "mc_stderr", "z", "pass"], rows


HANDLERS = {
    "inr": command_inr,
    "rate": command_rate,
    "validate-radius": command_validate_radius,
    "sweep-r0": command_sweep_r0,
    "optimize-r0": command_optimize_r0,
    "sweep-density": command_sweep_density,
    "crossover": command_crossover,
    "mc-validate": command_mc_validate,
}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _emit(args: argparse.Namespace, columns: List[str], rows: List[Row]) -> None:
    config = resolved_config(args)
    if args.output is None:
        write_report(args.format, config, columns, rows, sys.stdout)
        return
    with open(args.output, "w", encoding="utf-8", newline="") as stream:
        write_report(args.format, config, columns, rows, stream)


def run(argv: Sequence[str]) -> int:
    """Run one subcommand and return its exit status: 0 on success, 2 for
    invalid configuration or parameters, 1 when a numerical evaluation
    fails. Usage errors exit through argparse with status 2."""
    try:
        args = parse_options(argv)
        _configure_logging(args.verbose)
        if args.threads < 1:
            raise ParameterDomainError(f"threads must be at least 1, got {args.threads}.")
        columns, rows = HANDLERS[args.command](args)
        _emit(args, columns, rows)
    except ParameterDomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    # The argv argument is for tests.
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
