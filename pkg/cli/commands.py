"""
nmcd subcommands.
Implements detect, simulate, bench and methods on top of the method registry.
"""

import argparse
import logging
import math
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from joblib import Parallel, delayed

from core.errors import InputError
from core.metrics import rand_index, xi
from core.modelselect import DEFAULT_ZETA_EXPONENT
from core.simgen import ErrorDist, SimModel, SimSpec, generate, segment_spacing
from methods import load_methods, registry
from methods.nmcd_method import NmcdMethod
from utils.config import Settings

from .io import SCHEMA_VERSION, detection_record, finite_or_none, format_values, read_values, write_json, write_segments_csv

logger = logging.getLogger("NMCD.CLI.Commands")

SUMMARY_COLUMNS = [
    "method", "reps", "k_true",
    "xi_over_mean", "xi_over_sd", "xi_under_mean", "xi_under_sd", "xi_sum_mean", "xi_sum_sd",
    "abs_k_err_mean", "abs_k_err_sd", "rand_mean", "rand_sd",
    "runtime_ms_mean", "missing_xi", "schema_version",
]


def setup_commands(subparsers, settings: Settings) -> None:
    """Set up and register the subcommands on an argparse subparsers object."""
    method_names = registry.names()

    detect = subparsers.add_parser("detect", help="Detect change-points in a data file")
    detect.add_argument("input", help="One value per line, or a CSV with --column; '-' reads stdin")
    detect.add_argument("--column", help="CSV column holding the observations")
    detect.add_argument("--method", default="nmcd", choices=method_names)
    detect.add_argument("--k", type=int, help="Known number of change-points")
    detect.add_argument("--max-k", type=int, dest="max_k", help="Upper bound K_bar scanned by the BIC")
    detect.add_argument("--zeta", type=float, help="Penalty per change-point")
    detect.add_argument("--zeta-exponent", type=float, dest="zeta_exponent",
                        help=f"Exponent of log n in the default penalty (default {DEFAULT_ZETA_EXPONENT})")
    detect.add_argument("--zeta-scale", type=float, dest="zeta_scale", help="Multiplier on the default penalty")
    detect.add_argument("--window", type=int, help="Screening window half-width")
    detect.add_argument("--window-scale", type=float, dest="window_scale", help="Multiplier on the default window")
    detect.add_argument("--no-screening", action="store_true", dest="no_screening")
    detect.add_argument("--no-correction", action="store_true", dest="no_correction")
    detect.add_argument("--weight", choices=["zhang", "uniform"])
    detect.add_argument("--allow-zero", action="store_true", dest="allow_zero")
    detect.add_argument("--min-size", type=int, dest="min_size", help="Smallest segment (least-squares methods)")
    detect.add_argument("--n-jobs", type=_n_jobs, dest="n_jobs", help="Threads for pair-cost evaluation")
    detect.add_argument("--output", default="json", choices=["json", "csv"])
    detect.set_defaults(handler=cmd_detect)

    simulate = subparsers.add_parser("simulate", help="Simulate a data set with known change-points")
    _add_sim_arguments(simulate, settings)
    simulate.add_argument("--out", help="Data file (one value per line); stdout when omitted")
    simulate.add_argument("--truth", help="Sidecar JSON path (default <out>.truth.json)")
    simulate.set_defaults(handler=cmd_simulate)

    bench = subparsers.add_parser("bench", help="Monte Carlo benchmark of detection methods")
    _add_sim_arguments(bench, settings)
    bench.add_argument("--reps", type=int, default=100)
    bench.add_argument("--methods", default="nmcd", help=f"Comma-separated, from: {', '.join(method_names)}")
    bench.add_argument("--known-k", action="store_true", dest="known_k", help="Give every method the true K")
    bench.add_argument("--max-k", type=int, dest="max_k")
    bench.add_argument("--zeta-scale", type=float, dest="zeta_scale")
    bench.add_argument("--window-scale", type=float, dest="window_scale")
    bench.add_argument("--n-jobs", type=_n_jobs, dest="n_jobs", default=settings.n_jobs,
                       help="Parallel replication workers")
    bench.add_argument("--out", help="Summary CSV path; stdout when omitted")
    bench.add_argument("--raw", help="Per-replication CSV path")
    bench.set_defaults(handler=cmd_bench)

    methods = subparsers.add_parser("methods", help="List the available detection methods")
    methods.set_defaults(handler=cmd_methods)

    logger.debug("Subcommands registered")


def _n_jobs(text: str) -> int:
    """joblib worker count: positive, or negative to count back from the CPU total."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if value == 0:
        raise argparse.ArgumentTypeError("must be non-zero (use -1 for all CPUs)")
    return value


def _add_sim_arguments(parser, settings: Settings) -> None:
    parser.add_argument("--model", default=SimModel.BLOCKS_I.value, choices=[m.value for m in SimModel])
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--sigma", type=float, default=0.5)
    parser.add_argument("--error", default=ErrorDist.NORMAL.value, choices=[e.value for e in ErrorDist])
    parser.add_argument("--seed", type=int, default=settings.seed)


def _sim_spec(args) -> SimSpec:
    return SimSpec(model=args.model, n=args.n, sigma=args.sigma, error=args.error, seed=args.seed)


def _detect_options(args) -> Dict[str, Any]:
    """Method keyword options for the flags actually given on the command line."""
    options = {
        "known_k": args.k,
        "k_bar": args.max_k,
        "zeta": args.zeta,
        "zeta_exponent": args.zeta_exponent,
        "zeta_scale": args.zeta_scale,
        "window": args.window,
        "window_scale": args.window_scale,
        "screening": False if args.no_screening else None,
        "correction": False if args.no_correction else None,
        "weight": args.weight,
        "allow_zero": True if args.allow_zero else None,
        "min_size": args.min_size,
        "n_jobs": args.n_jobs,
    }
    return {key: value for key, value in options.items() if value is not None}


def cmd_detect(args) -> int:
    """Run one detection and write JSON (or per-index CSV) to stdout."""
    method = registry.get_method(args.method)
    if method is None:
        raise InputError(f"unknown method {args.method!r}")
    options = _detect_options(args)
    unsupported = [key for key in options if not method.accepts(key)]
    if unsupported:
        flags = ", ".join("--" + key.replace("_", "-") for key in unsupported)
        raise InputError(f"method {method.name} does not take {flags}")

    values = read_values(args.input, args.column)
    start = time.perf_counter()
    result = method.execute(values, **options)
    runtime_ms = (time.perf_counter() - start) * 1000.0

    echo: Dict[str, Any] = {"method": method.name}
    if isinstance(method, NmcdMethod):
        echo.update(method.build_config(**options).as_dict())
    else:
        echo.update(options)
    echo["window"] = result.window
    echo["zeta"] = finite_or_none(result.zeta)
    echo["k_bar"] = result.k_bar

    if args.output == "csv":
        write_segments_csv(result, sys.stdout)
    else:
        write_json(detection_record(result, echo, runtime_ms), sys.stdout)
    return 0


def _default_truth_path(out: Optional[str]) -> Optional[str]:
    return f"{out}.truth.json" if out else None


def cmd_simulate(args) -> int:
    """Write a simulated series and a sidecar with its true change-points."""
    spec = _sim_spec(args)
    data = generate(spec)
    text = format_values(data.values)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        logger.info(f"Wrote {spec.n} values to {args.out}")
    else:
        sys.stdout.write(text)

    truth_path = args.truth or _default_truth_path(args.out)
    if truth_path:
        sidecar = {
            "schema_version": SCHEMA_VERSION,
            "spec": {
                "model": spec.model.value,
                "n": spec.n,
                "sigma": spec.sigma,
                "error": spec.error.value,
                "seed": spec.seed,
            },
            "truth": list(data.truth.change_points),
            "k": data.truth.k,
            "min_spacing": segment_spacing(data.truth),
        }
        with open(truth_path, "w", encoding="utf-8", newline="\n") as handle:
            write_json(sidecar, handle)
        logger.info(f"Wrote truth ({data.truth.k} change-points) to {truth_path}")
    return 0


def run_replication(spec: SimSpec, replication: int, method_names: Sequence[str],
                    known_k: bool, options: Dict[str, Any]) -> List[Dict[str, Any]]:
    """
    Simulate replication r and score every method on it.

    Returns one row per method. xi columns are NaN when a method returns
    no change-points.
    """
    if not registry.names():
        load_methods()
    data = generate(spec, replication)
    truth = data.truth
    rows = []
    for name in method_names:
        method = registry.get_method(name)
        kwargs = dict(options)
        if known_k:
            kwargs["known_k"] = truth.k
        start = time.perf_counter()
        result = method.execute(data.values, **kwargs)
        runtime_ms = (time.perf_counter() - start) * 1000.0
        estimate = result.change_points
        if estimate:
            xi_over = float(xi(estimate, truth.change_points))
            xi_under = float(xi(truth.change_points, estimate))
        else:
            xi_over = xi_under = math.nan
        rows.append({
            "rep": replication,
            "method": name,
            "k_true": truth.k,
            "k_hat": result.k_hat,
            "xi_over": xi_over,
            "xi_under": xi_under,
            "xi_sum": xi_over + xi_under,
            "abs_k_err": abs(result.k_hat - truth.k),
            "rand": rand_index(result.segmentation, truth),
            "runtime_ms": runtime_ms,
        })
    return rows


def summarize(raw: pd.DataFrame) -> pd.DataFrame:
    """One row per method: means, sample standard deviations and missing-xi counts."""
    grouped = raw.groupby("method", sort=False)
    summary = grouped.agg(
        reps=("rep", "count"),
        k_true=("k_true", "mean"),
        xi_over_mean=("xi_over", "mean"),
        xi_over_sd=("xi_over", "std"),
        xi_under_mean=("xi_under", "mean"),
        xi_under_sd=("xi_under", "std"),
        xi_sum_mean=("xi_sum", "mean"),
        xi_sum_sd=("xi_sum", "std"),
        abs_k_err_mean=("abs_k_err", "mean"),
        abs_k_err_sd=("abs_k_err", "std"),
        rand_mean=("rand", "mean"),
        rand_sd=("rand", "std"),
        runtime_ms_mean=("runtime_ms", "mean"),
        missing_xi=("xi_sum", lambda column: int(column.isna().sum())),
    ).reset_index()
    summary["schema_version"] = SCHEMA_VERSION
    return summary[SUMMARY_COLUMNS]


def cmd_bench(args) -> int:
    """Run replications in parallel and write the per-method summary CSV."""
    method_names = [name.strip() for name in args.methods.split(",") if name.strip()]
    if not method_names:
        raise InputError("--methods is empty")
    unknown = [name for name in method_names if registry.get_method(name) is None]
    if unknown:
        raise InputError(f"unknown method(s): {', '.join(unknown)}; available: {', '.join(registry.names())}")
    if args.reps < 1:
        raise InputError(f"--reps must be >= 1, got {args.reps}")
    if args.known_k and args.max_k is not None:
        raise InputError("--known-k and --max-k cannot be combined")
    if args.n_jobs == 0:
        raise InputError("--n-jobs must be non-zero (NMCD_N_JOBS=0 in the environment?)")
    spec = _sim_spec(args)

    options = {"k_bar": args.max_k, "zeta_scale": args.zeta_scale, "window_scale": args.window_scale}
    options = {key: value for key, value in options.items() if value is not None}

    logger.info(f"Benchmarking {', '.join(method_names)} on {spec.model.value} "
                f"(n={spec.n}, reps={args.reps}, n_jobs={args.n_jobs})")
    start = time.perf_counter()
    batches = Parallel(n_jobs=args.n_jobs)(
        delayed(run_replication)(spec, rep, method_names, args.known_k, options)
        for rep in range(args.reps)
    )
    raw = pd.DataFrame([row for batch in batches for row in batch])
    logger.info(f"Finished {args.reps} replications in {time.perf_counter() - start:.1f} s")

    if args.raw:
        raw.to_csv(args.raw, index=False, na_rep="", lineterminator="\n")
    summary = summarize(raw)
    if args.out:
        summary.to_csv(args.out, index=False, na_rep="", lineterminator="\n")
    else:
        summary.to_csv(sys.stdout, index=False, na_rep="", lineterminator="\n")
    return 0


def cmd_methods(args) -> int:
    """Print the registered methods, their parameters and example command lines."""
    for method in registry.list_methods():
        print(f"{method.name}: {method.description}")
        for parameter in method.parameters:
            print(f"    {parameter['name']} ({parameter['type']}, default {parameter['default']}): "
                  f"{parameter['description']}")
        for example in method.examples:
            print(f"    e.g. {example}")
    return 0
