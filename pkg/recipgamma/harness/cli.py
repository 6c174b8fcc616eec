import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from recipgamma.core.special_fns import (
    verify_gamma_power_identity,
    verify_k_level_identity,
    verify_multiplication_identity,
)
from recipgamma.harness.datagen import gen_data, scenario_label, write_dataset
from recipgamma.harness.presets import PRESETS, get_preset
from recipgamma.harness.report import compare_methods, read_report, rows_frame, to_wide, write_report
from recipgamma.harness.runner import run_experiment
from recipgamma.harness.spec import ExperimentSpec, load_specs
from recipgamma.harness.validation.errors import ValidationFailure
from recipgamma.utils.constants import IDENTITY_TOLERANCE
from recipgamma.utils.errors import RecipGammaError
from recipgamma.utils.logging import attach_stream_handler, logger
from recipgamma.utils.types import ReportFormat

GRID_M = (1, 2, 3, 5, 10, 50, 100)
GRID_XI = (0.01, 0.1, 1.0, 10.0, 100.0)
GRID_K = (0, 1, 3, 5)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def identity_grid(
    ms: Sequence[int] = GRID_M,
    xis: Sequence[float] = GRID_XI,
    ks: Sequence[int] = GRID_K,
    tolerance: float = IDENTITY_TOLERANCE,
) -> pd.DataFrame:
    """Residuals of the three closed-form identities over an (m, xi, K) grid."""
    records = []
    for m in ms:
        for xi in xis:
            checks = [
                ("multiplication", verify_multiplication_identity(xi, m)),
                ("gamma_power", verify_gamma_power_identity(xi, m)),
            ]
            checks.extend(("k_level", verify_k_level_identity(xi, m, k)) for k in ks)
            for identity, res in checks:
                records.append(
                    {
                        "identity": identity,
                        "m": res.m,
                        "xi": res.xi,
                        "k_levels": res.k_levels,
                        "residual": res.residual,
                        "ok": res.within(tolerance),
                    }
                )
    return pd.DataFrame(records)


def _experiments(args: argparse.Namespace) -> List[ExperimentSpec]:
    if args.reps is not None and args.reps < 1:
        raise ValueError(f"--reps must be a positive integer, got {args.reps}")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise ValueError(f"--seed must be in [0, 2^64), got {args.seed}")
    overrides = {"seed": args.seed, "replications": args.reps}
    if args.config:
        return load_specs(args.config, overrides)
    specs = get_preset(args.preset)
    changes = {k: v for k, v in overrides.items() if v is not None}
    return [s.replace(**changes) for s in specs] if changes else specs


def cmd_gen_data(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    for spec in _experiments(args):
        label = scenario_label(spec) or "default"
        for rep_index in range(spec.replications):
            path = out_dir / f"{spec.model.value}_{label}_seed{spec.seed}_rep{rep_index:04d}.csv"
            write_dataset(gen_data(spec, rep_index), path)
        logger.info(f"Wrote {spec.replications} {spec.model.value} datasets to {out_dir}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    rows = []
    for spec in _experiments(args):
        rows.extend(
            run_experiment(spec, parallel=args.parallel, out_dir=args.replications_dir, progress=args.progress)
        )
    if not rows:
        logger.error("No report rows were produced")
        return EXIT_FAILED
    path = write_report(rows, args.out, args.format)
    logger.info(f"Report with {len(rows)} rows written to {path}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    rows = read_report(args.input)
    if args.compare:
        table = compare_methods(rows, args.compare)
    elif args.wide:
        table = to_wide(rows)
    else:
        table = rows_frame(rows)
    if args.out:
        if args.wide or args.compare:
            table.to_csv(args.out, index=False, float_format="%.6g")
        else:
            write_report(rows, args.out, args.format)
    else:
        print(table.to_string(index=False))
    return EXIT_OK


def cmd_verify_identities(args: argparse.Namespace) -> int:
    grid = identity_grid(tolerance=args.tolerance)
    print(grid.to_string(index=False, float_format=lambda v: f"{v:.3e}"))
    failed = grid.loc[~grid["ok"]]
    for rec in failed.to_dict("records"):
        logger.error(
            f"{rec['identity']} identity residual {rec['residual']!r} at m={rec['m']}, "
            f"xi={rec['xi']}, K={rec['k_levels']} exceeds {args.tolerance}"
        )
    print(f"{len(grid) - len(failed)}/{len(grid)} residuals within {args.tolerance:g}")
    return EXIT_FAILED if len(failed) else EXIT_OK


def _add_experiment_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=str, help="JSON experiment document (object or array)")
    source.add_argument("--preset", type=str, choices=sorted(PRESETS), help="Named study batch")
    parser.add_argument("--seed", type=int, default=None, help="Override the experiment seed")
    parser.add_argument("--reps", type=int, default=None, help="Override the replication count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipgamma",
        description="Data-augmentation samplers for shape parameters: simulation studies and checks",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="Write the synthetic datasets of an experiment as CSV")
    _add_experiment_source(gen)
    gen.add_argument("--out", type=str, required=True, help="Output directory")
    gen.set_defaults(func=cmd_gen_data)

    run = sub.add_parser("run", help="Run experiments and write the aggregated report")
    _add_experiment_source(run)
    run.add_argument("--out", type=str, default="report.csv", help="Report path (default: report.csv)")
    run.add_argument(
        "--format",
        type=str,
        choices=ReportFormat.list_types(),
        default=None,
        help="Report format; taken from the --out suffix when omitted",
    )
    run.add_argument("--parallel", type=int, default=1, help="Replication workers (RECIPGAMMA_THREADS wins)")
    run.add_argument("--replications-dir", type=str, default=None, help="Also write per-replication parquet here")
    run.add_argument("--progress", action="store_true", help="Show a progress bar per experiment")
    run.set_defaults(func=cmd_run)

    rep = sub.add_parser("report", help="Print or convert a report written by `run`")
    rep.add_argument("input", type=str, help="Report file (csv, json or parquet)")
    rep.add_argument("--out", type=str, default=None, help="Write here instead of printing")
    rep.add_argument("--format", type=str, choices=ReportFormat.list_types(), default=None)
    view = rep.add_mutually_exclusive_group()
    view.add_argument("--wide", action="store_true", help="Table layout with one line per method")
    view.add_argument("--compare", type=str, default=None, metavar="METHOD", help="MSE ratios vs METHOD")
    rep.set_defaults(func=cmd_report)

    ver = sub.add_parser("verify-identities", help="Closed-form identity residual grid")
    ver.add_argument("--tolerance", type=float, default=IDENTITY_TOLERANCE)
    ver.set_defaults(func=cmd_verify_identities)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    attach_stream_handler(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.func(args)
    except ValidationFailure as e:
        for error in e.errors:
            logger.error(error.error_message())
        return EXIT_INVALID
    except (RecipGammaError, ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
