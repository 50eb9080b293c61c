"""Command line entry point: ``swarm-cluster <command> ...``.

Exit status is 0 on success, 1 for configuration or input validation errors
and 2 for runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .benchmarks import BENCHMARKS, benchmark_objective
from .clustering import subtractive_seed
from .dataset import BUILTIN_NAMES, CsvSchema, DatasetError, denormalize_centers, load_builtin, load_csv
from .harness.config import ConfigError, parse_config
from .harness.report import REPORT_COLUMNS, format_value, row_cells, write_trace
from .harness.runner import compare_table, medians, run_experiment
from .optimizer import NonFiniteFitnessError, PsoParams, optimize
from .subtractive import SubtractiveParams, sweep_ra

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _load_input(args):
    path = Path(args.input)
    if not path.exists() and args.input.lower() in BUILTIN_NAMES:
        return load_builtin(args.input.lower())
    schema = CsvSchema(args.delimiter, args.header, args.label_col)
    return load_csv(path, schema)


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def cmd_run(args, out) -> int:
    cfg = parse_config(args.config)
    rows = run_experiment(cfg, trace_dir=args.trace_dir)
    w = _writer(out)
    w.writerow(REPORT_COLUMNS)
    for row in rows:
        w.writerow(row_cells(row))
    for algorithm in cfg.algorithms:
        med = medians([r for r in rows if r.algorithm == algorithm])
        cells = [rows[0].dataset, algorithm, "median"]
        w.writerow(cells + [format_value(med[c]) for c in REPORT_COLUMNS[3:]])
    return EXIT_RUNTIME if any(r.failed for r in rows) else EXIT_OK


def cmd_compare(args, out) -> int:
    cfg = parse_config(args.config)
    rows = run_experiment(cfg)
    table = compare_table(rows)
    cols = ["algorithm", "runs", "k", "sicd", "sicd_delta", "sicd_wins", "error_rate_matching",
            "error_rate_purity", "convergence_iteration", "iterations_run", "wall_ms"]  # fmt: skip
    cells = [cols] + [[format_value(entry[c]) for c in cols] for entry in table]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cols))]
    out.write(f"# {rows[0].dataset}: medians over seeds {list(cfg.seeds)}\n")
    for r in cells:
        out.write("  ".join(v.rjust(wd) for v, wd in zip(r, widths)).rstrip() + "\n")
    return EXIT_RUNTIME if any(r.failed for r in rows) else EXIT_OK


def cmd_bench(args, out) -> int:
    objective, bounds = benchmark_objective(args.function, args.dim)
    params = PsoParams(swarm_size=args.swarm, max_iters=args.iters, stall_window=args.stall_window)
    res = optimize(objective, bounds, params, seed=args.seed)
    if args.trace:
        write_trace(res.trace, args.trace)
    w = _writer(out)
    w.writerow(["function", "dim", "seed", "best_fitness", "iterations_run", "stop_reason"])
    w.writerow([args.function, args.dim, args.seed, format_value(res.best_fitness),
                res.iterations_run, res.stop_reason])  # fmt: skip
    return EXIT_OK


def cmd_seed(args, out) -> int:
    ds = _load_input(args)
    seeding, _, norm = subtractive_seed(ds, SubtractiveParams(ra=args.ra))
    centers = denormalize_centers(seeding.centers, norm)
    out.write(f"k={seeding.k}\n")
    w = _writer(out)
    w.writerow(ds.feature_names or [f"x{j}" for j in range(ds.d)])
    for c in centers:
        w.writerow([format_value(float(v)) for v in c])
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    if args.steps < 1:
        raise ConfigError("--steps", "must be >= 1")
    ds = _load_input(args)
    nds, _ = subtractive_seed(ds, SubtractiveParams())[1:]
    radii = np.linspace(args.ra_from, args.ra_to, args.steps)
    w = _writer(out)
    w.writerow(["ra", "k"])
    for ra, k in sweep_ra(nds, radii):
        w.writerow([format_value(ra), k])
    return EXIT_OK


def _add_input_args(p):
    p.add_argument("--input", required=True, help="CSV file, or a bundled dataset name")
    p.add_argument("--label-col", type=int, default=None, help="zero-based label column")
    p.add_argument("--header", action="store_true", help="first row is a header")
    p.add_argument("--delimiter", default=",")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarm-cluster",
        description="Subtractive-seeded boundary-restricted PSO clustering and its benchmarks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--trace-dir", default=None, help="write one JSONL trace per run here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="paired median table over the config's algorithms")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="run the optimizer on a test function")
    p.add_argument("--function", required=True, choices=sorted(BENCHMARKS))
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--swarm", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stall-window", type=int, default=PsoParams.stall_window,
                   help="0 disables the stall stopping rule")  # fmt: skip
    p.add_argument("--trace", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("seed", help="subtractive seeding only; prints k and centers")
    _add_input_args(p)
    p.add_argument("--ra", type=float, required=True)
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("sweep-ra", help="number of seeded clusters for a grid of radii")
    _add_input_args(p)
    p.add_argument("--from", dest="ra_from", type=float, required=True)
    p.add_argument("--to", dest="ra_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args, out)
    except (ConfigError, DatasetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonFiniteFitnessError, OSError, RuntimeError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
