"""Seeded multi-run experiments over the clustering algorithms."""

from __future__ import annotations

import logging
import statistics
import time
from pathlib import Path

from ..clustering import (
    ClusteringParams,
    ClusteringResult,
    kmeans,
    pso_cluster,
    sc_br_apso,
    seeding_result,
)
from ..dataset import Dataset, load_builtin, load_csv
from ..metrics import run_metrics
from ..optimizer import NonFiniteFitnessError
from .config import ExperimentConfig
from .report import ReportRow, write_report, write_trace

log = logging.getLogger(__name__)

METRIC_COLUMNS = (
    "k",
    "sicd",
    "error_rate_matching",
    "error_rate_purity",
    "convergence_iteration",
    "min_inter_cluster",
    "iterations_run",
    "wall_ms",
)


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    spec = cfg.dataset
    if spec.builtin:
        return load_builtin(spec.builtin)
    return load_csv(cfg.resolve(spec.path), spec.schema, name=spec.label)


def clustering_params(cfg: ExperimentConfig) -> ClusteringParams:
    return ClusteringParams(
        k=cfg.k,
        pso=cfg.pso,
        lloyd_refine=cfg.lloyd_refine,
        refine_mode=cfg.refine_mode,
        subtractive=cfg.subtractive,
        seed_fraction=cfg.seed_fraction,
        search_space=cfg.search_space,
    )


def run_algorithm(cfg: ExperimentConfig, ds: Dataset, algorithm: str, seed: int) -> ClusteringResult:
    params = clustering_params(cfg)
    if algorithm == "kmeans":
        return kmeans(ds, cfg.k, cfg.kmeans_max_iters, cfg.kmeans_tol, seed)
    if algorithm == "pso":
        return pso_cluster(ds, cfg.k, params, seed=seed)
    if algorithm == "sc-brapso":
        return sc_br_apso(ds, params, seed)
    if algorithm == "subtractive-only":
        return seeding_result(ds, cfg.subtractive)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_one(cfg: ExperimentConfig, ds: Dataset, algorithm: str, seed: int):
    """Run one (algorithm, seed) pair; returns ``(row, result or None)``."""
    t0 = time.perf_counter()
    try:
        result = run_algorithm(cfg, ds, algorithm, seed)
    except NonFiniteFitnessError as exc:
        log.error("%s seed %d aborted: %s", algorithm, seed, exc)
        return ReportRow(ds.name, algorithm, seed, error=str(exc)), None
    wall_ms = (time.perf_counter() - t0) * 1000.0
    m = run_metrics(ds, result, seed, wall_ms, cfg.convergence_frac)
    row = ReportRow(
        dataset=ds.name,
        algorithm=algorithm,
        seed=seed,
        k=m.k,
        sicd=m.sicd,
        error_rate_matching=m.error_rate_matching,
        error_rate_purity=m.error_rate_purity,
        convergence_iteration=m.convergence_iteration,
        min_inter_cluster=m.min_inter_cluster,
        iterations_run=result.iterations_run,
        wall_ms=wall_ms,
    )
    return row, result


def trace_filename(dataset: str, algorithm: str, seed: int) -> str:
    return f"{dataset}_{algorithm}_seed{seed}.jsonl"


def run_experiment(cfg: ExperimentConfig, trace_dir=None, ds: Dataset | None = None) -> list[ReportRow]:
    """Every configured algorithm on every seed, rows grouped by algorithm in seed order.

    Writes the report CSV and per-run traces when the config (or ``trace_dir``)
    asks for them.
    """
    ds = ds if ds is not None else load_dataset(cfg)
    if trace_dir is None and cfg.trace_dir:
        trace_dir = cfg.resolve(cfg.trace_dir)
    if trace_dir is not None:
        trace_dir = Path(trace_dir)
    rows = []
    for algorithm in cfg.algorithms:
        for seed in cfg.seeds:
            row, result = run_one(cfg, ds, algorithm, seed)
            rows.append(row)
            if trace_dir is not None and result is not None and result.trace:
                write_trace(result.trace, trace_dir / trace_filename(ds.name, algorithm, seed))
    if cfg.report:
        write_report(rows, cfg.resolve(cfg.report))
    return rows


def _median(values):
    values = [v for v in values if v is not None]
    return statistics.median(values) if values else None


def medians(rows, columns=METRIC_COLUMNS) -> dict:
    ok = [r for r in rows if not r.failed]
    return {c: _median(getattr(r, c) for r in ok) for c in columns}


def compare_table(rows) -> list[dict]:
    """Median metrics per algorithm plus paired SICD differences to the first algorithm.

    ``sicd_delta`` is the median over shared seeds of (this SICD - first
    algorithm's SICD); ``sicd_wins`` counts seeds where this algorithm is lower.
    """
    by_algo: dict[str, list[ReportRow]] = {}
    for r in rows:
        by_algo.setdefault(r.algorithm, []).append(r)
    names = list(by_algo)
    base = {r.seed: r.sicd for r in by_algo[names[0]] if not r.failed}
    table = []
    for name in names:
        group = by_algo[name]
        entry = {"algorithm": name, "runs": len(group), **medians(group)}
        paired = [
            (r.sicd, base[r.seed]) for r in group if not r.failed and r.seed in base
        ]
        entry["sicd_delta"] = _median(a - b for a, b in paired)
        entry["sicd_wins"] = sum(a < b for a, b in paired)
        table.append(entry)
    return table
