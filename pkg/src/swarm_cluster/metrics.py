"""Comparison criteria: SICD, error rate, convergence iteration, center separation."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import pdist

from .clustering import ClusteringResult, sicd_fitness

EXHAUSTIVE_MAX_K = 8


class TraceError(ValueError):
    """A fitness trace that should be non-increasing is not."""


@dataclass(frozen=True)
class RunMetrics:
    """Metrics of one run; error fields are None for unlabeled data and
    ``min_inter_cluster`` is None when there is a single cluster."""

    sicd: float
    error_rate: float | None
    error_rate_matching: float | None
    error_rate_purity: float | None
    convergence_iteration: int
    min_inter_cluster: float | None
    wall_ms: float
    k: int
    seed: int


def _contingency(assignments, labels) -> np.ndarray:
    a = np.asarray(assignments)
    y = np.asarray(labels)
    if a.shape != y.shape or a.ndim != 1:
        raise ValueError(
            f"assignments and labels must be equal-length vectors, got {a.shape} and {y.shape}"
        )
    if a.size == 0:
        raise ValueError("cannot score an empty clustering")
    _, ai = np.unique(a, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    table = np.zeros((ai.max() + 1, yi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, yi), 1)
    return table


def _best_matching_exhaustive(table: np.ndarray) -> int:
    K, C = table.shape
    rows = range(K)
    if K <= C:
        return max(
            sum(table[r, c] for r, c in zip(rows, perm))
            for perm in itertools.permutations(range(C), K)
        )
    return max(
        sum(table[r, c] for r, c in zip(perm, range(C)))
        for perm in itertools.permutations(rows, C)
    )


def _best_matching(table: np.ndarray) -> int:
    if max(table.shape) <= EXHAUSTIVE_MAX_K:
        return int(_best_matching_exhaustive(table))
    r, c = linear_sum_assignment(-table)
    return int(table[r, c].sum())


def matching_error(assignments, labels) -> float:
    """1 - (points on the best one-to-one cluster/class pairing) / n.

    With unequal cluster and class counts the pairing is partial and
    points in unpaired clusters count as errors.
    """
    table = _contingency(assignments, labels)
    return 1.0 - _best_matching(table) / table.sum()


def purity_error(assignments, labels) -> float:
    """1 - (sum over clusters of the majority-class count) / n."""
    table = _contingency(assignments, labels)
    return 1.0 - table.max(axis=1).sum() / table.sum()


def error_rate(assignments, labels) -> float:
    """Misclassification rate of a clustering against reference classes.

    If the clustering uses as many distinct ids as there are classes, the
    best one-to-one mapping is used (found exhaustively up to 8 clusters,
    by the Hungarian method beyond). Otherwise every cluster votes for its
    majority class.
    """
    table = _contingency(assignments, labels)
    K, C = table.shape
    if K == C:
        return 1.0 - _best_matching(table) / table.sum()
    return 1.0 - table.max(axis=1).sum() / table.sum()


def min_inter_cluster_distance(centers) -> float:
    """Smallest distance between two centers; ``inf`` for a single center."""
    c = np.atleast_2d(np.asarray(getattr(centers, "centers", centers), dtype=float))
    if c.shape[0] < 2:
        return math.inf
    return float(pdist(c).min())


def check_trace(values) -> list[float]:
    """Return ``values`` as floats, raising :class:`TraceError` if any step increases."""
    vals = [float(v) for v in values]
    for t, (a, b) in enumerate(zip(vals, vals[1:]), start=1):
        if b > a:
            raise TraceError(f"trace increases at index {t}: {a!r} -> {b!r}")
    return vals


def convergence_iteration(trace, frac: float = 0.01) -> int:
    """First index where the trace is within ``frac`` of its total improvement.

    ``trace`` is a non-increasing sequence of best-so-far fitness values;
    returns 0 when it never improved.
    """
    vals = check_trace(trace)
    if not vals:
        raise ValueError("empty trace")
    first, last = vals[0], vals[-1]
    total = first - last
    if total == 0:
        return 0
    limit = frac * total
    for t, v in enumerate(vals):
        if v - last <= limit:
            return t
    return len(vals) - 1


def run_metrics(ds, result: ClusteringResult, seed: int, wall_ms: float, frac: float = 0.01) -> RunMetrics:
    """Collect the comparison metrics for one finished run (no trace -> iteration 0)."""
    labels = getattr(ds, "labels", None)
    if labels is not None:
        err = error_rate(result.assignments, labels)
        em = matching_error(result.assignments, labels)
        ep = purity_error(result.assignments, labels)
    else:
        err = em = ep = None
    conv = 0
    if result.trace:
        conv = convergence_iteration([r.gbest_fitness for r in result.trace], frac)
    sep = min_inter_cluster_distance(result.centers)
    return RunMetrics(
        sicd=sicd_fitness(ds, result.centers),
        error_rate=err,
        error_rate_matching=em,
        error_rate_purity=ep,
        convergence_iteration=conv,
        min_inter_cluster=None if math.isinf(sep) else sep,
        wall_ms=wall_ms,
        k=result.k,
        seed=seed,
    )
