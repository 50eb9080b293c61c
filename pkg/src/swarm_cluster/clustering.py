"""Partitional clustering: K-Means baseline, PSO over centroid sets, and the seeded hybrid.

A particle encodes ``k`` centers of dimension ``d`` as one flat vector in
row-major order. Fitness is the sum of (non-squared) Euclidean distances from
every point to its nearest center.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import Dataset, as_points, dataset_bounds, denormalize_centers, min_max_normalize
from .optimizer import OptimizationResult, PsoParams, SwarmState, TraceRecord, optimize
from .subtractive import SeedingResult, SubtractiveParams, select_centers

REFINE_MODES = ("particles", "gbest")
SEARCH_SPACES = ("normalized", "original")


@dataclass(eq=False)
class CentroidSet:
    centers: np.ndarray

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    def flatten(self) -> np.ndarray:
        return self.centers.reshape(-1).copy()

    @classmethod
    def from_flat(cls, vec, k: int, d: int) -> CentroidSet:
        vec = np.asarray(vec, dtype=float)
        if vec.size != k * d:
            raise ValueError(f"expected a vector of length {k * d}, got {vec.size}")
        return cls(vec.reshape(k, d).copy())


@dataclass(frozen=True)
class ClusteringParams:
    """Settings for the PSO-based algorithms.

    ``seed_fraction`` is the share of the swarm started at the given initial
    centers; ``None`` starts exactly one particle there. ``search_space``
    chooses whether the seeded hybrid's swarm works on min-max scaled data
    or on the data in its original units (seeding always uses scaled data).
    """

    k: int | None = None
    pso: PsoParams = field(default_factory=PsoParams)
    lloyd_refine: bool = True
    refine_mode: str = "particles"
    subtractive: SubtractiveParams = field(default_factory=SubtractiveParams)
    seed_fraction: float | None = None
    search_space: str = "normalized"

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.refine_mode not in REFINE_MODES:
            raise ValueError(f"refine_mode must be one of {REFINE_MODES}, got {self.refine_mode!r}")
        if self.seed_fraction is not None and not 0 < self.seed_fraction <= 1:
            raise ValueError(f"seed_fraction must be in (0, 1], got {self.seed_fraction}")
        if self.search_space not in SEARCH_SPACES:
            raise ValueError(
                f"search_space must be one of {SEARCH_SPACES}, got {self.search_space!r}"
            )


@dataclass
class ClusteringResult:
    centers: np.ndarray
    assignments: np.ndarray
    sicd: float
    trace: list[TraceRecord]
    k: int
    iterations_run: int = 0
    stop_reason: str = ""
    seed_info: SeedingResult | None = None


def _centers(centers) -> np.ndarray:
    if isinstance(centers, CentroidSet):
        return centers.centers
    return np.atleast_2d(np.asarray(centers, dtype=float))


def _check_dims(x: np.ndarray, c: np.ndarray) -> None:
    if x.shape[1] != c.shape[1]:
        raise ValueError(f"points have {x.shape[1]} dimensions, centers have {c.shape[1]}")


def assign_points(data, centers) -> np.ndarray:
    """Index of the nearest center for every point (ties go to the lower index)."""
    x, c = as_points(data), _centers(centers)
    _check_dims(x, c)
    return np.argmin(cdist(x, c), axis=1)


def sicd_fitness(data, centers) -> float:
    """Sum over points of the Euclidean distance to the nearest center."""
    x, c = as_points(data), _centers(centers)
    _check_dims(x, c)
    return float(cdist(x, c).min(axis=1).sum())


def lloyd_step(data, centers) -> CentroidSet:
    """Assign, then move each center to the mean of its points.

    A center that receives no points stays where it is.
    """
    x, c = as_points(data), _centers(centers)
    labels = assign_points(x, c)
    k = c.shape[0]
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros_like(c)
    np.add.at(sums, labels, x)
    new = c.copy()
    hit = counts > 0
    new[hit] = sums[hit] / counts[hit, None]
    return CentroidSet(new)


def _sse(x: np.ndarray, c: np.ndarray) -> float:
    return float(cdist(x, c, "sqeuclidean").min(axis=1).sum())


def _best_so_far(values) -> list[float]:
    return np.minimum.accumulate(np.asarray(values, dtype=float)).tolist()


def kmeans(data, k: int, max_iters: int = 100, tol: float = 1e-6, seed=None) -> ClusteringResult:
    """Lloyd's algorithm from ``k`` distinct data rows chosen uniformly at random.

    Iterates until no center moves more than ``tol`` or ``max_iters`` steps.
    The trace follows the best within-cluster sum of squares seen so far
    (the quantity Lloyd steps decrease), with ``w`` set to None.
    """
    x = as_points(data)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    rng = np.random.default_rng(seed)
    c = x[np.sort(rng.choice(n, size=k, replace=False))].copy()
    sse = []
    it = 0
    reason = "max_iters"
    while it < max_iters:
        new = lloyd_step(x, c).centers
        shift = float(np.max(np.linalg.norm(new - c, axis=1)))
        c = new
        it += 1
        sse.append(_sse(x, c))
        if shift < tol:
            reason = "converged"
            break
    trace = [TraceRecord(t + 1, v, None) for t, v in enumerate(_best_so_far(sse))]
    return ClusteringResult(
        centers=c,
        assignments=assign_points(x, c),
        sicd=sicd_fitness(x, c),
        trace=trace,
        k=k,
        iterations_run=it,
        stop_reason=reason,
    )


def _make_refiner(x: np.ndarray, k: int, d: int, mode: str):
    """One Lloyd step per particle (or only for the gbest particle), kept only if it helps."""

    def refine(state: SwarmState, objective) -> None:
        if mode == "gbest":
            idx = [int(np.argmin(state.fitness))]
        else:
            idx = range(state.size)
        for i in idx:
            new = lloyd_step(x, state.positions[i].reshape(k, d)).flatten()
            value = objective(new)
            if value < state.fitness[i]:
                state.offer(i, new, value)

    return refine


def pso_cluster(
    data,
    k: int,
    params: ClusteringParams | None = None,
    init_centers=None,
    seed=None,
    callback=None,
) -> ClusteringResult:
    """Search centroid sets with the bounded PSO, fitness = SICD.

    The box is the data's per-dimension range, repeated ``k`` times. When
    ``init_centers`` is given, one particle (or ``seed_fraction`` of the
    swarm) starts there. With ``lloyd_refine`` each particle gets a greedy
    Lloyd step after every iteration.
    """
    params = params or ClusteringParams()
    x = as_points(data)
    n, d = x.shape
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    bounds = dataset_bounds(Dataset(x)).tile(k)

    init = None
    if init_centers is not None:
        c0 = _centers(init_centers)
        if c0.shape != (k, d):
            raise ValueError(f"init_centers must be {k} x {d}, got {c0.shape}")
        n_seeded = 1
        if params.seed_fraction is not None:
            n_seeded = max(1, int(round(params.seed_fraction * params.pso.swarm_size)))
        init = np.tile(c0.reshape(-1), (n_seeded, 1))

    def objective(vec):
        return sicd_fitness(x, vec.reshape(k, d))

    refine = _make_refiner(x, k, d, params.refine_mode) if params.lloyd_refine else None
    opt: OptimizationResult = optimize(
        objective, bounds, params.pso, seed, init_positions=init, refine=refine, callback=callback
    )
    centers = opt.best_position.reshape(k, d)
    return ClusteringResult(
        centers=centers,
        assignments=assign_points(x, centers),
        sicd=sicd_fitness(x, centers),
        trace=opt.trace,
        k=k,
        iterations_run=opt.iterations_run,
        stop_reason=opt.stop_reason,
    )


def subtractive_seed(ds: Dataset, params: SubtractiveParams | None = None):
    """Normalize ``ds`` and seed it; returns ``(seeding, normalized dataset, norm params)``."""
    nds, norm = min_max_normalize(ds)
    return select_centers(nds, params or SubtractiveParams()), nds, norm


def seeding_result(ds: Dataset, params: SubtractiveParams | None = None) -> ClusteringResult:
    """Clustering given by the subtractive centers alone, in original units."""
    seeding, _, norm = subtractive_seed(ds, params)
    centers = denormalize_centers(seeding.centers, norm)
    return ClusteringResult(
        centers=centers,
        assignments=assign_points(ds, centers),
        sicd=sicd_fitness(ds, centers),
        trace=[],
        k=seeding.k,
        stop_reason="seeded",
        seed_info=seeding,
    )


def sc_br_apso(ds: Dataset, params: ClusteringParams | None = None, seed=None, callback=None):
    """Subtractive seeding followed by boundary-restricted adaptive PSO refinement.

    The data is min-max normalized, the seeding picks ``k`` and the starting
    centers, the swarm searches in normalized space (unless
    ``params.search_space == "original"``), and the best centers are mapped
    back to original units. ``params.k`` is ignored.
    """
    params = params or ClusteringParams()
    if not isinstance(ds, Dataset):
        ds = Dataset(ds)
    seeding, nds, norm = subtractive_seed(ds, params.subtractive)
    if params.search_space == "original":
        start = denormalize_centers(seeding.centers, norm)
        inner = pso_cluster(ds, seeding.k, params, start, seed, callback)
        centers = inner.centers
    else:
        inner = pso_cluster(nds, seeding.k, params, seeding.centers, seed, callback)
        centers = denormalize_centers(inner.centers, norm)
    return ClusteringResult(
        centers=centers,
        assignments=assign_points(ds, centers),
        sicd=sicd_fitness(ds, centers),
        trace=inner.trace,
        k=seeding.k,
        iterations_run=inner.iterations_run,
        stop_reason=inner.stop_reason,
        seed_info=seeding,
    )

