"""Hybrid data clustering: subtractive-clustering seeding refined by a
boundary-restricted PSO with exponentially decaying inertia."""

from .benchmarks import benchmark_objective
from .clustering import (
    CentroidSet,
    ClusteringParams,
    ClusteringResult,
    assign_points,
    kmeans,
    lloyd_step,
    pso_cluster,
    sc_br_apso,
    sicd_fitness,
)
from .dataset import (
    Bounds,
    CsvSchema,
    Dataset,
    builtin_descriptor,
    dataset_bounds,
    denormalize_centers,
    load_builtin,
    load_csv,
    min_max_normalize,
)
from .metrics import convergence_iteration, error_rate, min_inter_cluster_distance
from .optimizer import PsoParams, inertia_at, optimize, restrict_position, update_velocity
from .subtractive import SubtractiveParams, compute_potentials, revise_potentials, select_centers

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "CentroidSet",
    "ClusteringParams",
    "ClusteringResult",
    "CsvSchema",
    "Dataset",
    "PsoParams",
    "SubtractiveParams",
    "assign_points",
    "benchmark_objective",
    "builtin_descriptor",
    "compute_potentials",
    "convergence_iteration",
    "dataset_bounds",
    "denormalize_centers",
    "error_rate",
    "inertia_at",
    "kmeans",
    "lloyd_step",
    "load_builtin",
    "load_csv",
    "min_inter_cluster_distance",
    "min_max_normalize",
    "optimize",
    "pso_cluster",
    "restrict_position",
    "revise_potentials",
    "sc_br_apso",
    "select_centers",
    "sicd_fitness",
    "update_velocity",
]
