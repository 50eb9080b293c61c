"""Standard continuous test functions used to validate the optimizer."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .dataset import Bounds


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(x**2))


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x)))


def griewank(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.size + 1)
    return float(1.0 + np.sum(x**2) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))))


def ackley(x):
    x = np.asarray(x, dtype=float)
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.mean(x**2)))
        - np.exp(np.mean(np.cos(2.0 * np.pi * x)))
        + 20.0
        + np.e
    )


# name -> (function, half-width of the canonical symmetric box, global minimizer value)
BENCHMARKS: dict[str, tuple[Callable[[np.ndarray], float], float, float]] = {
    "sphere": (sphere, 5.12, 0.0),
    "rosenbrock": (rosenbrock, 2.048, 1.0),
    "rastrigin": (rastrigin, 5.12, 0.0),
    "griewank": (griewank, 600.0, 0.0),
    "ackley": (ackley, 32.768, 0.0),
}


def benchmark_objective(name: str, dim: int) -> tuple[Callable[[np.ndarray], float], Bounds]:
    """Return ``(objective, bounds)`` for a named test function in ``dim`` dimensions."""
    try:
        fn, half, _ = BENCHMARKS[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown benchmark {name!r}; expected one of {', '.join(BENCHMARKS)}"
        ) from None
    if dim < 1 or (fn is rosenbrock and dim < 2):
        raise ValueError(f"{name} needs dim >= {2 if fn is rosenbrock else 1}, got {dim}")
    return fn, Bounds.uniform(-half, half, dim)


def global_minimizer(name: str, dim: int) -> np.ndarray:
    return np.full(dim, BENCHMARKS[name.lower()][2])
