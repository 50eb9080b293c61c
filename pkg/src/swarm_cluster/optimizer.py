"""Global-best PSO on a bounded box with decaying inertia and boundary restriction.

A coordinate whose update would leave the box is put back where it was
(``position - velocity``); the velocity itself is left alone unless the
``revert_zero`` boundary mode is selected.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dataset import Bounds

Objective = Callable[[np.ndarray], float]
# Called after every swarm update; may move particles (e.g. local refinement).
Refiner = Callable[["SwarmState", Objective], None]

INERTIA_SCHEDULES = ("exponential", "linear")
BOUNDARY_MODES = ("revert", "revert_zero")


class NonFiniteFitnessError(RuntimeError):
    def __init__(self, particle: int, position: np.ndarray, value: float):
        self.particle = particle
        self.position = np.array(position)
        self.value = value
        super().__init__(
            f"objective returned {value!r} for particle {particle} at position "
            f"{np.array2string(self.position, precision=6)}"
        )


@dataclass(frozen=True)
class PsoParams:
    swarm_size: int = 30
    c1: float = 1.49445
    c2: float = 1.49445
    w_max: float = 0.9
    w_min: float = 0.4
    v_max_factor: float = 0.5
    max_iters: int = 1000
    stall_window: int = 20
    stall_tol: float = 1e-6
    inertia: str = "exponential"
    boundary: str = "revert"

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError(f"swarm_size must be >= 2, got {self.swarm_size}")
        if not 0 < self.w_min <= self.w_max:
            raise ValueError(f"need 0 < w_min <= w_max, got {self.w_min}, {self.w_max}")
        if not 0 < self.v_max_factor <= 1:
            raise ValueError(f"v_max_factor must be in (0, 1], got {self.v_max_factor}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.stall_window < 0:
            raise ValueError("stall_window must be >= 0 (0 disables the stall rule)")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("acceleration coefficients must be non-negative")
        if self.inertia not in INERTIA_SCHEDULES:
            raise ValueError(f"inertia must be one of {INERTIA_SCHEDULES}, got {self.inertia!r}")
        if self.boundary not in BOUNDARY_MODES:
            raise ValueError(f"boundary must be one of {BOUNDARY_MODES}, got {self.boundary!r}")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass
class SwarmState:
    """Mutable swarm arrays, one row per particle.

    ``fitness`` holds each particle's fitness at its current position.
    """

    positions: np.ndarray
    velocities: np.ndarray
    fitness: np.ndarray
    pbest_positions: np.ndarray
    pbest_fitness: np.ndarray
    gbest_position: np.ndarray
    gbest_fitness: float
    bounds: Bounds
    rng: np.random.Generator
    iteration: int = 0
    w: float = math.nan

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def particles(self) -> list[Particle]:
        return [
            Particle(
                self.positions[i].copy(),
                self.velocities[i].copy(),
                self.pbest_positions[i].copy(),
                float(self.pbest_fitness[i]),
            )
            for i in range(self.size)
        ]

    def copy(self) -> SwarmState:
        return copy.deepcopy(self)

    def offer(self, i: int, position: np.ndarray, value: float) -> None:
        """Move particle ``i`` to ``position`` (fitness ``value``) and update its bests."""
        self.positions[i] = position
        self.fitness[i] = value
        if value < self.pbest_fitness[i]:
            self.pbest_fitness[i] = value
            self.pbest_positions[i] = position
            if value < self.gbest_fitness:
                self.gbest_fitness = float(value)
                self.gbest_position = np.array(position, dtype=float)


@dataclass(frozen=True)
class TraceRecord:
    t: int
    gbest_fitness: float
    w: float | None

    def as_dict(self) -> dict:
        return {"t": self.t, "gbest_fitness": self.gbest_fitness, "w": self.w}


@dataclass
class OptimizationResult:
    best_position: np.ndarray
    best_fitness: float
    trace: list[TraceRecord] = field(default_factory=list)
    iterations_run: int = 0
    stop_reason: str = "max_iters"


def inertia_at(params: PsoParams, t: float, T: float) -> float:
    """Inertia weight at iteration ``t`` of ``T``: ``w_max * (w_min / w_max) ** (t / T)``.

    ``params.inertia == "linear"`` selects the straight-line decay instead.
    """
    if T < 1 or not 0 <= t <= T:
        raise ValueError(f"need 0 <= t <= T and T >= 1, got t={t}, T={T}")
    frac = t / T
    if params.inertia == "linear":
        return params.w_max - (params.w_max - params.w_min) * frac
    return params.w_max * (params.w_min / params.w_max) ** frac


def velocity_limit(params: PsoParams, bounds: Bounds) -> np.ndarray:
    return params.v_max_factor * bounds.width


def update_velocity(
    position: np.ndarray,
    velocity: np.ndarray,
    pbest: np.ndarray,
    gbest: np.ndarray,
    w: float,
    params: PsoParams,
    rng,
    v_max: np.ndarray,
) -> np.ndarray:
    """``w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)``, clamped to ``[-v_max, v_max]``.

    Works on one particle (1-D arrays) or a whole swarm (2-D, one row each);
    ``r1`` and ``r2`` are fresh uniforms per coordinate, drawn in that order.
    """
    shape = np.shape(position)
    r1 = rng.random(shape)
    r2 = rng.random(shape)
    v = w * velocity + params.c1 * r1 * (pbest - position) + params.c2 * r2 * (gbest - position)
    return np.clip(v, -v_max, v_max)


def restrict_position(position, velocity, bounds: Bounds, previous=None) -> np.ndarray:
    """Keep in-bounds coordinates of the moved ``position``; revert the rest.

    A reverted coordinate becomes ``position - velocity``, i.e. where the
    particle was before moving. Pass ``previous`` to use the stored pre-move
    position directly, which avoids the rounding of the subtraction.
    """
    position = np.asarray(position, dtype=float)
    inside = (position >= bounds.lower) & (position <= bounds.upper)
    back = position - velocity if previous is None else previous
    return np.where(inside, position, back)


def _evaluate(objective: Objective, positions: np.ndarray) -> np.ndarray:
    values = np.empty(positions.shape[0])
    for i, x in enumerate(positions):
        v = float(objective(x))
        if not math.isfinite(v):
            raise NonFiniteFitnessError(i, x, v)
        values[i] = v
    return values


def init_swarm(
    objective: Objective,
    bounds: Bounds,
    params: PsoParams,
    seed=None,
    init_positions: np.ndarray | None = None,
) -> SwarmState:
    """Uniform random positions in the box and velocities in ``[-v_max, v_max]``.

    Rows of ``init_positions`` (if given) overwrite the first particles'
    positions after the random draws, so the random stream does not depend on it.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    S, D = params.swarm_size, bounds.dim
    v_max = velocity_limit(params, bounds)
    positions = bounds.lower + rng.random((S, D)) * bounds.width
    positions = np.minimum(positions, bounds.upper)
    velocities = (2.0 * rng.random((S, D)) - 1.0) * v_max
    if init_positions is not None:
        init = np.atleast_2d(np.asarray(init_positions, dtype=float))
        if init.shape[1] != D or init.shape[0] > S:
            raise ValueError(f"init_positions must have at most {S} rows of length {D}")
        if not all(bounds.contains(row) for row in init):
            raise ValueError("init_positions must lie within bounds")
        positions[: init.shape[0]] = init
    fitness = _evaluate(objective, positions)
    best = int(np.argmin(fitness))
    return SwarmState(
        positions=positions,
        velocities=velocities,
        fitness=fitness,
        pbest_positions=positions.copy(),
        pbest_fitness=fitness.copy(),
        gbest_position=positions[best].copy(),
        gbest_fitness=float(fitness[best]),
        bounds=bounds,
        rng=rng,
    )


def step(
    state: SwarmState,
    objective: Objective,
    params: PsoParams,
    refine: Refiner | None = None,
) -> SwarmState:
    """Advance a copy of ``state`` by one iteration and return it.

    All random numbers for the iteration are drawn before any evaluation,
    and personal/global bests are updated in particle-index order.
    """
    state = state.copy()
    w = inertia_at(params, min(state.iteration, params.max_iters), params.max_iters)
    v_max = velocity_limit(params, state.bounds)
    prev = state.positions
    v = update_velocity(
        prev, state.velocities, state.pbest_positions, state.gbest_position, w, params, state.rng, v_max
    )
    moved = restrict_position(prev + v, v, state.bounds, previous=prev)
    if params.boundary == "revert_zero":
        v = np.where(moved == prev + v, v, 0.0)
    state.velocities = v
    values = _evaluate(objective, moved)
    for i in range(state.size):
        state.offer(i, moved[i], values[i])
    if refine is not None:
        refine(state, objective)
    state.iteration += 1
    state.w = w
    return state


def _stalled(trace: list[TraceRecord], params: PsoParams) -> bool:
    window = params.stall_window
    if window == 0 or len(trace) <= window:
        return False
    return trace[-1 - window].gbest_fitness - trace[-1].gbest_fitness < params.stall_tol


def optimize(
    objective: Objective,
    bounds: Bounds,
    params: PsoParams | None = None,
    seed=None,
    init_positions: np.ndarray | None = None,
    refine: Refiner | None = None,
    callback: Callable[[SwarmState], None] | None = None,
) -> OptimizationResult:
    """Minimize ``objective`` over ``bounds``.

    Stops after ``params.max_iters`` iterations, or earlier once the global
    best has improved by less than ``stall_tol`` over the last
    ``stall_window`` iterations. Trace record ``t`` counts completed iterations.
    """
    params = params or PsoParams()
    state = init_swarm(objective, bounds, params, seed, init_positions)
    trace: list[TraceRecord] = []
    reason = "max_iters"
    while state.iteration < params.max_iters:
        state = step(state, objective, params, refine)
        trace.append(TraceRecord(state.iteration, state.gbest_fitness, state.w))
        if callback is not None:
            callback(state)
        if _stalled(trace, params):
            reason = "stalled"
            break
    return OptimizationResult(
        state.gbest_position.copy(), state.gbest_fitness, trace, state.iteration, reason
    )


def random_search(objective: Objective, bounds: Bounds, n_evals: int, seed=None) -> float:
    """Best value from ``n_evals`` uniform samples; the baseline the swarm has to beat."""
    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(n_evals):
        best = min(best, float(objective(bounds.lower + rng.random(bounds.dim) * bounds.width)))
    return best
