"""Subtractive clustering: pick the cluster count and initial centers from data density.

Every data point is a candidate center. Its potential is a sum of Gaussian
kernels over all points; the highest-potential point becomes a center, the
potential around it is squashed, and the process repeats until the remaining
peaks are too weak.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import as_points

ACCEPT = "accept"
REJECT = "reject"
STOP = "stop"


@dataclass(frozen=True)
class SubtractiveParams:
    """Seeding parameters.

    ``ra`` is the neighborhood radius in normalized feature units; the
    squash radius is ``rb_factor * ra``. Kernel widths are ``radius /
    radius_divisor`` (2 gives the usual ``exp(-4 d^2 / r^2)`` kernel).
    ``k_max=None`` means no cap beyond the number of points.
    """

    ra: float = 0.4
    rb_factor: float = 1.5
    eps_up: float = 0.5
    eps_down: float = 0.15
    k_max: int | None = None
    radius_divisor: float = 2.0

    def __post_init__(self):
        if not self.ra > 0:
            raise ValueError(f"ra must be positive, got {self.ra}")
        if not self.rb_factor >= 1:
            raise ValueError(f"rb_factor must be >= 1, got {self.rb_factor}")
        if not 0 < self.eps_down < self.eps_up <= 1:
            raise ValueError(
                f"need 0 < eps_down < eps_up <= 1, got eps_down={self.eps_down}, eps_up={self.eps_up}"
            )
        if self.k_max is not None and self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if not self.radius_divisor > 0:
            raise ValueError(f"radius_divisor must be positive, got {self.radius_divisor}")

    @property
    def rb(self) -> float:
        return self.rb_factor * self.ra


@dataclass
class SeedingResult:
    centers: np.ndarray
    indices: list[int]
    first_potential: float
    selection_log: list[tuple[int, float, str]] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def _sq_dists(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return cdist(x, y, "sqeuclidean")


def compute_potentials(data, ra: float, radius_divisor: float = 2.0) -> np.ndarray:
    """Density of each point: ``D_i = sum_j exp(-||x_i - x_j||^2 / (ra / divisor)^2)``.

    Each value lies in ``[1, n]`` since the self term contributes exactly 1.
    """
    if not ra > 0:
        raise ValueError(f"ra must be positive, got {ra}")
    x = as_points(data)
    width2 = (ra / radius_divisor) ** 2
    return np.exp(-_sq_dists(x, x) / width2).sum(axis=1)


def revise_potentials(
    potentials: np.ndarray,
    center_index: int,
    center_potential: float,
    data,
    rb: float,
    radius_divisor: float = 2.0,
) -> np.ndarray:
    """Subtract the accepted center's kernel (radius ``rb``) from every potential.

    Returns a new array; the center's own entry drops to exactly zero when
    ``center_potential`` equals its current potential.
    """
    x = as_points(data)
    width2 = (rb / radius_divisor) ** 2
    d2 = _sq_dists(x, x[center_index : center_index + 1])[:, 0]
    return np.asarray(potentials, dtype=float) - center_potential * np.exp(-d2 / width2)


def select_centers(data, params: SubtractiveParams | None = None) -> SeedingResult:
    """Run the accept / reject / gray-zone loop and return the chosen centers.

    ``data`` should already be min-max normalized. At least one center is
    always returned. Ties on potential go to the lowest index.
    """
    params = params or SubtractiveParams()
    x = as_points(data)
    n = x.shape[0]
    k_max = n if params.k_max is None else min(params.k_max, n)

    pot = compute_potentials(x, params.ra, params.radius_divisor)
    first = int(np.argmax(pot))
    first_pot = float(pot[first])
    chosen = [first]
    log = [(first, first_pot, ACCEPT)]
    pot = revise_potentials(pot, first, first_pot, x, params.rb, params.radius_divisor)

    while len(chosen) < k_max:
        c = int(np.argmax(pot))
        pc = float(pot[c])
        if pc <= 0 or pc < params.eps_down * first_pot:
            log.append((c, pc, STOP))
            break
        if pc > params.eps_up * first_pot:
            accept = True
        else:
            d_min = float(np.sqrt(_sq_dists(x[c : c + 1], x[chosen]).min()))
            accept = d_min / params.ra + pc / first_pot >= 1
        if accept:
            chosen.append(c)
            log.append((c, pc, ACCEPT))
            pot = revise_potentials(pot, c, pc, x, params.rb, params.radius_divisor)
        else:
            log.append((c, pc, REJECT))
            pot[c] = 0.0

    return SeedingResult(x[chosen].copy(), chosen, first_pot, log)


def sweep_ra(data, radii, base: SubtractiveParams | None = None) -> list[tuple[float, int]]:
    """Number of centers found for each radius, sorted by radius."""
    base = base or SubtractiveParams()
    out = []
    for ra in sorted(float(r) for r in radii):
        params = SubtractiveParams(
            ra, base.rb_factor, base.eps_up, base.eps_down, base.k_max, base.radius_divisor
        )
        out.append((ra, select_centers(data, params).k))
    return out
