"""Reproducible uniform noise records and the differintegral attenuation study."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gl import GridMismatch, SamplingGrid, Signal, differintegrate_at_end

#: Algorithm behind every noise record; recorded in experiment output headers.
RNG_ALGORITHM = "PCG64"

#: Differintegration orders of the attenuation study (derivatives left,
#: integrals right).
ATTENUATION_ORDERS = (1.5, 1.2, 0.9, 0.6, 0.3, -0.3, -0.6, -0.9, -1.2, -1.5)


@dataclass(frozen=True)
class NoiseSpec:
    """Uniform noise on [-amplitude, +amplitude], reproducible from the seed."""

    amplitude: float
    seed: int

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")


def uniform_noise(spec: NoiseSpec, grid: SamplingGrid) -> Signal:
    """One record of independent uniform draws; same spec -> same record."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    values = rng.uniform(-spec.amplitude, spec.amplitude, grid.sample_count)
    return Signal(grid=grid, values=values)


def corrupt(x: Signal, e: Signal) -> Signal:
    """Elementwise sum x + e; the records must share a grid."""
    if x.grid != e.grid:
        raise GridMismatch(f"grids differ: {x.grid} vs {e.grid}")
    return Signal(grid=x.grid, values=x.values + e.values)


def attenuation_table(
    amplitude: float,
    seeds: Sequence[int],
    orders: Sequence[float] = ATTENUATION_ORDERS,
    grid: SamplingGrid = SamplingGrid(period=0.001, memory=10.0),
) -> np.ndarray:
    """Differintegrals of independent noise records at each order.

    Entry (i, j) is the order-`orders[j]` differintegral, at the record end,
    of the noise record seeded by `seeds[i]`. Integration (negative order)
    attenuates noise by several orders of magnitude relative to derivation.
    """
    table = np.empty((len(seeds), len(orders)))
    for i, seed in enumerate(seeds):
        e = uniform_noise(NoiseSpec(amplitude=amplitude, seed=seed), grid)
        for j, order in enumerate(orders):
            table[i, j] = differintegrate_at_end(e, order)
    return table
