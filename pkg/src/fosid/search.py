"""Fractional-power state-space search.

Two strategies over the (alpha, beta) plane, both ranking candidate models
by the sum of squared differences between a reference step response and the
candidate's simulated response:

* uniform grid: subdivide each power range once and evaluate every nominal
  pair (midpoints of the subdivisions);
* buffered refinement: evaluate a coarse grid, keep the best few candidates'
  cells, subdivide those, and repeat through a schedule, optionally skipping
  the tail of each fixed-alpha beta sweep once the fitness starts rising.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .gl import Signal
from .identify import SingularSystem, identify_fixed_powers
from .simulate import DegenerateDenominator, FractionalModel, simulate_response, unit_step


@dataclass(frozen=True)
class PowerRange:
    """Search ranges for the two fractional powers; alpha stays above beta."""

    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float

    def __post_init__(self):
        if not self.alpha_min < self.alpha_max:
            raise ValueError("alpha range must satisfy alpha_min < alpha_max")
        if not self.beta_min < self.beta_max:
            raise ValueError("beta range must satisfy beta_min < beta_max")
        if not self.beta_min > 0:
            raise ValueError("beta_min must be positive")
        if not self.alpha_min > self.beta_max:
            raise ValueError(
                "alpha_min must exceed beta_max so every candidate keeps alpha > beta"
            )


@dataclass(frozen=True)
class Cell:
    """One (alpha-interval, beta-interval) of the search subdivision."""

    alpha_lo: float
    alpha_hi: float
    beta_lo: float
    beta_hi: float


@dataclass(frozen=True)
class RankedCandidate:
    """A candidate model, its fitness, and the cell its powers came from."""

    model: FractionalModel
    fitness: float
    cell: Cell


@dataclass(frozen=True)
class RefinementSchedule:
    """Stages (m_k, n_k, p_k): subdivisions per axis and buffer size."""

    stages: tuple[tuple[int, int, int], ...]
    stop_threshold: Optional[float] = None

    def __post_init__(self):
        if not self.stages:
            raise ValueError("schedule must contain at least one stage")
        stages = tuple((int(m), int(n), int(p)) for m, n, p in self.stages)
        for m, n, p in stages:
            if m < 1 or n < 1 or p < 1:
                raise ValueError(f"stage values must all be >= 1, got {(m, n, p)}")
        object.__setattr__(self, "stages", stages)


@dataclass(frozen=True)
class StageResult:
    """Outcome of one evaluate-and-rank pass."""

    candidates: tuple[RankedCandidate, ...]  # ranked ascending by fitness
    buffer: tuple[RankedCandidate, ...]  # best p, seeds of the next stage
    nominal_count: int  # grid points before duplicate merging
    unique_count: int  # grid points after duplicate merging
    evaluations: int  # models actually evaluated (< unique under early abandon)


@dataclass(frozen=True)
class SearchOutcome:
    """Per-stage results plus the best model of the last executed stage."""

    stages: tuple[StageResult, ...]
    best: RankedCandidate


@dataclass(frozen=True)
class SweepOutcome:
    """Early-abandon sweep result: what got evaluated, ranked, plus the count."""

    candidates: tuple[RankedCandidate, ...]
    best: RankedCandidate
    evaluations: int


def fitness(candidate: FractionalModel, reference: Signal) -> float:
    """Sum of squared sample differences between `reference` and the
    candidate's unit-step response on the same grid. Lower is better."""
    response = simulate_response(candidate, unit_step(reference.grid))
    diff = reference.values - response.values
    return float(diff @ diff)


def grid_nominals(lo: float, hi: float, m: int) -> list[float]:
    """Midpoints of the m equal subdivisions of [lo, hi]."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    if m < 1:
        raise ValueError(f"need at least one subdivision, got {m}")
    return [lo + (2 * i - 1) * (hi - lo) / (2 * m) for i in range(1, m + 1)]


def _rank_key(c: RankedCandidate):
    return (c.fitness, c.model.alpha, c.model.beta)


def _evaluate(
    record: Signal, reference: Signal, alpha: float, beta: float, cell: Cell
) -> RankedCandidate:
    """Identify coefficients at fixed powers, then score the model.

    Singular solves and degenerate simulations are kept in the ranking with
    infinite fitness rather than dropped.
    """
    try:
        result = identify_fixed_powers(record, alpha, beta)
        return RankedCandidate(
            model=result.model, fitness=fitness(result.model, reference), cell=cell
        )
    except (SingularSystem, DegenerateDenominator):
        failed = FractionalModel(
            a1=math.nan, a2=math.nan, a3=math.nan, alpha=alpha, beta=beta
        )
        return RankedCandidate(model=failed, fitness=math.inf, cell=cell)


def _subdivide(cell: Cell, m: int, n: int) -> list[tuple[float, float, Cell]]:
    """(alpha, beta, subcell) for the m x n midpoint nominals of `cell`,
    alpha-major, both axes ascending."""
    da = (cell.alpha_hi - cell.alpha_lo) / m
    db = (cell.beta_hi - cell.beta_lo) / n
    alphas = grid_nominals(cell.alpha_lo, cell.alpha_hi, m)
    betas = grid_nominals(cell.beta_lo, cell.beta_hi, n)
    out = []
    for i, a in enumerate(alphas):
        for j, b in enumerate(betas):
            sub = Cell(
                alpha_lo=cell.alpha_lo + i * da,
                alpha_hi=cell.alpha_lo + (i + 1) * da,
                beta_lo=cell.beta_lo + j * db,
                beta_hi=cell.beta_lo + (j + 1) * db,
            )
            out.append((a, b, sub))
    return out


def _evaluate_all(
    tasks: Sequence[tuple[float, float, Cell]],
    evaluate: Callable[[float, float, Cell], RankedCandidate],
    workers: Optional[int],
) -> list[RankedCandidate]:
    if workers is not None and workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda t: evaluate(*t), tasks))
    return [evaluate(*t) for t in tasks]


def algorithm1(
    power_range: PowerRange,
    m: int,
    n: int,
    record: Signal,
    fitness_reference: Optional[Signal] = None,
    workers: Optional[int] = None,
) -> tuple[RankedCandidate, ...]:
    """Uniform m x n grid search; returns all candidates ranked ascending by
    fitness (ties broken by (alpha, beta)).

    `record` is the measured response the equations are built from; by
    default it also serves as the fitness reference. Reproduction runs with
    synthetic data pass the uncorrupted response separately.
    """
    reference = record if fitness_reference is None else fitness_reference
    full = Cell(
        power_range.alpha_min,
        power_range.alpha_max,
        power_range.beta_min,
        power_range.beta_max,
    )
    tasks = _subdivide(full, m, n)
    evaluated = _evaluate_all(
        tasks, lambda a, b, cell: _evaluate(record, reference, a, b, cell), workers
    )
    return tuple(sorted(evaluated, key=_rank_key))


def _sweep_rows(
    rows: Sequence[tuple[float, Sequence[tuple[float, float, Cell]]]],
    evaluate: Callable[[float, float, Cell], RankedCandidate],
) -> list[RankedCandidate]:
    """Fixed-alpha beta sweeps with early abandonment.

    The first two candidates of each row are always evaluated; from the
    third onward the rest of the row is abandoned as soon as the newest
    fitness strictly exceeds the previous one (unimodal-profile assumption).
    """
    out = []
    for _, row in rows:
        prev = None
        for idx, (a, b, cell) in enumerate(row):
            cand = evaluate(a, b, cell)
            out.append(cand)
            if idx >= 2 and prev is not None and cand.fitness > prev:
                break
            prev = cand.fitness
    return out


def early_abandon_sweep(
    alpha_nominals: Sequence[float],
    beta_nominals: Sequence[float],
    record: Signal,
    fitness_reference: Optional[Signal] = None,
) -> SweepOutcome:
    """Sweep the alpha x beta nominal grid with per-row early abandonment.

    Nominals must be sorted ascending. Returns the evaluated subset (ranked),
    the best candidate found, and how many evaluations were performed.
    """
    if list(alpha_nominals) != sorted(alpha_nominals) or list(
        beta_nominals
    ) != sorted(beta_nominals):
        raise ValueError("nominal values must be sorted ascending")
    reference = record if fitness_reference is None else fitness_reference
    rows = []
    for a in alpha_nominals:
        row = [(a, b, Cell(a, a, b, b)) for b in beta_nominals]
        rows.append((a, row))
    evaluated = _sweep_rows(
        rows, lambda a, b, cell: _evaluate(record, reference, a, b, cell)
    )
    ranked = tuple(sorted(evaluated, key=_rank_key))
    return SweepOutcome(candidates=ranked, best=ranked[0], evaluations=len(ranked))


def algorithm2(
    power_range: PowerRange,
    schedule: RefinementSchedule,
    record: Signal,
    fitness_reference: Optional[Signal] = None,
    early_abandon: bool = False,
    workers: Optional[int] = None,
) -> SearchOutcome:
    """Buffered multi-level refinement.

    Stage 1 evaluates the m1 x n1 midpoint nominals of the full range; the
    best p1 candidates' cells (duplicates merged) are each subdivided
    m2 x n2 for stage 2, and so on through the schedule. Stops early once a
    stage's best fitness reaches the schedule's stop threshold, if one is
    set. The final answer is the best model of the last executed stage.
    """
    reference = record if fitness_reference is None else fitness_reference
    evaluate = lambda a, b, cell: _evaluate(record, reference, a, b, cell)

    parents = [
        Cell(
            power_range.alpha_min,
            power_range.alpha_max,
            power_range.beta_min,
            power_range.beta_max,
        )
    ]
    stage_results = []
    for m, n, p in schedule.stages:
        tasks = []
        for parent in parents:
            tasks.extend(_subdivide(parent, m, n))
        nominal_count = len(tasks)
        seen = set()
        unique_tasks = []
        for a, b, cell in tasks:
            key = (round(a, 12), round(b, 12))
            if key not in seen:
                seen.add(key)
                unique_tasks.append((a, b, cell))
        unique_count = len(unique_tasks)

        if early_abandon:
            # one sweep row per (cell, alpha); beta profiles are only assumed
            # unimodal within a single cell
            rows = []
            for parent in parents:
                chunk = _subdivide(parent, m, n)
                for i in range(m):
                    row = chunk[i * n : (i + 1) * n]
                    rows.append((row[0][0], row))
            evaluated = _sweep_rows(rows, evaluate)
        else:
            evaluated = _evaluate_all(unique_tasks, evaluate, workers)

        ranked = tuple(sorted(evaluated, key=_rank_key))
        if p > len(ranked):
            raise ValueError(
                f"buffer size {p} exceeds the {len(ranked)} candidates produced"
            )
        buffer = ranked[:p]
        stage_results.append(
            StageResult(
                candidates=ranked,
                buffer=buffer,
                nominal_count=nominal_count,
                unique_count=unique_count,
                evaluations=len(ranked),
            )
        )
        if (
            schedule.stop_threshold is not None
            and buffer[0].fitness <= schedule.stop_threshold
        ):
            break
        next_cells = []
        for cand in buffer:
            if cand.cell not in next_cells:
                next_cells.append(cand.cell)
        parents = next_cells

    return SearchOutcome(
        stages=tuple(stage_results), best=stage_results[-1].buffer[0]
    )
