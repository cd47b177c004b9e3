"""Coefficient identification at fixed fractional powers.

Given one (possibly corrupted) unit-step response record and candidate
powers (alpha, beta), three simultaneous linear equations in (a1, a2, a3)
are assembled from differintegrals of the record. All equation orders are
shifted negative, so every operation applied to the noisy record is an
integration, which attenuates the error component instead of amplifying it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gl import SamplingGrid, Signal, differintegrate_at_end
from .simulate import FractionalModel, unit_step


class NonPositiveOrder(ValueError):
    """The leading fractional power must be positive."""


class SingularSystem(ArithmeticError):
    """The 3x3 system has rank < 3 at this grid; (alpha, beta) yield
    indistinguishable columns."""


@dataclass(frozen=True, eq=False)
class EquationSystem:
    """3x3 coefficient matrix (columns multiply a1, a2, a3) and right-hand side."""

    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        rhs = np.ascontiguousarray(self.rhs, dtype=np.float64)
        if matrix.shape != (3, 3) or rhs.shape != (3,):
            raise ValueError("expected a 3x3 matrix and a length-3 right-hand side")
        if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(rhs))):
            raise ValueError("system entries must all be finite")
        matrix.setflags(write=False)
        rhs.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rhs", rhs)


@dataclass(frozen=True)
class IdentificationResult:
    """Identified model plus the back-substitution residual of the solve."""

    model: FractionalModel
    residual: float


def integral_order_shift(alpha: float) -> int:
    """Smallest integer n with alpha - n strictly negative.

    Non-integer alpha maps to ceil(alpha); integer alpha maps to alpha + 1 so
    that the leading equation order stays a noise-attenuating integral.
    """
    if not alpha > 0:
        raise NonPositiveOrder(f"leading power must be positive, got {alpha}")
    n = math.ceil(alpha)
    if n == alpha:
        n += 1
    return int(n)


@lru_cache(maxsize=64)
def _step_rhs(grid: SamplingGrid, n: int) -> np.ndarray:
    # D^(-n-i) of the sampled unit step, i = 0..2. Computed numerically with
    # the same quadrature as the matrix side so the discretization bias
    # cancels in the solve.
    u = unit_step(grid)
    rhs = np.array([differintegrate_at_end(u, -float(n + i)) for i in range(3)])
    rhs.setflags(write=False)
    return rhs


def build_equations(record: Signal, alpha: float, beta: float) -> EquationSystem:
    """Assemble the three equations relating (a1, a2, a3) for one record.

    Row i holds differintegrals of the record at orders
    (alpha-n-i, beta-n-i, -n-i) with n = integral_order_shift(alpha); the
    right-hand side holds the matching differintegrals of the unit step.
    """
    if not alpha > beta > 0:
        raise ValueError(
            f"powers must satisfy alpha > beta > 0, got alpha={alpha}, beta={beta}"
        )
    n = integral_order_shift(alpha)
    matrix = np.array(
        [
            [
                differintegrate_at_end(record, alpha - n - i),
                differintegrate_at_end(record, beta - n - i),
                differintegrate_at_end(record, -float(n + i)),
            ]
            for i in range(3)
        ]
    )
    return EquationSystem(matrix=matrix, rhs=_step_rhs(record.grid, n))


_PIVOT_RTOL = 1e-12


def _solve_3x3(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting; raises SingularSystem."""
    a = matrix.astype(np.float64).copy()
    b = rhs.astype(np.float64).copy()
    scale = np.max(np.abs(a))
    if scale == 0.0:
        raise SingularSystem("coefficient matrix is identically zero")
    for col in range(3):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot_row, col]) < _PIVOT_RTOL * scale:
            raise SingularSystem(
                f"pivot {a[pivot_row, col]:.3e} below {_PIVOT_RTOL:g} * {scale:.3e}"
            )
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            b[[col, pivot_row]] = b[[pivot_row, col]]
        for row in range(col + 1, 3):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
            b[row] -= factor * b[col]
    x = np.empty(3)
    for row in (2, 1, 0):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def solve_coefficients(
    system: EquationSystem, alpha: float, beta: float
) -> IdentificationResult:
    """Solve the 3x3 system for (a1, a2, a3); powers are copied from the query."""
    coeffs = _solve_3x3(system.matrix, system.rhs)
    mismatch = system.matrix @ coeffs - system.rhs
    denom = np.where(np.abs(system.rhs) > 0, np.abs(system.rhs), 1.0)
    residual = float(np.max(np.abs(mismatch) / denom))
    model = FractionalModel(
        a1=float(coeffs[0]),
        a2=float(coeffs[1]),
        a3=float(coeffs[2]),
        alpha=float(alpha),
        beta=float(beta),
    )
    return IdentificationResult(model=model, residual=residual)


def identify_fixed_powers(
    record: Signal, alpha: float, beta: float
) -> IdentificationResult:
    """Build the equations for `record` at (alpha, beta) and solve them."""
    system = build_equations(record, alpha, beta)
    return solve_coefficients(system, alpha, beta)
