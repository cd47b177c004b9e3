"""Identification of three-term fractional-order processes from step-response data.

The library covers the full pipeline: Grunwald-Letnikov differintegration of
sampled signals, time-domain simulation of 1/(a1 s^alpha + a2 s^beta + a3),
noise-attenuating construction of the coefficient equations, and grid /
refinement searches over the fractional powers.
"""

__version__ = "0.1.0"

from .gl import (
    GridMismatch,
    SamplingGrid,
    Signal,
    WeightSequence,
    differintegrate_at_end,
    differintegrate_series,
    gl_weights,
)
from .identify import (
    EquationSystem,
    IdentificationResult,
    NonPositiveOrder,
    SingularSystem,
    build_equations,
    identify_fixed_powers,
    integral_order_shift,
    solve_coefficients,
)
from .noise import (
    ATTENUATION_ORDERS,
    RNG_ALGORITHM,
    NoiseSpec,
    attenuation_table,
    corrupt,
    uniform_noise,
)
from .search import (
    Cell,
    PowerRange,
    RankedCandidate,
    RefinementSchedule,
    SearchOutcome,
    StageResult,
    SweepOutcome,
    algorithm1,
    algorithm2,
    early_abandon_sweep,
    fitness,
    grid_nominals,
)
from .simulate import (
    DegenerateDenominator,
    FractionalModel,
    simulate_response,
    unit_step,
)

__all__ = [
    "__version__",
    "ATTENUATION_ORDERS",
    "Cell",
    "DegenerateDenominator",
    "EquationSystem",
    "FractionalModel",
    "GridMismatch",
    "IdentificationResult",
    "NoiseSpec",
    "NonPositiveOrder",
    "PowerRange",
    "RankedCandidate",
    "RefinementSchedule",
    "RNG_ALGORITHM",
    "SamplingGrid",
    "SearchOutcome",
    "Signal",
    "SingularSystem",
    "StageResult",
    "SweepOutcome",
    "WeightSequence",
    "algorithm1",
    "algorithm2",
    "attenuation_table",
    "build_equations",
    "corrupt",
    "differintegrate_at_end",
    "differintegrate_series",
    "early_abandon_sweep",
    "fitness",
    "gl_weights",
    "grid_nominals",
    "identify_fixed_powers",
    "integral_order_shift",
    "simulate_response",
    "solve_coefficients",
    "uniform_noise",
    "unit_step",
]
