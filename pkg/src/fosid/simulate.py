"""Time-domain responses of the three-term fractional-order model.

The model 1/(a1 s^alpha + a2 s^beta + a3) is discretized with the same
Grunwald-Letnikov weights used for identification, and the response is
stepped implicitly: at each sample the newest output is extracted in closed
form from the discretized balance equation (the system is linear, so no
inner iteration is needed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gl import Signal, SamplingGrid, _weights_array

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


class DegenerateDenominator(ArithmeticError):
    """a1*T^-alpha + a2*T^-beta + a3 vanished; the step update is undefined."""


@dataclass(frozen=True)
class FractionalModel:
    """Five-parameter process model 1/(a1 s^alpha + a2 s^beta + a3)."""

    a1: float
    a2: float
    a3: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > self.beta > 0:
            raise ValueError(
                f"fractional powers must satisfy alpha > beta > 0, "
                f"got alpha={self.alpha}, beta={self.beta}"
            )
        if self.a1 == 0:
            raise ValueError("a1 must be nonzero (the leading dynamics term)")

    def dc_gain(self) -> float:
        return 1.0 / self.a3


def unit_step(grid: SamplingGrid) -> Signal:
    """Unit step active from the first sample: x[k] = 1 for all k."""
    return Signal(grid=grid, values=np.ones(grid.sample_count))


if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _step_response(taps, r, denom):
        # c[k] = (r[k] - sum_{j=1..k} taps[j] c[k-j]) / denom, with the
        # history sum Neumaier-compensated: taps reach ~1/T^alpha, so the
        # cancellation against denom*c[k] is far below double ulps of the
        # largest terms.
        n = r.size
        c = np.empty(n)
        c[0] = r[0] / denom
        for k in range(1, n):
            s = 0.0
            comp = 0.0
            for j in range(1, k + 1):
                term = taps[j] * c[k - j]
                t = s + term
                if abs(s) >= abs(term):
                    comp += (s - t) + term
                else:
                    comp += (term - t) + s
                s = t
            c[k] = (r[k] - (s + comp)) / denom
        return c

else:  # pragma: no cover

    import math

    def _step_response(taps, r, denom):
        n = r.size
        c = np.empty(n)
        c[0] = r[0] / denom
        for k in range(1, n):
            hist = math.fsum(taps[1 : k + 1] * c[k - 1 :: -1])
            c[k] = (r[k] - hist) / denom
        return c


def simulate_response(model: FractionalModel, drive: Signal) -> Signal:
    """Response of `model` to the input `drive`, sample by sample.

    Full memory within the run horizon: each output depends on the entire
    preceding history.
    """
    grid = drive.grid
    n = grid.sample_count
    fa = model.a1 * grid.period ** (-model.alpha)
    fb = model.a2 * grid.period ** (-model.beta)
    denom = fa + fb + model.a3
    if denom == 0.0:
        raise DegenerateDenominator(
            "a1*T^-alpha + a2*T^-beta + a3 is zero for this model and grid"
        )
    taps = fa * _weights_array(model.alpha, n) + fb * _weights_array(model.beta, n)
    values = _step_response(taps, drive.values, denom)
    return Signal(grid=grid, values=values)
