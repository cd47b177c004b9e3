"""Grunwald-Letnikov weights and memory-limited differintegrals of sampled signals.

The differintegral of real order q (derivative for q > 0, identity for q = 0,
integral for q < 0) is evaluated as the truncated convolution

    D^q x(t) ~= T^(-q) * sum_j b_j x(t - jT)

with the binomial weights b_j generated by the recursion
b_0 = 1, b_j = (1 - (1 + q)/j) b_{j-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


class GridMismatch(ValueError):
    """Two signals that must share a sampling grid do not."""


def _snapped_sample_count(period: float, memory: float) -> int:
    # floor(L/T) + 1, with the ratio snapped to a nearby integer so that
    # e.g. 10/0.001 = 9999.999... does not lose a sample.
    ratio = memory / period
    return int(math.floor(ratio + 1e-9)) + 1


@dataclass(frozen=True)
class SamplingGrid:
    """Uniform sampling discretization: period (s/sample) and memory span (s)."""

    period: float
    memory: float

    def __post_init__(self):
        if not (self.period > 0):
            raise ValueError(f"sampling period must be positive, got {self.period}")
        if not (self.memory > 0):
            raise ValueError(f"memory length must be positive, got {self.memory}")
        if self.memory < self.period:
            raise ValueError("memory length must cover at least one period")

    @property
    def sample_count(self) -> int:
        return _snapped_sample_count(self.period, self.memory)

    def times(self) -> np.ndarray:
        """Sample instants 0, T, 2T, ..."""
        return np.arange(self.sample_count) * self.period


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled real series: values[k] = x(k*T) for k = 0..N-1."""

    grid: SamplingGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size != self.grid.sample_count:
            raise ValueError(
                f"expected {self.grid.sample_count} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("signal samples must all be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Convolution weights b_0..b_{J} for one differintegration order."""

    order: float
    weights: np.ndarray = field(repr=False)


@lru_cache(maxsize=512)
def _weights_array(order: float, count: int) -> np.ndarray:
    # b_j = (1 - (1+order)/j) b_{j-1}; cumprod applies the factors in index
    # order, so each element equals the recursion output to the last bit.
    b = np.empty(count)
    b[0] = 1.0
    if count > 1:
        j = np.arange(1, count, dtype=np.float64)
        np.cumprod(1.0 - (1.0 + order) / j, out=b[1:])
    b.setflags(write=False)
    return b


def gl_weights(order: float, count: int) -> WeightSequence:
    """Generate the first `count` Grunwald-Letnikov weights for `order`."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    return WeightSequence(order=float(order), weights=_weights_array(float(order), count))


if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _end_sum(w, x):
        # Neumaier-compensated sum of w[j]*x[n-1-j]; the convolution cancels
        # heavily for positive orders, so plain accumulation loses digits.
        n = x.size
        s = 0.0
        comp = 0.0
        for j in range(n):
            term = w[j] * x[n - 1 - j]
            t = s + term
            if abs(s) >= abs(term):
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
        return s + comp

    @njit(cache=True, nogil=True)
    def _running_sums(w, x):
        n = x.size
        out = np.empty(n)
        for k in range(n):
            s = 0.0
            comp = 0.0
            for j in range(k + 1):
                term = w[j] * x[k - j]
                t = s + term
                if abs(s) >= abs(term):
                    comp += (s - t) + term
                else:
                    comp += (term - t) + s
                s = t
            out[k] = s + comp
        return out

else:  # pragma: no cover - exercised only when numba is absent

    def _end_sum(w, x):
        return math.fsum(w * x[::-1])

    def _running_sums(w, x):
        n = x.size
        out = np.empty(n)
        for k in range(n):
            out[k] = math.fsum(w[: k + 1] * x[k::-1])
        return out


def differintegrate_at_end(x: Signal, order: float) -> float:
    """Differintegral of `x` at the final sample time (lower terminal 0)."""
    w = _weights_array(float(order), len(x))
    return float(x.grid.period ** (-order) * _end_sum(w, x.values))


def differintegrate_series(x: Signal, order: float) -> Signal:
    """Differintegral of `x` at every sample time.

    output[k] = T^(-order) * sum_{j<=k} b_j x[k-j]; the final element is
    bit-identical to differintegrate_at_end (same accumulation).
    """
    w = _weights_array(float(order), len(x))
    out = _running_sums(w, x.values) * x.grid.period ** (-order)
    return Signal(grid=x.grid, values=out)
