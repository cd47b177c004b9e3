import numpy as np
import pytest

from fosid import (
    FractionalModel,
    SamplingGrid,
    Signal,
    simulate_response,
    unit_step,
)

#: the reference experiment: model identified throughout the suite
PAPER_MODEL = FractionalModel(a1=0.8, a2=0.5, a3=1.0, alpha=2.23, beta=0.88)
TRUE_COEFFS = np.array([0.8, 0.5, 1.0])


@pytest.fixture(scope="session")
def paper_grid() -> SamplingGrid:
    return SamplingGrid(period=0.001, memory=10.0)


@pytest.fixture(scope="session")
def fast_grid() -> SamplingGrid:
    return SamplingGrid(period=0.01, memory=10.0)


@pytest.fixture(scope="session")
def paper_model() -> FractionalModel:
    return PAPER_MODEL


@pytest.fixture(scope="session")
def clean_paper_response(paper_grid) -> Signal:
    return simulate_response(PAPER_MODEL, unit_step(paper_grid))


@pytest.fixture(scope="session")
def clean_fast_response(fast_grid) -> Signal:
    return simulate_response(PAPER_MODEL, unit_step(fast_grid))


def rel_err(estimate, truth):
    return np.abs(np.asarray(estimate) - np.asarray(truth)) / np.abs(np.asarray(truth))
