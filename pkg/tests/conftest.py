import numpy as np
import pytest

from fgt_kernel import draw_sample, gaussian_kernel, truncated_pareto, uniform_01


@pytest.fixture(scope="session")
def gauss():
    return gaussian_kernel()


@pytest.fixture(scope="session")
def uniform():
    return uniform_01()


@pytest.fixture(scope="session")
def pareto():
    return truncated_pareto(0.02, 0.2, 1.0)


@pytest.fixture(scope="session")
def uniform_sample_5000(uniform):
    return draw_sample(uniform, 5000, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
