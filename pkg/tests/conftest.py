import time

import pytest

from soamix.pipeline import Bench, OperatingPoint
from soamix.signalgen import make_time_grid


@pytest.fixture(scope="session")
def bench():
    return Bench()


@pytest.fixture(scope="session")
def op():
    return OperatingPoint()


@pytest.fixture(scope="session")
def small_grid():
    """One pulse period, 2048 samples (dt ~ 49 fs)."""
    return make_time_grid(10e9, 10e9, 2048)


@pytest.fixture(scope="session")
def timed_default_run():
    from soamix.harness.config import ScenarioConfig
    from soamix.harness.scenario import run_scenario

    t0 = time.perf_counter()
    run = run_scenario(ScenarioConfig.from_dict({}))
    return run, time.perf_counter() - t0


@pytest.fixture(scope="session")
def default_run(timed_default_run):
    return timed_default_run[0]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
