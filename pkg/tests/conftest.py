from pathlib import Path

import pytest

from floodopt.model import default_site_grid
from floodopt.objective import ObjectiveConfig
from floodopt.oracle import exact_optimum

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def grid6():
    return default_site_grid(6)


@pytest.fixture(scope="session")
def config():
    return ObjectiveConfig()


@pytest.fixture(scope="session")
def unit_config():
    return ObjectiveConfig(cost_scale=1.0)


@pytest.fixture(scope="session")
def oracle6(grid6, config):
    return exact_optimum(grid6, config)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
