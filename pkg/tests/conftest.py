import sys
from pathlib import Path

import pytest

from roguewave import PhysicalConstants, build_configuration, solve_max_qref
from roguewave.shock import simulate

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def make_config(q_star, q_0):
    consts = PhysicalConstants()
    return build_configuration(q_star, q_0, solve_max_qref(q_star, q_0, consts), consts)


@pytest.fixture(scope="session")
def consts():
    return PhysicalConstants()


@pytest.fixture(scope="session")
def ex1():
    return make_config(3700.0, 3700.2)


@pytest.fixture(scope="session")
def ex2():
    return make_config(3700.0, 3700.8)


@pytest.fixture(scope="session", params=["ex1", "ex2"])
def cfg(request):
    return request.getfixturevalue(request.param)


@pytest.fixture(scope="session")
def run_ex1(ex1):
    return simulate(1000.0, 1.0, None, ex1)


@pytest.fixture(scope="session")
def run_ex2(ex2):
    return simulate(1000.0, 1.0, None, ex2)


@pytest.fixture(scope="session")
def scenario_dir():
    return SCENARIOS


def pytest_terminal_summary(terminalreporter):
    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(module, "REPORT", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
