import numpy as np
import pytest

from hexovoid import ovoid as ov
from hexovoid.gf import FiniteField
from hexovoid.hexagon import build_hexagon


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long exhaustive runs (minutes)")


@pytest.fixture(scope="session")
def F4():
    return FiniteField(4)


@pytest.fixture(scope="session")
def F7():
    return FiniteField(7)


@pytest.fixture(scope="session")
def hex4(F4):
    return build_hexagon(F4)


@pytest.fixture(scope="session")
def O4(hex4):
    return ov.build_O(hex4)


@pytest.fixture(scope="session")
def lines4(hex4):
    return hex4.space.lines()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
