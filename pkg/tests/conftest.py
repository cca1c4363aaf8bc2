import numpy as np
import pytest

from mrlab.quadrature import QuadratureSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def coarse():
    """Cheaper node set for tests that only need a few digits."""
    return QuadratureSpec(1e-6, 1e6, 1024)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.LINES):
        terminalreporter.write_line(line)
