import sys
from pathlib import Path

import pytest

from scattering import OscillatorParams, make_grid

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def under():
    return OscillatorParams(0.3, 2.0, 1.0)


@pytest.fixture
def over():
    return OscillatorParams(5.0, 2.0, 1.0)


@pytest.fixture
def critical():
    return OscillatorParams(4.0, 2.0, 1.0)


@pytest.fixture
def grid20():
    return make_grid(20.0, 20.0)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
