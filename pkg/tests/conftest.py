import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gsbconf.lie import build_envelope, envelope, heisenberg_virasoro, hv_order, virasoro, virasoro_order
from gsbconf.schema import Caps

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def hv():
    lie = heisenberg_virasoro()
    spec = hv_order()
    return lie, spec, build_envelope(lie, lie.locality, spec)


@pytest.fixture(scope="session")
def vir():
    lie = virasoro(3)
    spec = virasoro_order()
    return lie, spec, build_envelope(lie, lie.locality, spec)


@pytest.fixture(scope="session")
def vir_envelope():
    lie = virasoro(3)
    return envelope(lie, spec=virasoro_order(), caps=Caps(8, 6), bound=4)
