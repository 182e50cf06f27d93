from __future__ import annotations

import sys
from pathlib import Path

import pytest

from planar_heyting.formats import parse_2cg
from planar_heyting.lattice_core import zha_from_2cg

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def load_2cg(name: str):
    return parse_2cg((FIXTURES / name).read_text())


@pytest.fixture
def running():
    return load_2cg("running.2cg")


@pytest.fixture
def running_zha(running):
    return zha_from_2cg(running)


@pytest.fixture
def rungs3():
    return load_2cg("rungs3.2cg")


@pytest.fixture
def rungs3q():
    return load_2cg("rungs3q.2cg")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(acceptance.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
