import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pisotlab import parse_polynomial  # noqa: E402

GOLDEN = "x^2-x-1"
SILVER = "x^2-2x-1"
TRIBONACCI = "x^3-x^2-x-1"
SMALLEST = "x^3-x-1"
QUARTIC = "x^4-x^3-1"


@pytest.fixture(scope="session")
def golden():
    return parse_polynomial(GOLDEN)


@pytest.fixture(scope="session")
def silver():
    return parse_polynomial(SILVER)


@pytest.fixture(scope="session")
def trib():
    return parse_polynomial(TRIBONACCI)


@pytest.fixture(scope="session")
def smallest():
    return parse_polynomial(SMALLEST)


@pytest.fixture(scope="session")
def quartic():
    return parse_polynomial(QUARTIC)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
