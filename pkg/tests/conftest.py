import random

import pytest

from fanorigid.exclusion import ratio

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def cold_engine():
    """Clear the ratio engine caches so timings include the real work."""
    ratio.verify_ratio_bound.cache_clear()
    ratio.ratio_minimum.cache_clear()
    yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
