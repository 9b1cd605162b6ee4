from __future__ import annotations

import pytest
from hypothesis import settings

from a4toric import IntersectionEngine, build_star_fan, compute_stabilizer

# Exact arithmetic makes individual examples slow but never flaky, so
# trade example count for a stable wall-clock budget.
settings.register_profile("exact", deadline=None, max_examples=30)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def star():
    return build_star_fan()


@pytest.fixture(scope="session")
def stabilizer(star):
    return compute_stabilizer(star)


@pytest.fixture(scope="session")
def engine(star):
    return IntersectionEngine(star.fan, star.e_index)


_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collector for one PASS/FAIL line per acceptance criterion."""
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
