import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bestpair.config import preset

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def exp1():
    return preset("exp1")


@pytest.fixture(scope="session")
def exp2():
    return preset("exp2")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# Acceptance reporting: one PASS/FAIL line per criterion, after the run.

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    item_marker = getattr(report, "_criterion", None)
    if item_marker is None:
        return
    num, title = item_marker
    entry = _criteria.setdefault(num, {"title": title, "failed": [], "ran": 0})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["ran"] += 1
        if report.outcome != "passed":
            entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result()._criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        entry = _criteria[num]
        status = "FAIL" if entry["failed"] or not entry["ran"] else "PASS"
        line = f"{status} criterion {num}: {entry['title']}"
        if entry["failed"]:
            line += f"  (failing: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
