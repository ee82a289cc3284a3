import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from geodisc.frontend.cli import load_problem

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("quick", max_examples=20, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_collection_modifyitems(config, items):
    if os.environ.get("GEODISC_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch example; set GEODISC_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def problem():
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = load_problem(PROBLEMS / name)
        return cache[name]

    return load


def pytest_terminal_summary(terminalreporter):
    import criteria

    lines = criteria.summary_lines()
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
