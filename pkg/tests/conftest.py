import random

import pytest
from hypothesis import settings

from bsl.hexagon import load_hexagon_data
from bsl.polygon import group_from_dict, preset_modular

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def modular():
    return preset_modular()


@pytest.fixture(scope="session")
def hexagon():
    return group_from_dict(load_hexagon_data())


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for name in sorted(results):
            terminalreporter.write_line(results[name])
