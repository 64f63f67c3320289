import os

import pytest

from qanoise import kernels
from qanoise.dataset import load_squad

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def toy_path():
    return fixture_path("toy_squad.json")


@pytest.fixture
def toy():
    return load_squad(fixture_path("toy_squad.json"))


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    """Run a test once per available kernel backend."""
    before = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(before)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if not test_acceptance.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.VERDICTS):
        terminalreporter.write_line(test_acceptance.VERDICTS[n])
