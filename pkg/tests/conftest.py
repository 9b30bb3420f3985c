from pathlib import Path

import pytest

from src.document import load_input
from src.exactfield import make_field
from src.skewring import MuMatrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


@pytest.fixture
def F5():
    return make_field(5)


@pytest.fixture
def F13():
    return make_field(13)


@pytest.fixture
def plane13(F13):
    """n = 2, z2 z1 = 2 z1 z2 over F13."""
    return MuMatrix.from_upper(F13, 2, {(0, 1): 2})


@pytest.fixture
def plane5(F5):
    return MuMatrix.from_upper(F5, 2, {(0, 1): 2})


@pytest.fixture(scope="session")
def cv_doc():
    return load_input(fixture_path("cv-5-3.json"))


@pytest.fixture(scope="session")
def vvw_doc():
    return load_input(fixture_path("vvw-gca.json"))


@pytest.fixture(scope="session")
def vvw23_doc():
    return load_input(fixture_path("vvw-gca-f23.json"))


@pytest.fixture(scope="session")
def squares_doc():
    return load_input(fixture_path("squares-f5.json"))
