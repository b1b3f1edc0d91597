import pytest

from app.fixtures import build_fixture


@pytest.fixture(scope="session")
def e1():
    return build_fixture("E1")


@pytest.fixture(scope="session")
def e2():
    return build_fixture("E2")


@pytest.fixture(scope="session")
def e3():
    return build_fixture("E3")


@pytest.fixture(scope="session")
def e4():
    return build_fixture("E4")
