import pytest

from reltilt import bqa

FIXTURES = ("a2", "ejem4", "noFadm", "kronecker")


@pytest.fixture(scope="session")
def workspaces():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = bqa.load("@" + name)
        return cache[name]
    return get


@pytest.fixture(scope="session")
def ejem4(workspaces):
    return workspaces("ejem4")


@pytest.fixture(scope="session")
def nofadm(workspaces):
    return workspaces("noFadm")


@pytest.fixture(scope="session")
def a2(workspaces):
    return workspaces("a2")


@pytest.fixture(scope="session")
def kron(workspaces):
    return workspaces("kronecker")
