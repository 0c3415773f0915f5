import sys

import pytest

from kmdecomp.cartan import CartanDatum, a2, affine_a1, sl2


@pytest.fixture(scope="session")
def SL2():
    return sl2()


@pytest.fixture(scope="session")
def A2():
    return a2()


@pytest.fixture(scope="session")
def AFF():
    return affine_a1()


@pytest.fixture(scope="session")
def KRONECKER():
    return CartanDatum.from_matrix([[2, -2], [-2, 2]])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.LINES:
        terminalreporter.write_line(line)
