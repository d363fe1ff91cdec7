import pytest

from shintani.field import FractionalIdeal, NumberField
from shintani.invariants import make_datum, standard_fan

ACCEPTANCE_LINES: list[str] = []


def _instance(D, f):
    F = NumberField.quadratic(D)
    datum = make_datum(F, FractionalIdeal.principal(F(f)))
    return datum, standard_fan(datum)


@pytest.fixture(scope="session")
def Q5():
    return NumberField.quadratic(5)


@pytest.fixture(scope="session")
def Q2():
    return NumberField.quadratic(2)


@pytest.fixture(scope="session")
def sqrt5_f2():
    return _instance(5, 2)


@pytest.fixture(scope="session")
def sqrt2_f3():
    return _instance(2, 3)


@pytest.fixture(scope="session")
def sqrt5_f4():
    return _instance(5, 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
