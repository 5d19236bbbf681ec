import pytest

from chowforms.exactalg import PrimeField, Rationals

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def gf():
    return PrimeField()


@pytest.fixture
def qq():
    return Rationals()


@pytest.fixture(params=["gf", "qq"])
def field(request):
    return PrimeField() if request.param == "gf" else Rationals()
