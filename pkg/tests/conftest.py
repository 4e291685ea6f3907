import pytest

import delaycrn

_ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="session")
def ex1_distinct():
    return delaycrn.load_fixture("ex1_distinct")


@pytest.fixture(scope="session")
def ex1_same():
    return delaycrn.load_fixture("ex1_same")


@pytest.fixture(scope="session")
def ex2():
    return delaycrn.load_fixture("ex2")


def pytest_configure(config):
    config.record_acceptance = record_acceptance


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
