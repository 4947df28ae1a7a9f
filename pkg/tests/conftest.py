import pytest

from graphcone import load_fixture


@pytest.fixture(scope="session")
def lm():
    return load_fixture("littleman")


@pytest.fixture(scope="session")
def hammock():
    return load_fixture("hammock")



def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
