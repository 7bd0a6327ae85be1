import pytest

ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--extra-tables", action="store", default=None,
                     help="directory of additional table files (large sporadic groups)")


@pytest.fixture(scope="session")
def extra_tables_dir(request):
    return request.config.getoption("--extra-tables")


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
