import pytest

from helpers import CRITERIA_LOG


def pytest_addoption(parser):
    parser.addoption("--bench", choices=("default", "strict"), default="default",
                     help="strict: the directional timing criterion gates the run")


@pytest.fixture
def bench_mode(request):
    return request.config.getoption("--bench")


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LOG:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LOG:
            terminalreporter.write_line(line)
