import pytest

from mcpp import battery
from mcpp.instance import MCPPInstance


@pytest.fixture
def p22():
    return MCPPInstance.from_dict(
        {"n": 4, "blocks": [[1, 2], [3, 4]], "terms": [{"vars": [1, 3], "coef": 1}, {"vars": [2], "coef": 1}]}
    )


@pytest.fixture
def fam22():
    return battery.family("EDGE22")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
