from pathlib import Path

import pytest

from ashacl.turtle import parse_file

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_graph():
    def load(name: str):
        return parse_file(FIXTURES / name)
    return load


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
