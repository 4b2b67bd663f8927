import os
import pathlib
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def fixtures() -> pathlib.Path:
    return pathlib.Path(__file__).parent / "fixtures"


_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict():
    """Record one acceptance line; repeated in the terminal summary."""
    def emit(line: str):
        _ACCEPTANCE.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
