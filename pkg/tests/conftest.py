from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return _LINES.append


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
