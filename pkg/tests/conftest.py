import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_LINES = []


def record(line: str) -> None:
    _LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
