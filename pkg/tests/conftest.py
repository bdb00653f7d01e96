"""Shared pytest plumbing: acceptance-criterion summary lines.

Each acceptance test records a one-line verdict; the lines are replayed in a
dedicated section of the terminal summary so a full-suite run ends with a
compact pass/fail table for the nine acceptance criteria.
"""
from __future__ import annotations

_CRITERION_LINES: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    _CRITERION_LINES[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        passed, detail = _CRITERION_LINES[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} - {detail}")
