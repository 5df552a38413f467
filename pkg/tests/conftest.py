"""Acceptance bookkeeping: one pass/fail line per criterion at session end."""

from __future__ import annotations

_CRITERIA: dict[str, tuple[int, str]] = {}
_OUTCOMES: dict[int, bool] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    number, _ = _CRITERIA[report.nodeid]
    if report.when == "call" or report.failed:
        _OUTCOMES[number] = _OUTCOMES.get(number, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in sorted(set(_CRITERIA.values())):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[_OUTCOMES.get(number)]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title}")
