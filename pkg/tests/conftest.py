"""Collects the one-line acceptance outcomes and prints them after the run."""

import time

import pytest

_LINES = []


class _Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.start = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.start


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("acceptance")
    number, title = marker.args
    crit = _Criterion(number, title)
    yield crit
    report = getattr(request.node, "rep_call", None)
    ok = report is not None and report.passed
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({crit.elapsed():.2f}s)"
    _LINES.append((number, line))
    print(line)


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    if report.when == "call":
        item.rep_call = report
    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
