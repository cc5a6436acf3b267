"""Shared pytest plumbing: the acceptance-criterion summary table.

Tests marked with @pytest.mark.criterion(number, title) get one PASS or
FAIL line each in the terminal summary, in criterion order.
"""

import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        number, title = marker.args
        _results[number] = (title, report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, passed = _results[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title}")
