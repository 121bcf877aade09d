"""Collects acceptance outcomes and prints one line per criterion at the end."""

import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion a test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    key, title = marker
    entry = _criteria.setdefault(key, {"title": title, "ok": True, "tests": 0})
    entry["tests"] += 1
    if report.outcome != "passed":
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = (str(mark.args[0]), mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    def order(key):
        digits = key.rstrip("abcdefghijklmnopqrstuvwxyz")
        return (int(digits), key[len(digits):])
    for key in sorted(_criteria, key=order):
        entry = _criteria[key]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {key}: {entry['title']}")
