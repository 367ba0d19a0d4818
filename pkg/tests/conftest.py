import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _criteria.get(report.nodeid)
    if marker is not None:
        marker["outcome"] = "PASS" if report.passed else "FAIL"


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = {"number": m.args[0], "title": m.args[1], "outcome": None}


def pytest_terminal_summary(terminalreporter):
    ran = [c for c in _criteria.values() if c["outcome"] is not None]
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ran, key=lambda c: c["number"]):
        terminalreporter.write_line(f"criterion {c['number']:>2}: {c['outcome']}  {c['title']}")
