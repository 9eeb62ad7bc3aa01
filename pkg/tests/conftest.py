"""Collects acceptance results and prints one PASS/FAIL line per criterion."""

from collections import OrderedDict

_RESULTS = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _RESULTS.setdefault(mark.args[0], [])
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    name = dict(report.user_properties).get("criterion")
    if name is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _RESULTS[name].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    ran = {k: v for k, v in _RESULTS.items() if v}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcomes in ran.items():
        terminalreporter.write_line(f"{'PASS' if all(outcomes) else 'FAIL'}  {name}")
