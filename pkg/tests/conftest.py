import time

import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, budget, title): acceptance criterion with a time budget in s")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    num, budget, title = mark.args
    elapsed = dict(item.user_properties).get("elapsed", 0.0)
    _results[num] = (rep.passed, elapsed, budget, title)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        ok, elapsed, budget, title = _results[num]
        terminalreporter.write_line(
            f"CRITERION {num:2d} {'PASS' if ok else 'FAIL'}  {elapsed:7.2f}s / {budget}s  {title}")
