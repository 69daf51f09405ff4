"""Per-criterion summary for the acceptance suite.

Tests carrying ``@pytest.mark.criterion(n, title)`` are tallied and one
PASS/FAIL line per criterion is printed at the end of the run, together
with any ``measured`` values recorded through ``record_property``.
"""
import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    entry = _results.setdefault(number, {"title": title, "ok": True, "measured": []})
    if rep.failed:
        entry["ok"] = False
    if rep.when == "call":
        entry["measured"].extend(f"{k}={v}" for k, v in item.user_properties if k != "runtime")
        entry["measured"].extend(f"runtime={v}" for k, v in item.user_properties if k == "runtime")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        r = _results[number]
        status = "PASS" if r["ok"] else "FAIL"
        detail = "; ".join(r["measured"])
        tr.write_line(f"criterion {number:2d} {status}  {r['title']}" + (f"  [{detail}]" if detail else ""))
