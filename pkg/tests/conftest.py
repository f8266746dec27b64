import os
import sys

import pytest

HERE = os.path.dirname(__file__)
DATA = os.path.join(os.path.dirname(HERE), "data")
sys.path.insert(0, HERE)

_criteria: dict[int, dict] = {}


def _entry(item):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return None
    n, title = mark.args
    return _criteria.setdefault(n, {"title": title, "outcome": None, "notes": []})


@pytest.fixture
def data():
    return lambda name: os.path.join(DATA, name)


@pytest.fixture
def note(request):
    entry = _entry(request.node)
    return entry["notes"].append if entry is not None else (lambda _msg: None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    entry = _entry(item)
    if entry is None:
        return
    if rep.failed:
        entry["outcome"] = "FAIL"
    elif rep.when == "call" and entry["outcome"] != "FAIL":
        entry["outcome"] = "SKIP" if rep.skipped else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {e['outcome'] or 'NOT RUN':4s}  {e['title']}")
        for msg in e["notes"]:
            terminalreporter.write_line(f"    {msg}")
