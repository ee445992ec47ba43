"""Per-criterion PASS/FAIL summary for tests marked ``criterion(n)``."""

from __future__ import annotations

from collections import defaultdict

import pytest

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)
_criteria: dict[str, int] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = int(mark.args[0])


def pytest_runtest_logreport(report):
    n = _criteria.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[n].append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        ok = all(o == "passed" for _, o in results)
        failed = [nid.split("::")[-1] for nid, o in results if o != "passed"]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({len(results)} test(s))"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid256():
    from probsub.grid import make_grid

    return make_grid(10.0, 256)
