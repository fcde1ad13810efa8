import re

import pytest

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str]] = {}
_notes: list[str] = []


@pytest.fixture
def acceptance_note():
    """Append a line to the acceptance summary printed at the end of the run."""
    return _notes.append


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n, name = int(m.group(1)), m.group(2)
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(n, (None, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _results[n] = (name.replace("_", " "), status)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        name, status = _results[n]
        tr.write_line(f"criterion {n:2d} {status}: {name}")
    for line in _notes:
        tr.write_line(line)
