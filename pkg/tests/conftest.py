import re

_RESULTS = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.failed:
        prev = _RESULTS.get(key, (True, 0.0))
        _RESULTS[key] = (prev[0] and report.passed, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), (ok, secs) in sorted(_RESULTS.items()):
        label = name.replace("_", " ")
        terminalreporter.write_line(f"criterion {num} ({label}): {'PASS' if ok else 'FAIL'} in {secs:.1f}s")
