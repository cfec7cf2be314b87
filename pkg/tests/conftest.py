import pytest

_OUTCOMES: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number, title = mark.args
    entry = _OUTCOMES.setdefault(number, {"title": title, "passed": True, "seconds": 0.0, "failures": []})
    entry["seconds"] += report.duration
    if report.failed:
        entry["passed"] = False
        crash = getattr(report.longrepr, "reprcrash", None)
        entry["failures"].append(crash.message.splitlines()[0] if crash else item.name)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        e = _OUTCOMES[number]
        status = "PASS" if e["passed"] else "FAIL"
        line = f"criterion {number:2d} {status}  {e['title']}  ({e['seconds']:.1f}s)"
        if e["failures"]:
            line += "  -- " + "; ".join(f[:120] for f in e["failures"])
        terminalreporter.write_line(line)
