import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion tag")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    cid, title = marker.args
    entry = _RESULTS.setdefault(cid, {"title": title, "parts": []})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["parts"].append((item.name, report.passed))


def _key(cid):
    digits = "".join(ch for ch in cid if ch.isdigit())
    return int(digits), cid


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=_key):
        entry = _RESULTS[cid]
        ok = bool(entry["parts"]) and all(passed for _, passed in entry["parts"])
        failed = [name for name, passed in entry["parts"] if not passed]
        detail = f"  (failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {cid:>3} {'PASS' if ok else 'FAIL'}  {entry['title']}{detail}")
