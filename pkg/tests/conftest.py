import pytest

_RESULTS = {}
_REPORTS = []


@pytest.fixture
def report_lines():
    """Lines appended here are printed in the acceptance summary."""
    return _REPORTS


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _RESULTS[number] = (title, "PASS" if rep.passed else "FAIL", rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, verdict, secs = _RESULTS[number]
        tr.write_line(f"criterion {number:2d}: {verdict}  {title}  ({secs:.2f} s)")
    if _REPORTS:
        tr.section("dihedral formula report")
        for line in _REPORTS:
            tr.write_line(line)
