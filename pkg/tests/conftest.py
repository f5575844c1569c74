import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one summary line per acceptance criterion.

    Call ``criterion(number, title, detail)`` before asserting; the line is
    marked PASS or FAIL from the test outcome.
    """
    entry = {}

    def record(number, title, detail=""):
        entry.update(number=number, title=title, detail=detail)

    yield record
    if entry:
        failed = getattr(request.node, "_failed", False)
        status = "FAIL" if failed else "PASS"
        _LINES.append(f"[{status}] criterion {entry['number']}: {entry['title']} -- {entry['detail']}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed:
        item._failed = True


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
